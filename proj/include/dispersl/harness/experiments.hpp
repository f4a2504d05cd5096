#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "dispersl/elliptic.hpp"
#include "dispersl/errors.hpp"
#include "dispersl/harness/config.hpp"
#include "dispersl/norms.hpp"
#include "dispersl/sl_stepper.hpp"
#include "dispersl/torus_grid.hpp"

namespace dispersl::harness {

/// One (h, dt) run. Error columns are empty when there is no reference or
/// the run failed; status is "ok" or the failure message.
struct ConvergenceRow {
  double h = 0.0;
  double dt = 0.0;
  double final_time = 0.0;
  std::optional<double> rel_l2_error;
  std::optional<double> hs_star_error;   // ||e||_{2,2,*}
  std::optional<double> weighted_error;  // ||e||_{2,2,Delta}
  double wall_seconds = 0.0;
  int max_fp_iters = 0;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
  bool operator==(const ConvergenceRow&) const = default;
};

using ConvergenceTable = std::vector<ConvergenceRow>;

struct InitialData {
  ScalarFunction u0;
  ScalarFunction u0_deriv;
};

inline InitialData initial_data(const ExperimentSpec& spec) {
  if (spec.initial == InitialCondition::sine) {
    const double k = 2.0 * std::numbers::pi;
    return {[k](double x) { return std::sin(k * x); },
            [k](double x) { return k * std::cos(k * x); }};
  }
  const CnoidalWave wave = cnoidal_wave(spec.scheme.nu);
  return {[wave](double x) { return wave(x, 0.0); },
          [wave](double x) { return wave.derivative(x, 0.0, 1); }};
}

/// Runs cfg on grid and fills one row, catching numerical failures.
inline ConvergenceRow run_row(const ExperimentSpec& spec, const SchemeConfig& cfg,
                              const TorusGrid& grid) {
  ConvergenceRow row;
  row.h = grid.h();
  row.dt = cfg.dt;
  try {
    const InitialData init = initial_data(spec);
    const RunResult r = run(cfg, grid, init.u0, init.u0_deriv, StepOptions{spec.threads});
    row.final_time = r.final_time;
    row.wall_seconds = r.wall_seconds;
    row.max_fp_iters = r.stats.max_iters;
    if (spec.reference == Reference::cnoidal) {
      const CnoidalWave wave = cnoidal_wave(cfg.nu);
      const PiecewiseCubic uh = interpolant(r.final_state);
      const double T = r.final_time;
      row.rel_l2_error = relative_l2_error(
          [&](double x) { return uh.eval(x, 0); },
          [&](double x) { return wave(x, T); }, grid);
      const double e0 =
          l2_norm([&](double x) { return uh.eval(x, 0) - wave(x, T); }, grid);
      const double e2 = l2_norm(
          [&](double x) { return uh.eval(x, 2) - wave.derivative(x, T, 2); }, grid);
      row.hs_star_error = star_norm(e0, e2);
      row.weighted_error = weighted_norm(e0, e2, 2, grid.h(), cfg.dt);
    }
  } catch (const Error& e) {
    row.status = std::string("failed: ") + e.what();
    row.rel_l2_error.reset();
    row.hs_star_error.reset();
    row.weighted_error.reset();
  }
  return row;
}

/// Fixed grid, one run per dt, rows by dt descending.
inline ConvergenceTable convergence_in_dt(const ExperimentSpec& spec) {
  if (spec.sweep != SweepKind::dt)
    throw ConfigError("convergence_in_dt: the experiment is not a dt sweep");
  if (spec.sweep_values.empty()) throw ConfigError("convergence_in_dt: empty dt list");
  std::vector<double> dts = spec.sweep_values;
  std::stable_sort(dts.begin(), dts.end(), std::greater<>());
  const TorusGrid grid(spec.nx);
  ConvergenceTable table;
  for (double dt : dts) {
    SchemeConfig cfg = spec.scheme;
    cfg.dt = dt;
    table.push_back(run_row(spec, cfg, grid));
  }
  return table;
}

/// nx = 1/h with dt = coeff h^exp per row; N_t = floor(T/dt), final time N_t dt.
inline ConvergenceTable convergence_in_h(const ExperimentSpec& spec) {
  if (spec.sweep != SweepKind::h)
    throw ConfigError("convergence_in_h: the experiment is not an h sweep");
  if (spec.sweep_values.empty()) throw ConfigError("convergence_in_h: empty h list");
  if (!spec.dt_rule_coeff || !spec.dt_rule_exp)
    throw ConfigError("convergence_in_h: missing dt rule");
  std::vector<double> hs = spec.sweep_values;
  std::stable_sort(hs.begin(), hs.end(), std::greater<>());
  ConvergenceTable table;
  for (double h : hs) {
    const double cells = std::round(1.0 / h);
    if (std::abs(cells * h - 1.0) > 1e-12 || cells < TorusGrid::min_cells)
      throw ConfigError("convergence_in_h: 1/h must be a whole number >= 4, got h = " +
                        std::to_string(h));
    const TorusGrid grid(static_cast<std::size_t>(cells));
    SchemeConfig cfg = spec.scheme;
    cfg.dt = *spec.dt_rule_coeff * std::pow(grid.h(), *spec.dt_rule_exp);
    table.push_back(run_row(spec, cfg, grid));
  }
  return table;
}

/// Single run at the configured dt and nx.
inline ConvergenceRow run_single(const ExperimentSpec& spec) {
  return run_row(spec, spec.scheme, TorusGrid(spec.nx));
}

enum class Column { h, dt, final_time, rel_l2_error, hs_star_error, weighted_error };

inline std::optional<double> column_value(const ConvergenceRow& row, Column c) {
  switch (c) {
    case Column::h: return row.h;
    case Column::dt: return row.dt;
    case Column::final_time: return row.final_time;
    case Column::rel_l2_error: return row.rel_l2_error;
    case Column::hs_star_error: return row.hs_star_error;
    case Column::weighted_error: return row.weighted_error;
  }
  return std::nullopt;
}

/// Least-squares slope of log y against log x over the last `tail` points.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y,
                        std::size_t tail = 2) {
  if (x.size() != y.size()) throw InvalidInput("fit_slope: x and y differ in length");
  if (tail < 2) throw InvalidInput("fit_slope: tail must be at least 2");
  if (x.size() < tail)
    throw InvalidInput("fit_slope: need " + std::to_string(tail) + " points, have " +
                       std::to_string(x.size()));
  const std::size_t first = x.size() - tail;
  double mx = 0.0, my = 0.0;
  std::vector<double> lx, ly;
  for (std::size_t i = first; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw DomainError("fit_slope: values must be positive and finite");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
    mx += lx.back();
    my += ly.back();
  }
  mx /= static_cast<double>(tail);
  my /= static_cast<double>(tail);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (!(sxx > 0.0)) throw DomainError("fit_slope: x values coincide");
  return sxy / sxx;
}

/// Slope over the table rows; empty values (failed rows, no reference) are an error.
inline double fit_slope(const ConvergenceTable& table, Column x, Column y,
                        std::size_t tail = 2) {
  std::vector<double> xs, ys;
  for (const auto& row : table) {
    const auto xv = column_value(row, x), yv = column_value(row, y);
    if (!xv || !yv) throw DomainError("fit_slope: table has empty values");
    xs.push_back(*xv);
    ys.push_back(*yv);
  }
  return fit_slope(xs, ys, tail);
}

/// fit_slope when the table has enough complete rows, empty otherwise.
inline std::optional<double> try_fit_slope(const ConvergenceTable& table, Column x,
                                           Column y, std::size_t tail = 2) {
  if (table.size() < tail) return std::nullopt;
  try {
    return fit_slope(table, x, y, tail);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace dispersl::harness
