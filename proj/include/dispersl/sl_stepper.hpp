#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dispersl/detail/kahan.hpp"
#include "dispersl/detail/parallel.hpp"
#include "dispersl/dispersive_operator.hpp"
#include "dispersl/errors.hpp"
#include "dispersl/flux.hpp"
#include "dispersl/interpolation.hpp"
#include "dispersl/norms.hpp"
#include "dispersl/torus_grid.hpp"

namespace dispersl {

/// Parameters of the fully semi-Lagrangian scheme
///   u_j^n = sum gamma I_h[U^{n-1}](x_j - f(u_j^n) dt + lambda (nu dt)^{1/3}).
struct SchemeConfig {
  double nu;
  FluxSpec flux;
  LambdaSet lambda_set;
  InterpolationKind interpolation;
  double dt;
  double t_end;
  double fp_tol = 1e-13;
  int fp_max_iter = 100;

  void validate() const {
    if (!(nu > 0.0)) throw InvalidInput("SchemeConfig: nu must be positive");
    if (!(dt > 0.0 && dt < 1.0))
      throw InvalidInput("SchemeConfig: dt must lie in (0, 1)");
    if (!(t_end > 0.0) || !(dt <= t_end))
      throw InvalidInput("SchemeConfig: need 0 < dt <= t_end");
    if (!(fp_tol >= 1e-15)) throw InvalidInput("SchemeConfig: fp_tol must be >= 1e-15");
    if (fp_max_iter < 1) throw InvalidInput("SchemeConfig: fp_max_iter must be positive");
  }

  Shift shift() const { return Shift::from(nu, dt); }

  /// round(T / dt) when T is a whole number of steps, floor(T / dt) otherwise.
  std::size_t num_steps() const {
    const double ratio = t_end / dt;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio))
      return static_cast<std::size_t>(nearest);
    return static_cast<std::size_t>(std::floor(ratio));
  }
};

/// Nodal solution at time level n; derivs is present exactly for Hermite.
struct SchemeState {
  std::size_t step_index = 0;
  GridFunction values;
  std::optional<GridFunction> derivs;

  bool operator==(const SchemeState&) const = default;
};

/// u_h^n as a function on the torus.
inline PiecewiseCubic interpolant(const SchemeState& state) {
  if (state.derivs)
    return build_cubic_hermite(HermiteData{
        state.values.grid(),
        {state.values.values().begin(), state.values.values().end()},
        {state.derivs->values().begin(), state.derivs->values().end()}});
  return build_periodic_cubic_spline(state.values);
}

struct NodeSolution {
  double u;
  int iters;
};

namespace detail {

// Shifts lambda * delta, computed once per step.
inline std::vector<double> scaled_shifts(const LambdaSet& ls, Shift shift) {
  std::vector<double> out;
  out.reserve(ls.pairs().size());
  for (const auto& p : ls.pairs()) out.push_back(p.shift * shift.delta);
  return out;
}

// sum gamma P^{(order)}(x - f(u) dt + lambda delta)
template <typename Interp>
double weighted_feet(const Interp& p, const LambdaSet& ls,
                     const std::vector<double>& shifts, double foot, int order) {
  CompensatedSum sum;
  const auto pairs = ls.pairs();
  for (std::size_t i = 0; i < pairs.size(); ++i)
    sum.add(pairs[i].weight * p.eval(foot + shifts[i], order));
  return sum.value();
}

template <typename Interp>
NodeSolution solve_node(const Interp& p, double x_j, const SchemeConfig& cfg,
                        const std::vector<double>& shifts, double u_init,
                        std::size_t node) {
  auto G = [&](double u) {
    return weighted_feet(p, cfg.lambda_set, shifts, x_j - cfg.flux(u) * cfg.dt, 0);
  };
  if (!std::isfinite(u_init))
    throw NumericBlowup("solve_node: non-finite initial guess at node " +
                        std::to_string(node), node);
  if (cfg.flux.is_zero()) return {G(u_init), 1};

  double u = u_init;
  double residual = 0.0;
  for (int it = 1; it <= cfg.fp_max_iter; ++it) {
    const double g = G(u);
    if (!std::isfinite(g))
      throw NumericBlowup("solve_node: non-finite iterate at node " +
                          std::to_string(node), node);
    residual = std::abs(g - u);
    u = g;
    if (residual <= cfg.fp_tol * (1.0 + std::abs(u))) return {u, it};
  }
  const double slope = std::abs(
      weighted_feet(p, cfg.lambda_set, shifts, x_j - cfg.flux(u) * cfg.dt, 1));
  const double measure = 3.0 * cfg.dt * std::abs(cfg.flux.prime(u)) * slope;
  throw NonConvergence("solve_node: no convergence after " +
                           std::to_string(cfg.fp_max_iter) + " iterations at node " +
                           std::to_string(node) + " (residual " +
                           std::to_string(residual) + ", 3 dt |f'| |slope| = " +
                           std::to_string(measure) + ")",
                       node, residual, measure, measure > 1.0);
}

}  // namespace detail

/// Solves u = G(u) = sum gamma P(x_j - f(u) dt + lambda delta) by successive
/// substitution from u_init. `node` is only used in diagnostics.
template <typename Interp>
NodeSolution solve_node(const Interp& p, double x_j, const SchemeConfig& cfg,
                        double u_init, std::size_t node = 0) {
  return detail::solve_node(p, x_j, cfg, detail::scaled_shifts(cfg.lambda_set, cfg.shift()),
                            u_init, node);
}

/// Fixed-point iteration counts gathered over a step or a run.
struct IterationStats {
  std::uint64_t node_solves = 0;
  std::uint64_t total_iters = 0;
  int max_iters = 0;
  std::vector<std::uint64_t> histogram;  // histogram[i] = solves taking i iterations

  void record(int iters) {
    ++node_solves;
    total_iters += static_cast<std::uint64_t>(iters);
    max_iters = std::max(max_iters, iters);
    if (histogram.size() <= static_cast<std::size_t>(iters))
      histogram.resize(static_cast<std::size_t>(iters) + 1, 0);
    ++histogram[static_cast<std::size_t>(iters)];
  }

  void merge(const IterationStats& other) {
    node_solves += other.node_solves;
    total_iters += other.total_iters;
    max_iters = std::max(max_iters, other.max_iters);
    if (histogram.size() < other.histogram.size())
      histogram.resize(other.histogram.size(), 0);
    for (std::size_t i = 0; i < other.histogram.size(); ++i)
      histogram[i] += other.histogram[i];
  }

  /// Lower median of the per-solve iteration counts.
  int median_iters() const {
    if (node_solves == 0) return 0;
    const std::uint64_t target = (node_solves + 1) / 2;
    std::uint64_t seen = 0;
    for (std::size_t i = 0; i < histogram.size(); ++i) {
      seen += histogram[i];
      if (seen >= target) return static_cast<int>(i);
    }
    return max_iters;
  }
};

struct StepOptions {
  unsigned threads = 0;  // 0: DISPERSL_THREADS or hardware default
  bool reverse_node_order = false;
};

struct StepResult {
  SchemeState state;
  IterationStats stats;
};

namespace detail {

// Solves every node against the frozen previous-level interpolant. Results
// are written by node index, so the outcome does not depend on the order or
// the thread that handles a node.
template <typename PerNode>
IterationStats for_each_node(std::size_t n, const StepOptions& opts,
                             PerNode&& per_node) {
  std::vector<int> iters(n, 0);
  parallel_for(n, resolve_thread_count(opts.threads), [&](std::size_t i) {
    const std::size_t j = opts.reverse_node_order ? n - 1 - i : i;
    iters[j] = per_node(j);
  });
  IterationStats stats;
  for (int it : iters) stats.record(it);
  return stats;
}

}  // namespace detail

/// One step of the spline scheme: u_h^n = I_h S^A(S^D u_h^{n-1}) at the nodes.
inline StepResult step_spline(const SchemeState& state, const SchemeConfig& cfg,
                              const StepOptions& opts = {}) {
  if (cfg.interpolation != InterpolationKind::spline)
    throw InvalidInput("step_spline: configuration selects Hermite interpolation");
  const TorusGrid& grid = state.values.grid();
  const PiecewiseCubic p = build_periodic_cubic_spline(state.values);
  const std::vector<double> shifts = detail::scaled_shifts(cfg.lambda_set, cfg.shift());
  std::vector<double> next(grid.size());
  IterationStats stats = detail::for_each_node(grid.size(), opts, [&](std::size_t j) {
    const NodeSolution s = detail::solve_node(p, grid.node(j), cfg, shifts, state.values[j], j);
    next[j] = s.u;
    return s.iters;
  });
  return {SchemeState{state.step_index + 1, GridFunction(grid, std::move(next)),
                      std::nullopt},
          std::move(stats)};
}

/// One step of the cubic Hermite scheme. Values come from the same node solve
/// as the spline scheme; the nodal derivative is updated by
///   v_j^n = w_j / (1 + w_j f'(u_j^n) dt),
/// where w_j is the Lambda-weighted derivative of the previous interpolant at
/// the feet x_j - f(u_j^n) dt + lambda delta.
inline StepResult step_hermite(const SchemeState& state, const SchemeConfig& cfg,
                               const StepOptions& opts = {}) {
  if (cfg.interpolation != InterpolationKind::hermite)
    throw InvalidInput("step_hermite: configuration selects spline interpolation");
  if (!state.derivs) throw InvalidInput("step_hermite: state carries no derivatives");
  const TorusGrid& grid = state.values.grid();
  const PiecewiseCubic p = interpolant(state);
  const std::vector<double> shifts = detail::scaled_shifts(cfg.lambda_set, cfg.shift());
  std::vector<double> next_u(grid.size()), next_v(grid.size());
  IterationStats stats = detail::for_each_node(grid.size(), opts, [&](std::size_t j) {
    const double x = grid.node(j);
    const NodeSolution s = detail::solve_node(p, x, cfg, shifts, state.values[j], j);
    const double foot = x - cfg.flux(s.u) * cfg.dt;
    const double w = detail::weighted_feet(p, cfg.lambda_set, shifts, foot, 1);
    const double denom = 1.0 + w * cfg.flux.prime(s.u) * cfg.dt;
    if (!(std::abs(denom) >= 1e-12))
      throw DerivativeSingularity(
          "step_hermite: derivative update denominator vanishes at node " +
              std::to_string(j),
          j);
    next_u[j] = s.u;
    next_v[j] = w / denom;
    if (!std::isfinite(next_v[j]))
      throw NumericBlowup("step_hermite: non-finite derivative at node " +
                              std::to_string(j), j);
    return s.iters;
  });
  return {SchemeState{state.step_index + 1, GridFunction(grid, std::move(next_u)),
                      GridFunction(grid, std::move(next_v))},
          std::move(stats)};
}

inline StepResult step(const SchemeState& state, const SchemeConfig& cfg,
                       const StepOptions& opts = {}) {
  return cfg.interpolation == InterpolationKind::spline ? step_spline(state, cfg, opts)
                                                        : step_hermite(state, cfg, opts);
}

using ScalarFunction = std::function<double(double)>;

/// Initial state from u_0 (and u_0' for Hermite).
inline SchemeState initial_state(const SchemeConfig& cfg, const TorusGrid& grid,
                                 const ScalarFunction& u0,
                                 const ScalarFunction& u0_deriv = {}) {
  SchemeState state{0, sample(u0, grid), std::nullopt};
  if (cfg.interpolation == InterpolationKind::hermite) {
    if (!u0_deriv)
      throw InvalidInput("initial_state: Hermite interpolation needs u0'");
    state.derivs = sample(u0_deriv, grid);
  }
  return state;
}

struct RunResult {
  SchemeState final_state;
  double final_time = 0.0;
  IterationStats stats;
  double wall_seconds = 0.0;
};

/// Advances num_steps() steps from the sampled initial data.
inline RunResult run(const SchemeConfig& cfg, const TorusGrid& grid,
                     const ScalarFunction& u0, const ScalarFunction& u0_deriv = {},
                     const StepOptions& opts = {}) {
  cfg.validate();
  const std::size_t steps = cfg.num_steps();
  if (steps == 0) throw InvalidInput("run: t_end is shorter than one step");
  const auto start = std::chrono::steady_clock::now();
  RunResult result{initial_state(cfg, grid, u0, u0_deriv), 0.0, {}, 0.0};
  for (std::size_t n = 1; n <= steps; ++n) {
    try {
      StepResult r = step(result.final_state, cfg, opts);
      result.final_state = std::move(r.state);
      result.stats.merge(r.stats);
    } catch (const NodeError& e) {
      throw StepError(std::string(e.what()) + " during step " + std::to_string(n), n);
    } catch (const ConstructionError& e) {
      throw StepError(std::string(e.what()) + " during step " + std::to_string(n), n);
    }
  }
  result.final_time = static_cast<double>(steps) * cfg.dt;
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

/// Exact solutions usable as references: u and its x-derivatives.
template <typename S>
concept SpaceTimeSolution = requires(const S& s, double x, double t, int order) {
  { s.derivative(x, t, order) } -> std::convertible_to<double>;
};

struct ConsistencyError {
  double l2;
  double weighted;  // ||tau||_{2,2,Delta}
};

/// tau^n = (u^n - (S^D u^{n-1}) o X^1[f o u^n]) / dt for the exact solution,
/// measured in L2 and in the weighted H^2 norm on the given grid.
template <SpaceTimeSolution S>
ConsistencyError consistency_error(const S& exact, double t_n, const SchemeConfig& cfg,
                                   const TorusGrid& grid) {
  const double dt = cfg.dt;
  const double t_prev = t_n - dt;
  const double delta = cfg.shift().delta;
  const auto pairs = cfg.lambda_set.pairs();

  auto tau = [&](double x, bool second_derivative) {
    const double u = exact.derivative(x, t_n, 0);
    const double foot = x - cfg.flux(u) * dt;
    detail::CompensatedSum sum;
    if (!second_derivative) {
      for (const auto& p : pairs)
        sum.add(p.weight * exact.derivative(foot + p.shift * delta, t_prev, 0));
      return (u - sum.value()) / dt;
    }
    const double ux = exact.derivative(x, t_n, 1);
    const double uxx = exact.derivative(x, t_n, 2);
    const double dfoot = 1.0 - cfg.flux.prime(u) * ux * dt;
    const double ddfoot =
        -dt * (cfg.flux.derivative(u, 2) * ux * ux + cfg.flux.prime(u) * uxx);
    for (const auto& p : pairs) {
      const double y = foot + p.shift * delta;
      sum.add(p.weight * (exact.derivative(y, t_prev, 2) * dfoot * dfoot +
                          exact.derivative(y, t_prev, 1) * ddfoot));
    }
    return (uxx - sum.value()) / dt;
  };

  const double l2 = l2_norm([&](double x) { return tau(x, false); }, grid);
  const double semi = l2_norm([&](double x) { return tau(x, true); }, grid);
  return {l2, weighted_norm(l2, semi, 2, grid.h(), dt)};
}

}  // namespace dispersl
