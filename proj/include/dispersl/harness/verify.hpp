#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dispersl/dispersive_operator.hpp"
#include "dispersl/elliptic.hpp"
#include "dispersl/errors.hpp"
#include "dispersl/harness/csv.hpp"
#include "dispersl/harness/experiments.hpp"
#include "dispersl/interpolation.hpp"
#include "dispersl/norms.hpp"
#include "dispersl/quadrature.hpp"
#include "dispersl/sl_stepper.hpp"
#include "dispersl/trig_polynomial.hpp"

namespace dispersl::harness {

/// Outcome of one property. `measured` is compared against `threshold`
/// in the direction the property needs (recorded in `detail`).
struct PropertyCheck {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  std::string detail;
  bool informational = false;
};

struct VerificationReport {
  std::uint64_t seed = 0;
  std::vector<PropertyCheck> checks;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const PropertyCheck& c) { return c.passed; });
  }
};

inline constexpr std::uint64_t default_seed = 20240229;

namespace checks {

inline PropertyCheck at_most(std::string name, double measured, double threshold,
                             std::string detail = {}) {
  return {std::move(name), measured <= threshold, measured, threshold,
          detail.empty() ? "measured <= threshold" : std::move(detail)};
}

inline PropertyCheck at_least(std::string name, double measured, double threshold,
                              std::string detail = {}) {
  return {std::move(name), measured >= threshold, measured, threshold,
          detail.empty() ? "measured >= threshold" : std::move(detail)};
}

inline std::string label(const LambdaSet& ls) { return to_string(ls.name()); }

/// Largest |moment_k - target_k| over k = 0..certified order, for any pair list.
inline PropertyCheck moments(std::string name, std::span<const WeightShift> pairs,
                             int max_k) {
  double worst = 0.0;
  std::string detail;
  for (int k = 0; k <= max_k; ++k) {
    const double m = moment(pairs, k);
    const double dev = std::abs(m - target_moment(k));
    if (dev > worst) worst = dev;
    if (dev > moment_tolerance && detail.empty())
      detail = "k=" + std::to_string(k) + " value " + format_double(m) + ", expected " +
               format_double(target_moment(k));
  }
  auto c = at_most(std::move(name), worst, moment_tolerance);
  if (!detail.empty()) c.detail = detail;
  return c;
}

inline PropertyCheck moments(const LambdaSet& ls) {
  return moments("moments/" + label(ls), ls.pairs(), certified_moment_order(ls.name()));
}

/// max |m(phi)| over `samples` frequencies covering one period of the multiplier.
inline PropertyCheck amplification_bound(const LambdaSet& ls, int samples = 100000) {
  // Shifts are integer multiples of 4^{1/3} (L4) or 2 (L5), so with delta = 1
  // the multiplier has period 2 pi / 4^{1/3} or pi in phi.
  const double period = ls.name() == LambdaName::L4
                            ? 2.0 * std::numbers::pi / cube_root_of_four()
                            : std::numbers::pi;
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double phi = period * static_cast<double>(i) / samples;
    worst = std::max(worst, amplification(ls, phi, 1.0));
  }
  return at_most("amplification/" + label(ls), worst, 1.0 + 1e-12);
}

/// max |(||v||^2 - ||Sv||^2) - Q(v)| / ||v||^2 over random trig polynomials.
template <typename Rng>
PropertyCheck stability_identity(const LambdaSet& ls, Rng& rng, int trials = 100,
                                 std::size_t max_degree = 8) {
  std::uniform_int_distribution<std::size_t> degree(0, max_degree);
  std::uniform_real_distribution<double> delta(0.005, 0.2);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const TrigPolynomial v = TrigPolynomial::random(degree(rng), rng);
    const double norm2 = v.l2_norm_squared();
    if (norm2 == 0.0) continue;
    worst = std::max(worst, stability_identity_residual(ls, v, delta(rng)) / norm2);
  }
  return at_most("stability_identity/" + label(ls), worst, 1e-12);
}

/// max ||S^D v|| / ||v|| and |S^D v|_2 / |v|_2 over random trig polynomials.
template <typename Rng>
std::vector<PropertyCheck> contraction(const LambdaSet& ls, Rng& rng, int trials = 100,
                                       std::size_t max_degree = 16) {
  std::uniform_int_distribution<std::size_t> degree(1, max_degree);
  std::uniform_real_distribution<double> delta(0.005, 0.2);
  double l2 = 0.0, semi = 0.0;
  for (int t = 0; t < trials; ++t) {
    const TrigPolynomial v = TrigPolynomial::random(degree(rng), rng);
    const double d = delta(rng);
    const TrigPolynomial sv = apply_exact(ls, v, d);
    l2 = std::max(l2, sv.l2_norm() / v.l2_norm());
    semi = std::max(semi, sv.derivative(2).l2_norm() / v.derivative(2).l2_norm());
  }
  return {at_most("l2_contraction/" + label(ls), l2, 1.0 + 1e-12),
          at_most("h2_seminorm_contraction/" + label(ls), semi, 1.0 + 1e-12)};
}

/// sum |gamma| |lambda|^3 bounds the derivative multipliers; finite for any finite set.
inline PropertyCheck derivative_multiplier_bound(const LambdaSet& ls) {
  double total = 0.0;
  for (const auto& p : ls.pairs()) total += std::abs(p.weight) * std::pow(std::abs(p.shift), 3);
  PropertyCheck c{"multiplier_bound/" + label(ls), std::isfinite(total), total,
                  std::numeric_limits<double>::infinity(),
                  "sum |gamma| |lambda|^3, reported for information", true};
  return c;
}

inline const char* kind_label(InterpolationKind kind) { return to_string(kind); }

/// max |P1 residual| / (|v|_2 |w|_2) over random pairs of trig polynomials.
template <typename Rng>
PropertyCheck p1_orthogonality(InterpolationKind kind, Rng& rng, int pairs = 20,
                               std::size_t nx = 16) {
  std::uniform_int_distribution<std::size_t> degree(1, 5);
  const TorusGrid grid(nx);
  double worst = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const TrigPolynomial v = TrigPolynomial::random(degree(rng), rng);
    const TrigPolynomial w = TrigPolynomial::random(degree(rng), rng);
    const double scale = v.derivative(2).l2_norm() * w.derivative(2).l2_norm();
    worst = std::max(worst, std::abs(p1_orthogonality_residual(v, w, grid, kind)) / scale);
  }
  return at_most(std::string("p1_orthogonality/") + kind_label(kind), worst, 1e-8);
}

struct RateResult {
  double l2_order;
  double h2_order;
};

/// Smallest observed orders for sin(2 pi x) over consecutive dyadic grids.
inline RateResult interpolation_rates(InterpolationKind kind,
                                      std::vector<std::size_t> nxs = {16, 32, 64, 128}) {
  const TrigPolynomial v({0.0, 0.0}, {0.0, 1.0});
  RateResult r{std::numeric_limits<double>::infinity(),
               std::numeric_limits<double>::infinity()};
  std::optional<InterpolationErrors> prev;
  std::size_t prev_nx = 0;
  for (std::size_t nx : nxs) {
    const InterpolationErrors e = interpolation_error_norms(v, TorusGrid(nx), kind);
    if (prev) {
      const double ratio = std::log(static_cast<double>(nx) / static_cast<double>(prev_nx));
      r.l2_order = std::min(r.l2_order, std::log(prev->l2 / e.l2) / ratio);
      r.h2_order = std::min(r.h2_order, std::log(prev->h2_seminorm / e.h2_seminorm) / ratio);
    }
    prev = e;
    prev_nx = nx;
  }
  return r;
}

inline std::vector<PropertyCheck> interpolation_orders(InterpolationKind kind) {
  const RateResult r = interpolation_rates(kind);
  return {at_least(std::string("p2_l2_order/") + kind_label(kind), r.l2_order, 3.8),
          at_least(std::string("p3_h2_order/") + kind_label(kind), r.h2_order, 1.8)};
}

/// max ||I_h v||_Delta / ((1 + budget dt) ||v||_Delta) with h^4 / dt <= 1.
template <typename Rng>
PropertyCheck weighted_stability(InterpolationKind kind, Rng& rng, int trials = 8,
                                 double budget = 10.0) {
  std::uniform_int_distribution<std::size_t> degree(1, 5);
  double worst = 0.0;
  for (std::size_t nx : {std::size_t{32}, std::size_t{64}}) {
    const TorusGrid grid(nx);
    const double h = grid.h();
    for (double dt : {std::pow(h, 4), 10.0 * std::pow(h, 4), 1e-3, 1e-2}) {
      for (int t = 0; t < trials; ++t) {
        const TrigPolynomial v = TrigPolynomial::random(degree(rng), rng);
        const PiecewiseCubic iv = interpolate(v, grid, kind);
        const double lhs = weighted_norm(l2_norm(iv, grid), hs_seminorm(iv, 2), 2, h, dt);
        const double rhs = weighted_norm(v.l2_norm(), v.derivative(2).l2_norm(), 2, h, dt);
        worst = std::max(worst, lhs / ((1.0 + budget * dt) * rhs));
      }
    }
  }
  return at_most(std::string("weighted_stability/") + kind_label(kind), worst, 1.0);
}

/// Fitted order of ||tau|| in L2 for the cnoidal wave over a dt ladder.
inline double consistency_order(const LambdaSet& ls,
                                std::vector<double> dts = {1e-2, 5e-3, 2.5e-3},
                                double nu = 1e-3, double t_n = 1.0,
                                std::size_t quadrature_cells = 256) {
  const CnoidalWave wave = cnoidal_wave(nu);
  const TorusGrid grid(quadrature_cells);
  std::vector<double> taus;
  for (double dt : dts) {
    const SchemeConfig cfg{nu, FluxSpec::kdv(), ls, InterpolationKind::hermite, dt, 1.0};
    taus.push_back(consistency_error(wave, t_n, cfg, grid).l2);
  }
  return fit_slope(dts, taus, dts.size());
}

inline PropertyCheck consistency(const LambdaSet& ls) {
  const double threshold = ls.name() == LambdaName::L4 ? 0.30 : 0.60;
  return at_least("consistency_order/" + label(ls), consistency_order(ls), threshold);
}

inline PropertyCheck quadrature_exactness() {
  const auto& rule = seven_point_rule();
  double worst = 0.0;
  for (int p = 0; p <= 13; ++p) {
    const double got = rule.integrate([p](double x) { return std::pow(x, p); }, -1.0, 1.0);
    const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
    worst = std::max(worst, std::abs(got - exact));
  }
  double wsum = 0.0;
  for (double w : rule.weights) wsum += w;
  worst = std::max(worst, std::abs(wsum - 2.0));
  return at_most("quadrature_exactness", worst, 1e-12);
}

/// (cn')^2 = (1 - cn^2)(1 - k^2 + k^2 cn^2), cn' by a sixth-order central difference.
template <typename Rng>
PropertyCheck cn_identity(Rng& rng, int samples = 200) {
  std::uniform_real_distribution<double> xs(-10.0, 10.0);
  double worst = 0.0;
  for (double k : {0.3, std::sqrt(0.5), 0.9}) {
    for (int i = 0; i < samples; ++i) {
      const double x = xs(rng), e = 1e-3;
      auto cn = [k](double y) { return jacobi_cn(y, k); };
      const double d = (45.0 * (cn(x + e) - cn(x - e)) - 9.0 * (cn(x + 2 * e) - cn(x - 2 * e)) +
                        (cn(x + 3 * e) - cn(x - 3 * e))) /
                       (60.0 * e);
      const double c = cn(x);
      worst = std::max(worst, std::abs(d * d - (1 - c * c) * (1 - k * k + k * k * c * c)));
    }
  }
  return at_most("cn_derivative_identity", worst, 1e-9);
}

template <typename Rng>
PropertyCheck cn_periodicity(Rng& rng, int samples = 200) {
  std::uniform_real_distribution<double> xs(-10.0, 10.0);
  double worst = 0.0;
  for (double k : {0.3, std::sqrt(0.5), 0.9}) {
    const double period = 4.0 * complete_K(k);
    for (int i = 0; i < samples; ++i) {
      const double x = xs(rng);
      worst = std::max(worst, std::abs(jacobi_cn(x + period, k) - jacobi_cn(x, k)));
    }
  }
  return at_most("cn_periodicity", worst, 1e-10);
}

inline PropertyCheck complete_K_monotone() {
  double prev = complete_K(0.0);
  double worst_step = std::numeric_limits<double>::infinity();
  for (int i = 1; i < 1000; ++i) {
    const double K = complete_K(i / 1000.0);
    worst_step = std::min(worst_step, K - prev);
    prev = K;
  }
  return {"complete_K_monotone", worst_step > 0.0, worst_step, 0.0,
          "smallest increment over k = i/1000 must be positive"};
}

struct ResidualGate {
  double corrected_max;
  double corrected_bound;
  double uncorrected_max;
};

/// Residuals of the corrected and the uncorrected cn profile at the same random points.
template <typename Rng>
ResidualGate pde_residual_gate(Rng& rng, double nu = 1e-3, int points = 100) {
  const CnoidalWave good = cnoidal_wave(nu);
  const CnoidalWave uncorrected = cn_first_power_profile(nu);
  const FluxSpec flux = FluxSpec::kdv();
  std::uniform_real_distribution<double> xs(0.0, 1.0), ts(0.0, 1.0);
  ResidualGate g{0.0, 0.0, 0.0};
  double uxxx = 0.0;
  for (int i = 0; i < points; ++i) {
    const double x = xs(rng), t = ts(rng);
    g.corrected_max = std::max(g.corrected_max, std::abs(pde_residual(good, nu, flux, x, t)));
    g.uncorrected_max = std::max(g.uncorrected_max, std::abs(pde_residual(uncorrected, nu, flux, x, t)));
    uxxx = std::max(uxxx, std::abs(nu * good.derivative(x, t, 3)));
  }
  g.corrected_bound = 1e-6 * uxxx;
  return g;
}

template <typename Rng>
std::vector<PropertyCheck> pde_residual_checks(Rng& rng) {
  const ResidualGate g = pde_residual_gate(rng);
  return {at_most("pde_residual/corrected", g.corrected_max, g.corrected_bound),
          at_least("pde_residual/uncorrected_ratio", g.uncorrected_max / g.corrected_max, 1e3)};
}

/// Constant data stays constant to 1e-12 for every flux and both variants.
inline PropertyCheck constant_preservation(int steps = 5, std::size_t nx = 32) {
  const TorusGrid grid(nx);
  const double c = 0.3;
  double worst = 0.0;
  for (const FluxSpec& flux :
       {FluxSpec::kdv(), FluxSpec::zero(), FluxSpec::polynomial({0.5, -1.0, 2.0})}) {
    for (auto kind : {InterpolationKind::spline, InterpolationKind::hermite}) {
      for (const LambdaSet& ls : {lambda4(), lambda5()}) {
        const SchemeConfig cfg{1e-3, flux, ls, kind, 0.01, steps * 0.01};
        const RunResult r = run(cfg, grid, [c](double) { return c; },
                                [](double) { return 0.0; });
        for (double u : r.final_state.values.values()) worst = std::max(worst, std::abs(u - c));
        if (r.final_state.derivs)
          for (double v : r.final_state.derivs->values()) worst = std::max(worst, std::abs(v));
      }
    }
  }
  return at_most("constant_preservation", worst, 1e-12);
}

/// Bitwise comparison of a step solved in forward and reverse node order.
inline PropertyCheck node_order_independence(std::size_t nx = 64) {
  const TorusGrid grid(nx);
  const CnoidalWave wave = cnoidal_wave(1e-3);
  bool same = true;
  for (auto kind : {InterpolationKind::spline, InterpolationKind::hermite}) {
    const SchemeConfig cfg{1e-3, FluxSpec::kdv(), lambda5(), kind, 0.01, 1.0};
    SchemeState s = initial_state(cfg, grid, [&](double x) { return wave(x, 0.0); },
                                  [&](double x) { return wave.derivative(x, 0.0, 1); });
    for (int n = 0; n < 3; ++n) {
      const StepResult fwd = step(s, cfg, StepOptions{1, false});
      const StepResult rev = step(s, cfg, StepOptions{1, true});
      const StepResult par = step(s, cfg, StepOptions{4, false});
      same = same && fwd.state == rev.state && fwd.state == par.state;
      s = fwd.state;
    }
  }
  return {"node_order_independence", same, same ? 0.0 : 1.0, 0.0,
          "forward, reverse and 4-thread steps agree bitwise"};
}

}  // namespace checks

struct VerifyOptions {
  std::uint64_t seed = default_seed;
  /// Extra pair list to certify, e.g. a tampered set; its moment check is
  /// run against the L4 order.
  std::optional<std::vector<WeightShift>> injected_pairs;
};

/// Every property suite with one seeded generator; same seed, same report.
inline VerificationReport verify_properties(const VerifyOptions& opts = {}) {
  VerificationReport report;
  report.seed = opts.seed;
  std::mt19937_64 rng(opts.seed);
  auto add = [&](PropertyCheck c) { report.checks.push_back(std::move(c)); };
  auto add_all = [&](std::vector<PropertyCheck> cs) {
    for (auto& c : cs) add(std::move(c));
  };

  const LambdaSet sets[] = {lambda4(), lambda5()};
  for (const auto& ls : sets) add(checks::moments(ls));
  if (opts.injected_pairs)
    add(checks::moments("moments/custom", *opts.injected_pairs, 3));
  for (const auto& ls : sets) add(checks::amplification_bound(ls));
  for (const auto& ls : sets) add(checks::stability_identity(ls, rng));
  for (const auto& ls : sets) add_all(checks::contraction(ls, rng));
  for (const auto& ls : sets) add(checks::derivative_multiplier_bound(ls));
  for (auto kind : {InterpolationKind::spline, InterpolationKind::hermite}) {
    add(checks::p1_orthogonality(kind, rng));
    add_all(checks::interpolation_orders(kind));
    add(checks::weighted_stability(kind, rng));
  }
  for (const auto& ls : sets) add(checks::consistency(ls));
  add(checks::quadrature_exactness());
  add(checks::cn_identity(rng));
  add(checks::cn_periodicity(rng));
  add(checks::complete_K_monotone());
  add_all(checks::pde_residual_checks(rng));
  add(checks::constant_preservation());
  add(checks::node_order_independence());
  return report;
}

}  // namespace dispersl::harness
