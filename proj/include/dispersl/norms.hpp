#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "dispersl/errors.hpp"
#include "dispersl/interpolation.hpp"
#include "dispersl/quadrature.hpp"
#include "dispersl/torus_grid.hpp"

namespace dispersl {

/// int_T g(x) dx as a sum of 7-point rules over the grid cells. The cell
/// sums are reduced in index order so the result is reproducible.
template <typename Fn>
double integrate_over_cells(Fn&& g, const TorusGrid& grid) {
  const auto& rule = seven_point_rule();
  const double h = grid.h();
  double total = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double a = grid.node(j);
    double cell = 0.0;
    for (int q = 0; q < 7; ++q) {
      const double x = a + 0.5 * h * (rule.nodes[q] + 1.0);
      const double gx = g(x);
      if (!std::isfinite(gx))
        throw InvalidInput("quadrature: non-finite integrand in cell " +
                           std::to_string(j));
      cell += rule.weights[q] * gx;
    }
    total += 0.5 * h * cell;
  }
  return total;
}

template <typename Fn>
double l2_norm(Fn&& fn, const TorusGrid& grid) {
  return std::sqrt(integrate_over_cells(
      [&](double x) {
        const double v = fn(x);
        return v * v;
      },
      grid));
}

/// |pc|_{s,2}; exact because d^s pc is a polynomial of degree <= 3 - s.
inline double hs_seminorm(const PiecewiseCubic& pc, int s) {
  if (s != 1 && s != 2)
    throw Unsupported("hs_seminorm: only s = 1 and s = 2 are supported");
  return l2_norm([&](double x) { return pc.eval(x, s); }, pc.grid());
}

/// (||v||^2 + (h^{2s} / dt) |v|_s^2)^{1/2}; the weight vanishes as h -> 0.
inline double weighted_norm(double v_l2, double v_seminorm, int s, double h,
                            double dt) {
  const double weight = std::pow(h, 2 * s) / dt;
  return std::sqrt(v_l2 * v_l2 + weight * v_seminorm * v_seminorm);
}

/// (||v||^2 + |v|_s^2)^{1/2}, equivalent to the H^s norm.
inline double star_norm(double v_l2, double v_seminorm) {
  return std::sqrt(v_l2 * v_l2 + v_seminorm * v_seminorm);
}

template <typename Num, typename Exact>
double relative_l2_error(Num&& numeric, Exact&& exact, const TorusGrid& grid) {
  const double denom = l2_norm(exact, grid);
  if (!(denom >= 1e-300))
    throw InvalidInput("relative_l2_error: exact solution has zero norm");
  const double num =
      l2_norm([&](double x) { return numeric(x) - exact(x); }, grid);
  return num / denom;
}

}  // namespace dispersl
