#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dispersl/detail/cyclic_tridiagonal.hpp"
#include "dispersl/errors.hpp"
#include "dispersl/quadrature.hpp"
#include "dispersl/torus_grid.hpp"

namespace dispersl {

enum class InterpolationKind { spline, hermite };

enum class Smoothness { c2_spline, c1_hermite };

inline const char* to_string(InterpolationKind kind) {
  return kind == InterpolationKind::spline ? "spline" : "hermite";
}

/// A function that can report its derivatives: f(x, order).
template <typename F>
concept DerivativeEvaluator = requires(const F& f, double x, int order) {
  { f(x, order) } -> std::convertible_to<double>;
};

/// Periodic piecewise polynomial of the given degree on a uniform torus grid.
/// On cell j the polynomial is stored in the local coordinate
/// xi = (x - x_j) / h as c_0 + c_1 xi + ... + c_D xi^D.
template <int Degree>
class PiecewisePolynomial {
public:
  using CellCoeffs = std::array<double, Degree + 1>;

  PiecewisePolynomial(TorusGrid grid, std::vector<CellCoeffs> coeffs,
                      Smoothness smoothness)
      : grid_(grid), coeffs_(std::move(coeffs)), smoothness_(smoothness) {
    if (coeffs_.size() != grid_.size())
      throw InvalidInput("PiecewisePolynomial: one coefficient set per cell");
  }

  const TorusGrid& grid() const noexcept { return grid_; }
  Smoothness smoothness() const noexcept { return smoothness_; }
  std::span<const CellCoeffs> coeffs() const noexcept { return coeffs_; }

  /// Order-th derivative at the torus point x. Nodes belong to the cell on
  /// their right (j = floor(wrap(x) nx)).
  double eval(double x, int order = 0) const {
    if (!std::isfinite(x)) throw InvalidInput("eval: non-finite point");
    if (order < 0 || order > Degree)
      throw InvalidInput("eval: derivative order out of range");
    const double y = wrap(x) * static_cast<double>(grid_.size());
    std::size_t j = static_cast<std::size_t>(y);
    if (j >= grid_.size()) j = grid_.size() - 1;
    return eval_cell(j, y - static_cast<double>(j), order);
  }

  /// Order-th derivative on cell j at local coordinate xi in [0, 1].
  double eval_cell(std::size_t j, double xi, int order) const {
    const CellCoeffs& c = coeffs_[j];
    if (order == 0) {
      double p = c[Degree];
      for (int m = Degree - 1; m >= 0; --m) p = p * xi + c[m];
      return p;
    }
    // d^order/dxi^order, then scale by h^-order.
    double p = 0.0;
    for (int m = Degree; m >= order; --m) {
      double falling = 1.0;
      for (int r = 0; r < order; ++r) falling *= static_cast<double>(m - r);
      p = p * xi + falling * c[m];
    }
    return p * std::pow(static_cast<double>(grid_.size()), order);
  }

  double operator()(double x) const { return eval(x, 0); }
  double operator()(double x, int order) const { return eval(x, order); }

private:
  TorusGrid grid_;
  std::vector<CellCoeffs> coeffs_;
  Smoothness smoothness_;
};

using PiecewiseCubic = PiecewisePolynomial<3>;

template <int Degree>
double eval(const PiecewisePolynomial<Degree>& pc, double x, int order = 0) {
  return pc.eval(x, order);
}

/// Nodal values and nodal first derivatives for cubic Hermite interpolation.
struct HermiteData {
  TorusGrid grid;
  std::vector<double> values;
  std::vector<double> derivs;

  void validate() const {
    if (values.size() != grid.size() || derivs.size() != grid.size())
      throw InvalidInput("HermiteData: values and derivs must both have nx = " +
                         std::to_string(grid.size()) + " entries");
    for (std::size_t j = 0; j < grid.size(); ++j)
      if (!std::isfinite(values[j]) || !std::isfinite(derivs[j]))
        throw InvalidInput("HermiteData: non-finite entry at node " +
                           std::to_string(j));
  }
};

namespace detail {

inline std::vector<PiecewiseCubic::CellCoeffs> hermite_cells(
    std::span<const double> u, std::span<const double> m, double h) {
  const std::size_t n = u.size();
  std::vector<PiecewiseCubic::CellCoeffs> cells(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t jp = j + 1 == n ? 0 : j + 1;
    const double du = u[jp] - u[j];
    const double s0 = h * m[j];
    const double s1 = h * m[jp];
    cells[j] = {u[j], s0, 3.0 * du - 2.0 * s0 - s1, -2.0 * du + s0 + s1};
  }
  return cells;
}

}  // namespace detail

inline PiecewiseCubic build_cubic_hermite(const HermiteData& hd) {
  hd.validate();
  return PiecewiseCubic(hd.grid,
                        detail::hermite_cells(hd.values, hd.derivs, hd.grid.h()),
                        Smoothness::c1_hermite);
}

/// Nodal slopes of the periodic C2 cubic spline through the data:
///   m_{j-1} + 4 m_j + m_{j+1} = 3 (u_{j+1} - u_{j-1}) / h.
inline std::vector<double> periodic_spline_slopes(const GridFunction& gf) {
  const std::size_t n = gf.size();
  const double h = gf.grid().h();
  std::vector<double> a(n, 1.0), b(n, 4.0), c(n, 1.0), d(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t jm = j == 0 ? n - 1 : j - 1;
    const std::size_t jp = j + 1 == n ? 0 : j + 1;
    d[j] = 3.0 * (gf[jp] - gf[jm]) / h;
  }
  return detail::solve_cyclic_tridiagonal<double>(a, b, c, d);
}

inline PiecewiseCubic build_periodic_cubic_spline(const GridFunction& gf) {
  const std::vector<double> slopes = periodic_spline_slopes(gf);
  return PiecewiseCubic(gf.grid(),
                        detail::hermite_cells(gf.values(), slopes, gf.grid().h()),
                        Smoothness::c2_spline);
}

/// I_h v for a function with known derivatives.
template <DerivativeEvaluator F>
PiecewiseCubic interpolate(const F& v, const TorusGrid& grid,
                           InterpolationKind kind) {
  if (kind == InterpolationKind::spline)
    return build_periodic_cubic_spline(
        sample([&](double x) { return static_cast<double>(v(x, 0)); }, grid));
  HermiteData hd{grid, std::vector<double>(grid.size()),
                 std::vector<double>(grid.size())};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    hd.values[j] = v(grid.node(j), 0);
    hd.derivs[j] = v(grid.node(j), 1);
  }
  return build_cubic_hermite(hd);
}

/// int_T d^2(v - I_h v) d^2(I_h w) dx, cell by cell with the 7-point rule.
/// Vanishes identically for both cubic operators.
template <DerivativeEvaluator V, DerivativeEvaluator W>
double p1_orthogonality_residual(const V& v, const W& w, const TorusGrid& grid,
                                 InterpolationKind kind) {
  const PiecewiseCubic iv = interpolate(v, grid, kind);
  const PiecewiseCubic iw = interpolate(w, grid, kind);
  const auto& rule = seven_point_rule();
  const double h = grid.h();
  double total = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x0 = grid.node(j);
    total += rule.integrate(
        [&](double x) {
          const double xi = (x - x0) / h;
          return (v(x, 2) - iv.eval_cell(j, xi, 2)) * iw.eval_cell(j, xi, 2);
        },
        x0, x0 + h);
  }
  return total;
}

struct InterpolationErrors {
  double l2 = 0.0;
  double h2_seminorm = 0.0;
};

/// ||v - I_h v||_{L2} and |v - I_h v|_{2,2}.
template <DerivativeEvaluator V>
InterpolationErrors interpolation_error_norms(const V& v, const TorusGrid& grid,
                                              InterpolationKind kind) {
  const PiecewiseCubic iv = interpolate(v, grid, kind);
  const auto& rule = seven_point_rule();
  const double h = grid.h();
  double l2 = 0.0, semi = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x0 = grid.node(j);
    l2 += rule.integrate(
        [&](double x) {
          const double e = v(x, 0) - iv.eval_cell(j, (x - x0) / h, 0);
          return e * e;
        },
        x0, x0 + h);
    semi += rule.integrate(
        [&](double x) {
          const double e = v(x, 2) - iv.eval_cell(j, (x - x0) / h, 2);
          return e * e;
        },
        x0, x0 + h);
  }
  return {std::sqrt(l2), std::sqrt(semi)};
}

}  // namespace dispersl
