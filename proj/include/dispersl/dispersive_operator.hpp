#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dispersl/detail/kahan.hpp"
#include "dispersl/errors.hpp"
#include "dispersl/torus_grid.hpp"
#include "dispersl/trig_polynomial.hpp"

namespace dispersl {

/// One term gamma * v(x + lambda * delta) of the dispersive operator.
struct WeightShift {
  double weight;  // gamma
  double shift;   // lambda, in units of delta = (nu dt)^{1/3}

  bool operator==(const WeightShift&) const = default;
};

enum class LambdaName { L4, L5, custom };

inline const char* to_string(LambdaName name) {
  switch (name) {
    case LambdaName::L4: return "L4";
    case LambdaName::L5: return "L5";
    default: return "custom";
  }
}

/// (1/k!) sum gamma lambda^k, compensated.
inline double moment(std::span<const WeightShift> pairs, int k) {
  if (k < 0 || k > 12)
    throw InvalidInput("moment: k must lie in [0, 12], got " + std::to_string(k));
  double factorial = 1.0;
  for (int m = 2; m <= k; ++m) factorial *= m;
  detail::CompensatedSum sum;
  for (const auto& p : pairs) {
    double power = 1.0;
    for (int m = 0; m < k; ++m) power *= p.shift;
    sum.add(p.weight * power);
  }
  return sum.value() / factorial;
}

/// Target moments for a set that approximates v - nu dt v''' :
/// 1, 0, 0, -1 for k = 0..3 and 0 for any further vanishing moment.
inline double target_moment(int k) {
  if (k == 0) return 1.0;
  if (k == 3) return -1.0;
  return 0.0;
}

inline constexpr double moment_tolerance = 1e-12;

/// Highest k whose moment a named set must match.
inline int certified_moment_order(LambdaName name) {
  return name == LambdaName::L5 ? 4 : 3;
}

/// Finite weight/shift set of the dispersive translation operator with its
/// consistency order r. Construction certifies the moment conditions.
class LambdaSet {
public:
  LambdaSet(std::vector<WeightShift> pairs, double consistency_order,
            LambdaName name)
      : pairs_(std::move(pairs)), order_(consistency_order), name_(name) {
    if (pairs_.empty()) throw InvalidInput("LambdaSet: empty pair list");
    if (!(order_ > 0.0 && order_ <= 1.0))
      throw InvalidInput("LambdaSet: consistency order must lie in (0, 1]");
    for (const auto& p : pairs_)
      if (!std::isfinite(p.weight) || !std::isfinite(p.shift))
        throw InvalidInput("LambdaSet: non-finite pair");
    for (int k = 0; k <= certified_moment_order(name_); ++k) {
      const double m = moment(pairs_, k);
      if (std::abs(m - target_moment(k)) > moment_tolerance)
        throw InvalidInput("LambdaSet: moment k=" + std::to_string(k) + " is " +
                           std::to_string(m) + ", expected " +
                           std::to_string(target_moment(k)));
    }
  }

  std::span<const WeightShift> pairs() const noexcept { return pairs_; }
  double consistency_order() const noexcept { return order_; }
  LambdaName name() const noexcept { return name_; }

  bool operator==(const LambdaSet&) const = default;

private:
  std::vector<WeightShift> pairs_;
  double order_;
  LambdaName name_;
};

inline double moment(const LambdaSet& ls, int k) { return moment(ls.pairs(), k); }

inline double cube_root_of_four() { return std::exp(std::log(4.0) / 3.0); }

/// {(1/4, -4^{1/3}), (1/4, 0), (3/4, 4^{1/3}), (-1/4, 2 4^{1/3})}, r = 1/3.
inline LambdaSet lambda4() {
  const double c = cube_root_of_four();
  return LambdaSet({{0.25, -c}, {0.25, 0.0}, {0.75, c}, {-0.25, 2.0 * c}},
                   1.0 / 3.0, LambdaName::L4);
}

/// {(3/16, -2), (3/8, 0), (3/4, 2), (-3/8, 4), (1/16, 6)}, r = 2/3.
inline LambdaSet lambda5() {
  return LambdaSet({{3.0 / 16.0, -2.0},
                    {3.0 / 8.0, 0.0},
                    {3.0 / 4.0, 2.0},
                    {-3.0 / 8.0, 4.0},
                    {1.0 / 16.0, 6.0}},
                   2.0 / 3.0, LambdaName::L5);
}

/// delta = (nu dt)^{1/3}.
struct Shift {
  double delta;

  static Shift from(double nu, double dt) {
    if (!(nu > 0.0) || !(dt > 0.0))
      throw InvalidInput("Shift: nu and dt must be positive");
    return Shift{std::cbrt(nu * dt)};
  }
};

/// (S^D v)(x) = sum gamma v(x + lambda delta) for any callable v.
template <typename Fn>
double apply(const LambdaSet& ls, const Fn& v, double x, Shift shift) {
  detail::CompensatedSum sum;
  for (const auto& p : ls.pairs())
    sum.add(p.weight * v(wrap(x + p.shift * shift.delta)));
  return sum.value();
}

/// |sum gamma exp(i phi lambda delta)|, the Fourier multiplier modulus at
/// angular frequency phi.
inline double amplification(std::span<const WeightShift> pairs, double phi,
                            double delta) {
  std::complex<double> m(0.0, 0.0);
  for (const auto& p : pairs) m += p.weight * std::polar(1.0, phi * p.shift * delta);
  return std::abs(m);
}

inline double amplification(const LambdaSet& ls, double phi, double delta) {
  return amplification(ls.pairs(), phi, delta);
}

/// S^D applied exactly to a trigonometric polynomial.
inline TrigPolynomial apply_exact(const LambdaSet& ls, const TrigPolynomial& v,
                                  double delta) {
  TrigPolynomial out = TrigPolynomial::constant(0.0);
  for (const auto& p : ls.pairs())
    out += p.weight * v.translated(-p.shift * delta);
  return out;
}

/// The nonnegative quadratic form Q(v) with ||v||^2 - ||S^D v||^2 = Q(v).
///   L4: (1/16) ||T_y v - v - T_{-y} v + T_{-2y} v||^2, y = 4^{1/3} delta
///   L5: (3/256) ||v - 2 T_{2 delta} v + 2 T_{6 delta} v - T_{8 delta} v||^2
inline double dissipation_form(const LambdaSet& ls, const TrigPolynomial& v,
                               double delta) {
  switch (ls.name()) {
    case LambdaName::L4: {
      const double y = cube_root_of_four() * delta;
      const TrigPolynomial q =
          v.translated(y) - v - v.translated(-y) + v.translated(-2.0 * y);
      return q.l2_norm_squared() / 16.0;
    }
    case LambdaName::L5: {
      const TrigPolynomial q = v - 2.0 * v.translated(2.0 * delta) +
                               2.0 * v.translated(6.0 * delta) -
                               v.translated(8.0 * delta);
      return 3.0 * q.l2_norm_squared() / 256.0;
    }
    default:
      throw Unsupported(
          "stability identity is only known for the L4 and L5 sets");
  }
}

/// |(||v||^2 - ||S^D v||^2) - Q(v)|, all norms by Parseval.
inline double stability_identity_residual(const LambdaSet& ls,
                                          const TrigPolynomial& v,
                                          double delta) {
  const double q = dissipation_form(ls, v, delta);
  const double lhs =
      v.l2_norm_squared() - apply_exact(ls, v, delta).l2_norm_squared();
  return std::abs(lhs - q);
}

}  // namespace dispersl
