#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dispersl/errors.hpp"
#include "dispersl/flux.hpp"

namespace dispersl {

namespace detail {

template <typename Real>
void check_modulus(Real k, const char* who) {
  if (!(k >= Real(0) && k < Real(1)))
    throw DomainError(std::string(who) + ": modulus must lie in [0, 1)");
}

}  // namespace detail

/// Complete elliptic integral of the first kind, K(k) = pi / (2 AGM(1, k')).
template <typename Real = double>
Real complete_K(Real k) {
  detail::check_modulus(k, "complete_K");
  using std::abs, std::sqrt;
  const Real tol = std::numeric_limits<Real>::epsilon() / 2;
  Real a = 1, g = sqrt((Real(1) - k) * (Real(1) + k));
  for (int i = 0; i < 40 && abs(a - g) > tol * a; ++i) {
    const Real next = (a + g) / 2;
    g = sqrt(a * g);
    a = next;
  }
  return std::numbers::pi_v<Real> / (a + g);
}

/// Carlson's symmetric integral R_F(x, y, z) by duplication.
template <typename Real = double>
Real carlson_rf(Real x, Real y, Real z) {
  using std::abs, std::sqrt;
  const Real tol = std::pow(std::numeric_limits<Real>::epsilon(), Real(1) / 6);
  for (int i = 0; i < 100; ++i) {
    const Real sx = sqrt(x), sy = sqrt(y), sz = sqrt(z);
    const Real lambda = sx * (sy + sz) + sy * sz;
    x = (x + lambda) / 4;
    y = (y + lambda) / 4;
    z = (z + lambda) / 4;
    const Real mean = (x + y + z) / 3;
    const Real dx = (mean - x) / mean, dy = (mean - y) / mean,
               dz = (mean - z) / mean;
    if (std::max({abs(dx), abs(dy), abs(dz)}) < tol) {
      const Real e2 = dx * dy - dz * dz;
      const Real e3 = dx * dy * dz;
      return (Real(1) - e2 / 10 + e3 / 14 + e2 * e2 / 24 - Real(3) * e2 * e3 / 44) /
             sqrt(mean);
    }
  }
  return (x + y + z) / 3;  // unreachable for admissible arguments
}

/// F(phi, k) = int_0^phi (1 - k^2 sin^2 theta)^{-1/2} d theta.
template <typename Real = double>
Real incomplete_F(Real phi, Real k) {
  detail::check_modulus(k, "incomplete_F");
  const Real pi = std::numbers::pi_v<Real>;
  const Real periods = std::round(phi / pi);
  const Real psi = phi - periods * pi;  // in [-pi/2, pi/2]
  const Real s = std::sin(psi), c = std::cos(psi);
  const Real base = s * carlson_rf(c * c, Real(1) - k * k * s * s, Real(1));
  return periods == 0 ? base : base + 2 * periods * complete_K(k);
}

template <typename Real>
struct JacobiTriple {
  Real sn;
  Real cn;
  Real dn;
};

/// sn, cn, dn by Bulirsch's descending Landen transformation, after reducing
/// x by the real period 4K(k).
template <typename Real = double>
JacobiTriple<Real> jacobi_sncndn(Real x, Real k) {
  detail::check_modulus(k, "jacobi_sncndn");
  using std::abs, std::sqrt;
  const Real period = 4 * complete_K(k);
  x -= period * std::round(x / period);

  constexpr int max_levels = 16;
  const Real tol = sqrt(std::numeric_limits<Real>::epsilon()) / 100;
  std::array<Real, max_levels> ms{}, ns{};
  Real mc = (Real(1) - k) * (Real(1) + k);
  Real c = 1;
  int levels = 0;
  for (Real a = 1; levels < max_levels; ++levels) {
    ms[levels] = a;
    ns[levels] = mc = sqrt(mc);
    c = (a + mc) / 2;
    if (!(abs(a - mc) > tol * a)) {
      ++levels;
      break;
    }
    mc *= a;
    a = c;
  }
  x *= c;
  Real sn = std::sin(x), cn = std::cos(x), dn = 1;
  if (sn != 0) {
    Real a = cn / sn;
    c *= a;
    while (levels--) {
      const Real b = ms[levels];
      a *= c;
      c *= dn;
      dn = (ns[levels] + a) / (b + a);
      a = c / b;
    }
    a = 1 / sqrt(c * c + 1);
    sn = sn < 0 ? -a : a;
    cn = c * sn;
  }
  return {sn, cn, dn};
}

/// cn(x, k) = cos(phi_k(x)) with phi_k the inverse of F(., k). Evaluated in
/// extended precision so that the period reduction stays accurate for large x.
inline double jacobi_cn(double x, double k) {
  return static_cast<double>(
      jacobi_sncndn<long double>(static_cast<long double>(x),
                                 static_cast<long double>(k))
          .cn);
}

/// u(x, t) = a + b cn^p(c (x - v t), k), p in {1, 2}.
struct CnoidalWave {
  double mean;       // a
  double amplitude;  // b
  double wavenumber; // c
  double modulus;    // k
  double speed;      // v
  int power;         // p

  void validate() const {
    if (!(modulus > 0.0 && modulus < 1.0))
      throw DomainError("CnoidalWave: modulus must lie in (0, 1)");
    if (!(wavenumber > 0.0)) throw DomainError("CnoidalWave: wavenumber must be positive");
    if (power != 1 && power != 2) throw DomainError("CnoidalWave: power must be 1 or 2");
  }

  /// x-period of the profile: 2K / c for cn^2, 4K / c for cn.
  double spatial_period() const {
    return (power == 2 ? 2.0 : 4.0) * complete_K(modulus) / wavenumber;
  }

  double operator()(double x, double t) const { return derivative(x, t, 0); }

  /// d^order u / dx^order at (x, t), order in 0..3.
  double derivative(double x, double t, int order) const {
    const auto j = jacobi_sncndn<long double>(
        static_cast<long double>(wavenumber) *
            (static_cast<long double>(x) - static_cast<long double>(speed) * t),
        static_cast<long double>(modulus));
    const long double S = j.sn, C = j.cn, D = j.dn;
    const long double k2 = static_cast<long double>(modulus) * modulus;
    long double d = 0;  // derivative with respect to the phase
    if (power == 1) {
      switch (order) {
        case 0: d = C; break;
        case 1: d = -S * D; break;
        case 2: d = -C * D * D + k2 * S * S * C; break;
        case 3: d = S * D * D * D + 4 * k2 * S * C * C * D - k2 * S * S * S * D; break;
        default: throw InvalidInput("CnoidalWave: derivative order must be <= 3");
      }
    } else {
      switch (order) {
        case 0: d = C * C; break;
        case 1: d = -2 * C * S * D; break;
        case 2: d = 2 * S * S * D * D - 2 * C * C * D * D + 2 * k2 * S * S * C * C; break;
        case 3: d = 8 * S * C * D * (D * D + k2 * C * C - k2 * S * S); break;
        default: throw InvalidInput("CnoidalWave: derivative order must be <= 3");
      }
    }
    const double scale = std::pow(wavenumber, order);
    const double base = order == 0 ? mean : 0.0;
    return base + amplitude * scale * static_cast<double>(d);
  }

  /// Does (b, v) solve u_t + u u_x + nu u_xxx = 0 for the cn^2 profile?
  bool satisfies_kdv_conditions(double nu, double rel_tol = 1e-12) const {
    if (power != 2) return false;
    const double k2 = modulus * modulus;
    const double b = 12.0 * nu * k2 * wavenumber * wavenumber;
    const double v = mean + nu * wavenumber * wavenumber * (8.0 * k2 - 4.0);
    auto close = [&](double x, double y) {
      return std::abs(x - y) <= rel_tol * std::max(std::abs(y), 1e-300);
    };
    return close(amplitude, b) && close(speed, v);
  }
};

/// Exact 1-periodic traveling wave of u_t + u u_x + nu u_xxx = 0 with mean
/// 1/10, modulus 1/sqrt(2), wavenumber 2K(1/sqrt(2)):
///   u = 1/10 + 6 nu c^2 cn^2(c (x - t / 10), 1/sqrt(2)).
inline CnoidalWave cnoidal_wave(double nu) {
  if (!(nu > 0.0)) throw InvalidInput("cnoidal_wave: nu must be positive");
  const double k2 = 0.5;
  const double k = std::sqrt(k2);
  const double c = 2.0 * complete_K(k);
  const double a = 0.1;
  CnoidalWave w{a, 12.0 * nu * k2 * c * c, c, k, a + nu * c * c * (8.0 * k2 - 4.0), 2};
  w.validate();
  return w;
}

/// The first-power profile 1/10 + (3 nu / 2K) cn(2K (x - t / 10), 1/sqrt(2)).
/// Its x-period is 2, and it does not satisfy the KdV equation; it is kept to
/// demonstrate that through pde_residual.
inline CnoidalWave cn_first_power_profile(double nu) {
  if (!(nu > 0.0)) throw InvalidInput("cn_first_power_profile: nu must be positive");
  const double k = std::sqrt(0.5);
  const double K = complete_K(k);
  CnoidalWave w{0.1, 3.0 * nu / (2.0 * K), 2.0 * K, k, 0.1, 1};
  w.validate();
  return w;
}

/// Finite-difference estimate of u_t + f(u) u_x + nu u_xxx at (x, t).
/// Central differences with one Richardson step (fourth order); the step
/// 0.02 nu^{1/3} balances truncation against cancellation for profiles that
/// vary on the dispersive length scale or slower.
template <typename Sol>
double pde_residual(const Sol& sol, double nu, const FluxSpec& flux, double x,
                    double t) {
  const double h = 0.02 * std::cbrt(nu);
  auto ux = [&](double s) {
    return (sol(x + s, t) - sol(x - s, t)) / (2.0 * s);
  };
  auto ut = [&](double s) {
    return (sol(x, t + s) - sol(x, t - s)) / (2.0 * s);
  };
  auto uxxx = [&](double s) {
    return (sol(x + 2.0 * s, t) - 2.0 * sol(x + s, t) + 2.0 * sol(x - s, t) -
            sol(x - 2.0 * s, t)) /
           (2.0 * s * s * s);
  };
  auto richardson = [&](auto&& d) { return (4.0 * d(0.5 * h) - d(h)) / 3.0; };
  const double u = sol(x, t);
  return richardson(ut) + flux(u) * richardson(ux) + nu * richardson(uxxx);
}

}  // namespace dispersl
