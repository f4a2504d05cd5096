#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "dispersl/elliptic.hpp"
#include "dispersl/harness/verify.hpp"

using namespace dispersl;

namespace {

// (sn, cn, dn) by RK4 on sn' = cn dn, cn' = -sn dn, dn' = -k^2 sn cn.
std::array<double, 3> jacobi_by_rk4(double x, double k, int steps = 20000) {
  std::array<long double, 3> y{0.0L, 1.0L, 1.0L};
  const long double h = static_cast<long double>(x) / steps, k2 = static_cast<long double>(k) * k;
  auto f = [k2](const std::array<long double, 3>& s) {
    return std::array<long double, 3>{s[1] * s[2], -s[0] * s[2], -k2 * s[0] * s[1]};
  };
  for (int i = 0; i < steps; ++i) {
    auto add = [](std::array<long double, 3> a, const std::array<long double, 3>& b, long double c) {
      for (int j = 0; j < 3; ++j) a[j] += c * b[j];
      return a;
    };
    const auto k1 = f(y), k2_ = f(add(y, k1, h / 2)), k3 = f(add(y, k2_, h / 2)),
               k4 = f(add(y, k3, h));
    for (int j = 0; j < 3; ++j) y[j] += h / 6 * (k1[j] + 2 * k2_[j] + 2 * k3[j] + k4[j]);
  }
  return {static_cast<double>(y[0]), static_cast<double>(y[1]), static_cast<double>(y[2])};
}

struct Constant {
  double c;
  double operator()(double, double) const { return c; }
};

}  // namespace

TEST(CompleteK, LemniscaticValue) {
  const double k = 1.0 / std::sqrt(2.0);
  const double gamma_quarter = std::tgamma(0.25);
  EXPECT_NEAR(complete_K(k), 1.854074677301372, 1e-15);
  EXPECT_NEAR(complete_K(k), gamma_quarter * gamma_quarter / (4.0 * std::sqrt(std::numbers::pi)),
              1e-14);
  EXPECT_NEAR(complete_K(k), std::comp_ellint_1(k), 1e-14);
}

TEST(CompleteK, AgreesWithStandardLibrary) {
  for (double k : {0.0, 0.1, 0.3, 0.5, 0.9, 0.99})
    EXPECT_NEAR(complete_K(k), std::comp_ellint_1(k), 1e-13 * std::comp_ellint_1(k)) << k;
  // 30-digit value; the standard library loses about 12 digits this close to 1
  EXPECT_NEAR(complete_K(0.999999), 7.947479773547967, 1e-14 * 7.95);
  EXPECT_DOUBLE_EQ(complete_K(0.0), std::numbers::pi / 2);
}

TEST(CompleteK, DomainChecked) {
  EXPECT_THROW(complete_K(1.0), DomainError);
  EXPECT_THROW(complete_K(-0.1), DomainError);
  EXPECT_TRUE(harness::checks::complete_K_monotone().passed);
}

TEST(IncompleteF, AgreesWithStandardLibrary) {
  for (double k : {0.2, 0.7071, 0.95})
    for (double phi : {0.1, 0.8, 1.5, 2.9, 7.0, -4.0})
      EXPECT_NEAR(incomplete_F(phi, k), std::ellint_1(k, phi), 1e-13) << k << " " << phi;
  EXPECT_NEAR(incomplete_F(std::numbers::pi / 2, 0.6), complete_K(0.6), 1e-14);
}

TEST(JacobiCn, SpecialValues) {
  const double k = std::sqrt(0.5), K = complete_K(k);
  EXPECT_NEAR(jacobi_cn(0.0, k), 1.0, 1e-16);
  EXPECT_NEAR(jacobi_cn(K, k), 0.0, 1e-15);
  EXPECT_NEAR(jacobi_cn(2 * K, k), -1.0, 1e-15);
  for (double x : {0.3, 1.7, -2.2}) EXPECT_NEAR(jacobi_cn(x, 0.0), std::cos(x), 1e-15);
}

TEST(JacobiCn, MatchesOdeIntegration) {
  for (double k : {0.3, std::sqrt(0.5), 0.9}) {
    for (double x : {0.4, 1.3, 2.7}) {
      const auto ref = jacobi_by_rk4(x, k);
      const auto j = jacobi_sncndn(x, k);
      EXPECT_NEAR(j.sn, ref[0], 1e-12);
      EXPECT_NEAR(j.cn, ref[1], 1e-12);
      EXPECT_NEAR(j.dn, ref[2], 1e-12);
    }
  }
}

TEST(JacobiCn, InvertsIncompleteF) {
  // cn(F(phi, k), k) = cos(phi)
  for (double k : {0.3, 0.8})
    for (double phi : {0.2, 1.0, 1.4})
      EXPECT_NEAR(jacobi_cn(std::ellint_1(k, phi), k), std::cos(phi), 1e-13);
}

TEST(JacobiCn, PythagoreanIdentities) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> xs(-20, 20);
  for (int i = 0; i < 200; ++i) {
    const double x = xs(rng), k = 0.6;
    const auto j = jacobi_sncndn(x, k);
    EXPECT_NEAR(j.sn * j.sn + j.cn * j.cn, 1.0, 1e-14);
    EXPECT_NEAR(k * k * j.sn * j.sn + j.dn * j.dn, 1.0, 1e-14);
  }
}

TEST(JacobiCn, PeriodicityAndDerivativeIdentity) {
  std::mt19937_64 rng(2);
  EXPECT_TRUE(harness::checks::cn_periodicity(rng).passed);
  EXPECT_TRUE(harness::checks::cn_identity(rng).passed);
}

TEST(JacobiCn, LargeArguments) {
  const double k = std::sqrt(0.5), P = 4.0 * complete_K(k);
  for (double x : {0.3, 1.1}) EXPECT_NEAR(jacobi_cn(x + 1e5 * P, k), jacobi_cn(x, k), 1e-10);
}

TEST(CnoidalWave, Parameters) {
  const double nu = 1e-3;
  const CnoidalWave w = cnoidal_wave(nu);
  const double c = 2.0 * 1.854074677301372;
  EXPECT_NEAR(w.wavenumber, c, 1e-14);
  EXPECT_NEAR(w.amplitude, 6.0 * nu * c * c, 1e-15);
  EXPECT_NEAR(w.speed, 0.1, 1e-16);
  EXPECT_EQ(w.mean, 0.1);
  EXPECT_NEAR(w.spatial_period(), 1.0, 1e-15);
  EXPECT_TRUE(w.satisfies_kdv_conditions(nu));
  EXPECT_THROW(cnoidal_wave(0.0), InvalidInput);
}

TEST(CnoidalWave, FirstPowerProfile) {
  const CnoidalWave p = cn_first_power_profile(1e-3);
  EXPECT_NEAR(p.spatial_period(), 2.0, 1e-15);
  EXPECT_FALSE(p.satisfies_kdv_conditions(1e-3));
  EXPECT_NEAR(p(0.0, 0.0), 0.1 + 3e-3 / (2 * 1.854074677301372), 1e-15);
}

TEST(CnoidalWave, DerivativesMatchDifferences) {
  for (const CnoidalWave& w : {cnoidal_wave(1e-3), cn_first_power_profile(1e-3)}) {
    for (double x : {0.13, 0.61}) {
      const double e = 1e-4;
      for (int order = 1; order <= 3; ++order) {
        const double fd = (w.derivative(x + e, 0.2, order - 1) - w.derivative(x - e, 0.2, order - 1)) /
                          (2 * e);
        EXPECT_NEAR(w.derivative(x, 0.2, order), fd, 1e-6 * std::max(1.0, std::abs(fd)))
            << "order " << order;
      }
    }
  }
}

TEST(CnoidalWave, TravelsAtSpeed) {
  const CnoidalWave w = cnoidal_wave(1e-3);
  EXPECT_NEAR(w(0.37, 1.0), w(0.27, 0.0), 1e-15);
}

TEST(PdeResidual, ConstantIsExact) {
  EXPECT_NEAR(pde_residual(Constant{0.4}, 1e-3, FluxSpec::zero(), 0.3, 0.5), 0.0, 1e-10);
}

TEST(PdeResidual, CorrectedSmallUncorrectedLarge) {
  std::mt19937_64 rng(5);
  const auto g = harness::checks::pde_residual_gate(rng, 1e-3, 20);
  EXPECT_LE(g.corrected_max, g.corrected_bound);
  EXPECT_GE(g.uncorrected_max, 1e3 * g.corrected_max);
}
