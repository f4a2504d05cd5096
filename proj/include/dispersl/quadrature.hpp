#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <utility>

namespace dispersl {

/// N-point Gauss-Legendre rule on [-1, 1].
template <int N>
struct GaussLegendre {
  static_assert(N >= 1, "need at least one node");

  std::array<double, N> nodes{};
  std::array<double, N> weights{};

  /// Nodes are the roots of P_N, found by Newton iteration from the
  /// Chebyshev-like initial guess cos(pi (i + 3/4) / (N + 1/2)).
  static GaussLegendre compute() {
    GaussLegendre rule;
    for (int i = 0; i < (N + 1) / 2; ++i) {
      long double x = std::cos(std::numbers::pi_v<long double> * (i + 0.75L) /
                               (N + 0.5L));
      long double dp = 0;
      for (int iter = 0; iter < 100; ++iter) {
        auto [p, d] = legendre(x);
        dp = d;
        const long double dx = p / d;
        x -= dx;
        if (std::fabs(dx) <= 1e-19L) break;
      }
      dp = legendre(x).second;
      const long double w = 2.0L / ((1.0L - x * x) * dp * dp);
      rule.nodes[i] = static_cast<double>(-x);
      rule.nodes[N - 1 - i] = static_cast<double>(x);
      rule.weights[i] = static_cast<double>(w);
      rule.weights[N - 1 - i] = static_cast<double>(w);
    }
    if (N % 2 == 1) rule.nodes[N / 2] = 0.0;
    return rule;
  }

  /// Integral of fn over [a, b].
  template <typename Fn>
  double integrate(Fn&& fn, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (int q = 0; q < N; ++q) sum += weights[q] * fn(mid + half * nodes[q]);
    return half * sum;
  }

private:
  // (P_N(x), P_N'(x)) by the three-term recurrence.
  static std::pair<long double, long double> legendre(long double x) {
    long double p0 = 1.0L, p1 = x;
    for (int k = 2; k <= N; ++k) {
      const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (N == 0) return {1.0L, 0.0L};
    const long double d = N * (x * p1 - p0) / (x * x - 1.0L);
    return {p1, d};
  }
};

using SevenPointRule = GaussLegendre<7>;

/// The seven-node rule used by every norm in the library.
inline const SevenPointRule& seven_point_rule() {
  static const SevenPointRule rule = SevenPointRule::compute();
  return rule;
}

}  // namespace dispersl
