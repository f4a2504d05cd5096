#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dispersl/errors.hpp"

namespace dispersl::detail {

// Thomas algorithm for a[i] x[i-1] + b[i] x[i] + c[i] x[i+1] = d[i]
// (a[0] and c[n-1] unused). Throws on a vanishing pivot.
template <typename Real>
std::vector<Real> solve_tridiagonal(std::span<const Real> a,
                                    std::span<const Real> b,
                                    std::span<const Real> c,
                                    std::span<const Real> d) {
  const std::size_t n = b.size();
  std::vector<Real> cp(n), dp(n), x(n);
  Real pivot = b[0];
  if (!(std::abs(pivot) > Real(1e-300)))
    throw ConstructionError("tridiagonal solve: zero pivot at row 0");
  cp[0] = c[0] / pivot;
  dp[0] = d[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = b[i] - a[i] * cp[i - 1];
    if (!(std::abs(pivot) > Real(1e-300)))
      throw ConstructionError("tridiagonal solve: zero pivot at row " +
                              std::to_string(i));
    cp[i] = i + 1 < n ? c[i] / pivot : Real(0);
    dp[i] = (d[i] - a[i] * dp[i - 1]) / pivot;
  }
  x[n - 1] = dp[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
  return x;
}

// Cyclic system: as above plus the corner entries
//   row 0:   ... + a[0] x[n-1]
//   row n-1: c[n-1] x[0] + ...
// solved by a Sherman-Morrison rank-one correction of one tridiagonal matrix.
template <typename Real>
std::vector<Real> solve_cyclic_tridiagonal(std::span<const Real> a,
                                           std::span<const Real> b,
                                           std::span<const Real> c,
                                           std::span<const Real> d) {
  const std::size_t n = b.size();
  if (n < 3)
    throw ConstructionError("cyclic tridiagonal solve needs at least 3 rows");
  const Real alpha = c[n - 1];  // bottom-left corner
  const Real beta = a[0];       // top-right corner
  const Real gamma = -b[0];

  std::vector<Real> bb(b.begin(), b.end());
  bb[0] = b[0] - gamma;
  bb[n - 1] = b[n - 1] - alpha * beta / gamma;

  const std::vector<Real> x = solve_tridiagonal<Real>(a, bb, c, d);
  std::vector<Real> u(n, Real(0));
  u[0] = gamma;
  u[n - 1] = alpha;
  const std::vector<Real> z = solve_tridiagonal<Real>(a, bb, c, u);

  const Real denom = Real(1) + z[0] + beta * z[n - 1] / gamma;
  if (!(std::abs(denom) > Real(1e-14)))
    throw ConstructionError("cyclic tridiagonal solve: singular system");
  const Real fact = (x[0] + beta * x[n - 1] / gamma) / denom;

  std::vector<Real> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = x[i] - fact * z[i];
    if (!std::isfinite(out[i]))
      throw ConstructionError("cyclic tridiagonal solve: non-finite solution");
  }
  return out;
}

}  // namespace dispersl::detail
