#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dispersl/errors.hpp"

namespace dispersl {

/// Characteristic speed f(u) = F'(u) as a polynomial sum c_k u^k.
class FluxSpec {
public:
  enum class Kind { kdv, zero, polynomial };

  /// f(u) = u, i.e. F(u) = u^2 / 2.
  static FluxSpec kdv() { return FluxSpec(Kind::kdv, {0.0, 1.0}); }
  static FluxSpec zero() { return FluxSpec(Kind::zero, {}); }
  static FluxSpec polynomial(std::vector<double> coeffs) {
    return FluxSpec(Kind::polynomial, std::move(coeffs));
  }

  Kind kind() const noexcept { return kind_; }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return kind_ == Kind::zero; }

  /// d^order f / du^order at u.
  double derivative(double u, int order) const {
    double p = 0.0;
    for (std::size_t m = coeffs_.size(); m-- > static_cast<std::size_t>(order);) {
      double falling = 1.0;
      for (int r = 0; r < order; ++r) falling *= static_cast<double>(m - r);
      p = p * u + falling * coeffs_[m];
    }
    return p;
  }

  double operator()(double u) const { return derivative(u, 0); }
  double prime(double u) const { return derivative(u, 1); }

  bool operator==(const FluxSpec&) const = default;

private:
  FluxSpec(Kind kind, std::vector<double> coeffs)
      : kind_(kind), coeffs_(std::move(coeffs)) {
    for (double c : coeffs_)
      if (!std::isfinite(c)) throw InvalidInput("FluxSpec: non-finite coefficient");
  }

  Kind kind_;
  std::vector<double> coeffs_;
};

}  // namespace dispersl
