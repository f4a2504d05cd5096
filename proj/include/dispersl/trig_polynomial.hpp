#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

namespace dispersl {

/// Real 1-periodic trigonometric polynomial
///   v(x) = a_0 + sum_{k=1}^{N} a_k cos(2 pi k x) + b_k sin(2 pi k x).
/// Translation, differentiation and the L2 norm are exact in coefficient
/// space, which makes it the reference object for operator-level checks.
class TrigPolynomial {
public:
  TrigPolynomial() : cos_(1, 0.0), sin_(1, 0.0) {}

  /// cos_coeffs[0] is the mean; sin_coeffs[0] is ignored.
  TrigPolynomial(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs)
      : cos_(std::move(cos_coeffs)), sin_(std::move(sin_coeffs)) {
    const std::size_t n = std::max({cos_.size(), sin_.size(), std::size_t{1}});
    cos_.resize(n, 0.0);
    sin_.resize(n, 0.0);
    sin_[0] = 0.0;
  }

  static TrigPolynomial constant(double c) { return TrigPolynomial({c}, {0.0}); }

  /// Coefficients drawn uniformly from [-1, 1].
  template <typename Rng>
  static TrigPolynomial random(std::size_t degree, Rng& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> a(degree + 1), b(degree + 1);
    for (std::size_t k = 0; k <= degree; ++k) {
      a[k] = dist(rng);
      b[k] = k == 0 ? 0.0 : dist(rng);
    }
    return TrigPolynomial(std::move(a), std::move(b));
  }

  std::size_t degree() const noexcept { return cos_.size() - 1; }
  const std::vector<double>& cos_coeffs() const noexcept { return cos_; }
  const std::vector<double>& sin_coeffs() const noexcept { return sin_; }

  double operator()(double x) const { return derivative_value(x, 0); }
  double operator()(double x, int order) const { return derivative_value(x, order); }

  /// Value of the order-th derivative at x.
  double derivative_value(double x, int order) const {
    double sum = 0.0;
    for (std::size_t k = 0; k <= degree(); ++k) {
      const double w = 2.0 * std::numbers::pi * static_cast<double>(k);
      const double phase = w * x + 0.5 * std::numbers::pi * order;
      const double scale = order == 0 ? 1.0 : std::pow(w, order);
      sum += scale * (cos_[k] * std::cos(phase) + sin_[k] * std::sin(phase));
    }
    return sum;
  }

  /// (T_y v)(x) = v(x - y).
  TrigPolynomial translated(double y) const {
    TrigPolynomial out = *this;
    for (std::size_t k = 1; k <= degree(); ++k) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) * y;
      const double c = std::cos(theta), s = std::sin(theta);
      out.cos_[k] = cos_[k] * c - sin_[k] * s;
      out.sin_[k] = cos_[k] * s + sin_[k] * c;
    }
    return out;
  }

  TrigPolynomial derivative(int order = 1) const {
    TrigPolynomial out = *this;
    for (int r = 0; r < order; ++r) {
      out.cos_[0] = 0.0;
      for (std::size_t k = 1; k <= degree(); ++k) {
        const double w = 2.0 * std::numbers::pi * static_cast<double>(k);
        const double a = out.cos_[k], b = out.sin_[k];
        out.cos_[k] = w * b;
        out.sin_[k] = -w * a;
      }
    }
    return out;
  }

  /// ||v||_{L2(T)}^2 by Parseval.
  double l2_norm_squared() const {
    double sum = cos_[0] * cos_[0];
    for (std::size_t k = 1; k <= degree(); ++k)
      sum += 0.5 * (cos_[k] * cos_[k] + sin_[k] * sin_[k]);
    return sum;
  }

  double l2_norm() const { return std::sqrt(l2_norm_squared()); }

  TrigPolynomial& operator+=(const TrigPolynomial& o) {
    const std::size_t n = std::max(cos_.size(), o.cos_.size());
    cos_.resize(n, 0.0);
    sin_.resize(n, 0.0);
    for (std::size_t k = 0; k < o.cos_.size(); ++k) {
      cos_[k] += o.cos_[k];
      sin_[k] += o.sin_[k];
    }
    return *this;
  }

  TrigPolynomial& operator*=(double s) {
    for (auto& c : cos_) c *= s;
    for (auto& c : sin_) c *= s;
    return *this;
  }

  friend TrigPolynomial operator+(TrigPolynomial a, const TrigPolynomial& b) {
    return a += b;
  }
  friend TrigPolynomial operator-(TrigPolynomial a, const TrigPolynomial& b) {
    return a += TrigPolynomial(b) *= -1.0;
  }
  friend TrigPolynomial operator*(double s, TrigPolynomial a) { return a *= s; }

private:
  std::vector<double> cos_;
  std::vector<double> sin_;
};

}  // namespace dispersl
