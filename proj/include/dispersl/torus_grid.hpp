#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dispersl/errors.hpp"

namespace dispersl {

/// Reduce x onto the unit torus [0, 1).
inline double wrap(double x) {
  if (!std::isfinite(x)) throw InvalidInput("wrap: non-finite argument");
  double r = x - std::floor(x);
  // x slightly below an integer can round up to exactly 1.
  if (r >= 1.0) r = 0.0;
  return r;
}

/// Uniform periodic mesh x_j = j / nx on T = R/Z.
class TorusGrid {
public:
  static constexpr std::size_t min_cells = 4;

  explicit TorusGrid(std::size_t nx) : nx_(nx), h_(0.0) {
    if (nx < min_cells)
      throw InvalidInput("TorusGrid: nx must be at least 4, got " +
                         std::to_string(nx));
    h_ = 1.0 / static_cast<double>(nx);
  }

  std::size_t size() const noexcept { return nx_; }
  double h() const noexcept { return h_; }
  double node(std::size_t j) const noexcept {
    return static_cast<double>(j) / static_cast<double>(nx_);
  }

  std::vector<double> nodes() const {
    std::vector<double> x(nx_);
    for (std::size_t j = 0; j < nx_; ++j) x[j] = node(j);
    return x;
  }

  bool operator==(const TorusGrid& other) const noexcept {
    return nx_ == other.nx_;
  }

private:
  std::size_t nx_;
  double h_;
};

inline TorusGrid make_uniform_grid(std::size_t nx) { return TorusGrid(nx); }

/// Nodal values u_j on a torus grid.
class GridFunction {
public:
  GridFunction(TorusGrid grid, std::vector<double> values)
      : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
      throw InvalidInput("GridFunction: expected " +
                         std::to_string(grid_.size()) + " values, got " +
                         std::to_string(values_.size()));
    for (std::size_t j = 0; j < values_.size(); ++j)
      if (!std::isfinite(values_[j]))
        throw InvalidInput("GridFunction: non-finite value at node " +
                           std::to_string(j));
  }

  const TorusGrid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t j) const noexcept { return values_[j]; }
  std::size_t size() const noexcept { return values_.size(); }

  bool operator==(const GridFunction& other) const = default;

private:
  TorusGrid grid_;
  std::vector<double> values_;
};

template <typename Fn>
GridFunction sample(Fn&& fn, const TorusGrid& grid) {
  std::vector<double> values(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    values[j] = fn(grid.node(j));
    if (!std::isfinite(values[j]))
      throw InvalidInput("sample: function is non-finite at node " +
                         std::to_string(j));
  }
  return GridFunction(grid, std::move(values));
}

}  // namespace dispersl
