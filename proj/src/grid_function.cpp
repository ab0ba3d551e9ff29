#include "panto/grid_function.hpp"

#include <cmath>
#include <stdexcept>

namespace panto {

GridFunction::GridFunction(double x_lo, double x_hi, std::vector<double> values,
                           GridClosure closure)
    : x_lo_(x_lo), x_hi_(x_hi), values_(std::move(values)), closure_(closure) {
  if (values_.size() < 3) {
    throw std::invalid_argument("GridFunction: need at least 3 points");
  }
  if (!(x_hi > x_lo)) {
    throw std::invalid_argument("GridFunction: x_hi must exceed x_lo");
  }
  h_ = (x_hi_ - x_lo_) / static_cast<double>(values_.size() - 1);
}

GridFunction GridFunction::constant(double c, double x_lo, double x_hi,
                                    std::size_t n_points) {
  return GridFunction(x_lo, x_hi, std::vector<double>(n_points, c),
                      GridClosure::constant(c, c));
}

GridFunction GridFunction::sample(const std::function<double(double)>& f,
                                  double x_lo, double x_hi,
                                  std::size_t n_points, GridClosure closure) {
  std::vector<double> vals(n_points);
  const double h = (x_hi - x_lo) / static_cast<double>(n_points - 1);
  for (std::size_t i = 0; i < n_points; ++i) {
    vals[i] = f(x_lo + h * static_cast<double>(i));
  }
  return GridFunction(x_lo, x_hi, std::move(vals), closure);
}

double GridFunction::operator()(double x) const {
  if (x <= x_lo_) {
    if (x == x_lo_) return values_.front();
    return closure_.kind == GridClosure::Kind::ClampToEndpoint ? values_.front()
                                                               : closure_.left;
  }
  if (x >= x_hi_) {
    if (x == x_hi_) return values_.back();
    return closure_.kind == GridClosure::Kind::ClampToEndpoint ? values_.back()
                                                               : closure_.right;
  }
  const double pos = (x - x_lo_) / h_;
  // Snap within the rounding band of the node arithmetic, so that any x
  // produced as x_lo + h * i evaluates to the stored value exactly.
  const double nearest = std::nearbyint(pos);
  const double band =
      8.0 * 2.220446049250313e-16 * (std::abs(x_lo_) / h_ + std::abs(pos) + 1.0);
  if (std::abs(pos - nearest) <= band) {
    return values_[static_cast<std::size_t>(nearest)];
  }
  std::size_t i = static_cast<std::size_t>(pos);
  if (i >= values_.size() - 1) i = values_.size() - 2;
  const double frac = pos - static_cast<double>(i);
  return values_[i] + frac * (values_[i + 1] - values_[i]);
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace panto
