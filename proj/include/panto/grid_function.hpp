#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace panto {

// Rule for evaluating a tabulated function outside its grid.
struct GridClosure {
  enum class Kind { ClampToEndpoint, Constant };
  Kind kind = Kind::ClampToEndpoint;
  double left = 0.0;
  double right = 0.0;

  static GridClosure clamp() { return {}; }
  static GridClosure constant(double c_left, double c_right) {
    return {Kind::Constant, c_left, c_right};
  }
};

// Function tabulated on a uniform grid. Evaluation returns the stored value
// exactly at grid nodes, interpolates linearly between nodes, and applies the
// closure rule outside [x_lo, x_hi]. Immutable after construction.
class GridFunction {
 public:
  GridFunction(double x_lo, double x_hi, std::vector<double> values,
               GridClosure closure = GridClosure::clamp());

  static GridFunction constant(double c, double x_lo, double x_hi,
                               std::size_t n_points);
  static GridFunction sample(const std::function<double(double)>& f,
                             double x_lo, double x_hi, std::size_t n_points,
                             GridClosure closure = GridClosure::clamp());

  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }
  std::size_t size() const { return values_.size(); }
  double spacing() const { return h_; }
  const GridClosure& closure() const { return closure_; }
  const std::vector<double>& values() const { return values_; }

  double node(std::size_t i) const { return x_lo_ + h_ * static_cast<double>(i); }
  double value_at(std::size_t i) const { return values_[i]; }

  double operator()(double x) const;

  double max_abs() const;

 private:
  double x_lo_;
  double x_hi_;
  double h_;
  std::vector<double> values_;
  GridClosure closure_;
};

}  // namespace panto
