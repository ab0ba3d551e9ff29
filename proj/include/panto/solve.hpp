#pragma once

#include <cstddef>

#include "panto/grid_function.hpp"
#include "panto/model.hpp"

namespace panto {

// The generator applied to a tabulated function at a point:
//   (kappa^2/2) f''(x) - v f'(x) + lambda (E[f(alpha x)] - f(x)),
// with f' and f'' by central differences of the grid spacing. Exactly zero
// on constants for every model.
double generator_apply(const ModelSpec& model, const GridFunction& f, double x);

// max over interior grid nodes of |generator_apply|; how far f is from
// solving the equation on its own grid.
double harmonicity_residual(const ModelSpec& model, const GridFunction& f);

struct PicardOptions {
  double tol = 1e-10;
  std::size_t max_iter = 10000;
};

struct PicardResult {
  GridFunction y;
  bool converged = false;
  std::size_t iterations = 0;
  double last_change = 0.0;
};

// Fixed-point iteration of the first-order integral representation
//   y(x) = exp(-lambda x / v) * (y0 + (lambda/v) Int_0^x exp(lambda u / v)
//          E[y(alpha u)] du),        x in [0, x_max],
// on a uniform grid with clamp closure at x_max. The kernel is integrated
// exactly against a piecewise-linear integrand (exponentially weighted
// trapezoid), so constants are exact fixed points. Requires kappa = 0 and
// v > 0. Stops when the sup-change drops below tol; non-convergence within
// max_iter is reported in the result, not thrown.
PicardResult picard_solve(const ModelSpec& model, double y0, double x_max,
                          std::size_t n_points, PicardOptions opts = {});

struct DerivativeBound {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

// For kappa = 0, v > 0: checks the a-priori bound
//   max |f'|  <=  (2 lambda / v) max |f|.
// For kappa > 0: checks the integral representation
//   f'(x) = Int_0^inf g(u + x) exp(-gamma u) du,
//   gamma = 2v/kappa^2, g = (2 lambda / kappa^2)(E[f(alpha .)] - f),
// by quadrature comparison at sample points; lhs is the worst discrepancy
// and rhs the comparison tolerance. v = 0 is rejected.
DerivativeBound derivative_bound_check(const ModelSpec& model,
                                       const GridFunction& f);

}  // namespace panto
