#include "panto/solve.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace panto {

double generator_apply(const ModelSpec& model, const GridFunction& f,
                       double x) {
  const double h = f.spacing();
  const double fx = f(x);
  const double fp = (f(x + h) - f(x - h)) / (2.0 * h);
  const double fpp = (f(x + h) - 2.0 * fx + f(x - h)) / (h * h);
  const double expectation = expect_f_alpha_x(model.jump_law, f, x);
  return 0.5 * model.kappa * model.kappa * fpp - model.v * fp +
         model.lambda * (expectation - fx);
}

double harmonicity_residual(const ModelSpec& model, const GridFunction& f) {
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < f.size(); ++i) {
    worst = std::max(worst, std::abs(generator_apply(model, f, f.node(i))));
  }
  return worst;
}

namespace {

// Weights of the exponentially fitted trapezoid cell
//   Int_0^1 (1-w) e^{-theta (1-w)} dw  and  Int_0^1 w e^{-theta (1-w)} dw,
// evaluated through their series for small theta to avoid cancellation.
struct CellWeights {
  double a;  // multiplies the left value
  double b;  // multiplies the right value
};

CellWeights fitted_trapezoid_weights(double theta) {
  if (theta < 1e-3) {
    double a = 0.0, b = 0.0, pk = 1.0;  // pk = (-theta)^k
    double fact = 2.0;                  // (k+2)!
    for (int k = 0; k <= 8; ++k) {
      a += pk * static_cast<double>(k + 1) / fact;
      b += pk / fact;
      pk *= -theta;
      fact *= static_cast<double>(k + 3);
    }
    return {a, b};
  }
  const double beta = std::exp(-theta);
  const double a = (1.0 - (1.0 + theta) * beta) / (theta * theta);
  const double b = (1.0 - beta) / theta - a;
  return {a, b};
}

// Piecewise-linear evaluation with clamp closure over a raw node vector on
// [0, x_max]; the iteration hot path avoids constructing GridFunction.
double clamp_interp(const std::vector<double>& y, double h, double x_max,
                    double x) {
  if (x <= 0.0) return y.front();
  if (x >= x_max) return y.back();
  const double pos = x / h;
  std::size_t i = static_cast<std::size_t>(pos);
  if (i >= y.size() - 1) i = y.size() - 2;
  const double frac = pos - static_cast<double>(i);
  return y[i] + frac * (y[i + 1] - y[i]);
}

}  // namespace

PicardResult picard_solve(const ModelSpec& model, double y0, double x_max,
                          std::size_t n_points, PicardOptions opts) {
  if (model.kappa != 0.0) {
    throw std::invalid_argument("picard_solve: requires kappa = 0");
  }
  if (!(model.v > 0.0)) {
    throw std::invalid_argument("picard_solve: requires v > 0");
  }
  if (!(x_max > 0.0) || n_points < 3) {
    throw std::invalid_argument("picard_solve: bad grid");
  }

  const double h = x_max / static_cast<double>(n_points - 1);
  const double rate = model.lambda / model.v;
  const double theta = rate * h;
  const double beta = std::exp(-theta);
  const auto [wa, wb] = fitted_trapezoid_weights(theta);

  // Boundary factor exp(-lambda x_i / v) as a running product.
  std::vector<double> boundary(n_points);
  boundary[0] = 1.0;
  for (std::size_t i = 1; i < n_points; ++i) boundary[i] = boundary[i - 1] * beta;

  // Start from the boundary term alone (the map applied to the zero
  // function); the iteration fills in the jump contribution.
  std::vector<double> y(n_points);
  for (std::size_t i = 0; i < n_points; ++i) y[i] = y0 * boundary[i];

  std::vector<double> g(n_points), next(n_points);
  double change = 0.0;
  std::size_t iter = 0;
  bool converged = false;
  while (iter < opts.max_iter) {
    ++iter;
    for (std::size_t i = 0; i < n_points; ++i) {
      const double u = h * static_cast<double>(i);
      g[i] = model.jump_law.expect_alpha(
          [&](double z) { return clamp_interp(y, h, x_max, z); }, u);
    }
    // J_i = Int_0^{x_i} exp(-lambda (x_i - u)/v) g(u) du, cell by cell.
    double j_scaled = 0.0;
    next[0] = y0;
    for (std::size_t i = 1; i < n_points; ++i) {
      j_scaled = beta * j_scaled + h * (wa * g[i - 1] + wb * g[i]);
      next[i] = boundary[i] * y0 + rate * j_scaled;
    }
    change = 0.0;
    for (std::size_t i = 0; i < n_points; ++i) {
      change = std::max(change, std::abs(next[i] - y[i]));
    }
    y.swap(next);
    if (change < opts.tol) {
      converged = true;
      break;
    }
  }

  return PicardResult{GridFunction(0.0, x_max, std::move(y)), converged, iter,
                      change};
}

namespace {

double fd_derivative_max(const GridFunction& f) {
  const double h = f.spacing();
  const std::size_t n = f.size();
  double worst = std::abs(-3.0 * f.value_at(0) + 4.0 * f.value_at(1) -
                          f.value_at(2)) /
                 (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    worst = std::max(
        worst, std::abs(f.value_at(i + 1) - f.value_at(i - 1)) / (2.0 * h));
  }
  worst = std::max(worst, std::abs(3.0 * f.value_at(n - 1) -
                                   4.0 * f.value_at(n - 2) +
                                   f.value_at(n - 3)) /
                              (2.0 * h));
  return worst;
}

}  // namespace

DerivativeBound derivative_bound_check(const ModelSpec& model,
                                       const GridFunction& f) {
  if (!(model.v > 0.0)) {
    throw std::invalid_argument("derivative_bound_check: requires v > 0");
  }

  if (model.kappa == 0.0) {
    DerivativeBound out;
    out.lhs = fd_derivative_max(f);
    out.rhs = 2.0 * model.lambda / model.v * f.max_abs();
    out.ok = out.lhs <= out.rhs * (1.0 + 1e-6);
    return out;
  }

  // kappa > 0: compare the central-difference derivative against
  //   Int_0^inf g(u + x) exp(-gamma u) du
  // at interior sample points, by composite Simpson over [0, 40/gamma].
  const double gamma = 2.0 * model.v / (model.kappa * model.kappa);
  const double gscale = 2.0 * model.lambda / (model.kappa * model.kappa);
  const auto g = [&](double u) {
    return gscale * (expect_f_alpha_x(model.jump_law, f, u) - f(u));
  };

  const double span = f.x_hi() - f.x_lo();
  const double h = f.spacing();
  double worst = 0.0;
  double deriv_scale = 0.0;
  for (int k = 1; k <= 9; ++k) {
    const double x = f.x_lo() + span * (0.1 * static_cast<double>(k));
    const double fd = (f(x + h) - f(x - h)) / (2.0 * h);
    const double u_max = 40.0 / gamma;
    const std::size_t cells = 4000;
    const double du = u_max / static_cast<double>(cells);
    double integral = g(x) + g(x + u_max) * std::exp(-40.0);
    for (std::size_t j = 1; j < cells; ++j) {
      const double u = du * static_cast<double>(j);
      integral += (j % 2 == 1 ? 4.0 : 2.0) * g(x + u) * std::exp(-gamma * u);
    }
    integral *= du / 3.0;
    worst = std::max(worst, std::abs(fd - integral));
    deriv_scale = std::max(deriv_scale, std::abs(fd));
  }

  DerivativeBound out;
  out.lhs = worst;
  out.rhs = 1e-2 * (1.0 + deriv_scale);
  out.ok = out.lhs <= out.rhs;
  return out;
}

}  // namespace panto
