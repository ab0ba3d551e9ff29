#include "panto/wkb.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace panto {
namespace wkb {

namespace {

// u(w) = w / (cosh w - 1), computed through sinh(w/2) so that small w does
// not lose precision: cosh w - 1 = 2 sinh^2(w/2).
double u_of_w(double w) {
  const double sh = std::sinh(0.5 * w);
  return w / (2.0 * sh * sh);
}

// Adaptive Simpson on [a, b] to the given absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return adaptive_simpson(f, a, b, fa, fm, fb, tol, 48);
}

}  // namespace

double eikonal_w(double u) {
  if (!(u > 0.0)) throw std::invalid_argument("eikonal_w: u must be positive");

  // u(w) is strictly decreasing, so bracket by doubling.
  double lo = 1e-8;
  while (u_of_w(lo) < u) lo *= 0.5;  // u huge: move the bracket left
  double hi = std::max(2.0 * lo, 1.0);
  while (u_of_w(hi) > u) hi *= 2.0;

  for (int it = 0; it < 60; ++it) {  // bisection to ~1e-8 relative
    const double mid = 0.5 * (lo + hi);
    if (u_of_w(mid) > u) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-8 * hi) break;
  }

  // Newton polish on G(w) = 1 + w/u - cosh w; G'(w) = 1/u - sinh w is
  // bounded away from zero at the root.
  double w = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {
    const double gval = 1.0 + w / u - std::cosh(w);
    const double gprime = 1.0 / u - std::sinh(w);
    const double step = gval / gprime;
    w -= step;
    if (std::abs(step) < 1e-15 * w) break;
  }
  return w;
}

double eikonal_w_prime(double u, double w) {
  return (std::cosh(w) - 1.0) / (1.0 - u * std::sinh(w));
}

double eikonal_residual(double u, double w) {
  const double c = std::cosh(w);
  return std::abs(1.0 + w / u - c) / c;
}

double transport_log_slope(double u, Branch branch) {
  const double w = eikonal_w(u);
  const double wp = eikonal_w_prime(u, w);
  const double u2vpp = u * wp - w;
  const double sign = branch == Branch::Minus ? -1.0 : 1.0;
  const double numer = u2vpp * std::cosh(w) + w * std::exp(sign * w);
  return 0.5 * numer / (1.0 - u * std::sinh(w));
}

std::vector<double> phase_V(std::span<const double> u_grid, double u_ref) {
  const std::size_t n = u_grid.size();
  if (n < 2) throw std::invalid_argument("phase_V: need at least 2 nodes");
  std::size_t ref = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(u_grid[i] > 0.0)) {
      throw std::invalid_argument("phase_V: grid must be positive");
    }
    if (i > 0 && !(u_grid[i] > u_grid[i - 1])) {
      throw std::invalid_argument("phase_V: grid must be increasing");
    }
    if (u_grid[i] == u_ref) ref = i;
  }
  if (ref == n) throw std::invalid_argument("phase_V: u_ref must be a node");

  const auto integrand = [](double s) { return eikonal_w(s) / s; };
  std::vector<double> v(n, 0.0);
  for (std::size_t i = ref; i + 1 < n; ++i) {
    v[i + 1] = v[i] + integrate(integrand, u_grid[i], u_grid[i + 1], 1e-12);
  }
  for (std::size_t i = ref; i > 0; --i) {
    v[i - 1] = v[i] - integrate(integrand, u_grid[i - 1], u_grid[i], 1e-12);
  }
  return v;
}

std::vector<double> transport_A0(std::span<const double> u_grid, Branch branch,
                                 double A0_ref) {
  const std::size_t n = u_grid.size();
  if (n < 2) throw std::invalid_argument("transport_A0: need >= 2 nodes");
  if (!(A0_ref > 0.0)) {
    throw std::invalid_argument("transport_A0: A0_ref must be positive");
  }
  const auto slope = [branch](double s) {
    return transport_log_slope(s, branch);
  };
  std::vector<double> a(n);
  double log_a = std::log(A0_ref);
  a[0] = A0_ref;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    log_a += integrate(slope, u_grid[i], u_grid[i + 1], 1e-12);
    a[i + 1] = std::exp(log_a);
  }
  return a;
}

WkbProfile compute_profile(std::vector<double> u_grid, double u_ref,
                           double A0_ref) {
  WkbProfile prof;
  prof.w.resize(u_grid.size());
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    prof.w[i] = eikonal_w(u_grid[i]);
  }
  prof.V = phase_V(u_grid, u_ref);
  prof.A0_minus = transport_A0(u_grid, Branch::Minus, A0_ref);
  prof.A0_plus = transport_A0(u_grid, Branch::Plus, A0_ref);
  prof.u = std::move(u_grid);
  return prof;
}

}  // namespace wkb
}  // namespace panto
