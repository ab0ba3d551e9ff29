#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace panto {
namespace wkb {

// Leading-order phase/amplitude analysis of the prototype equation
//   y'(x) + y(x) = (y(qx) + y(x/q)) / 2,   q = 1 +- eps,
// in the rescaled variable u = eps * x. Writing w(u) = u V'(u), the phase
// solves the eikonal relation
//   1 + w/u = cosh(w)   <=>   u = w / (cosh(w) - 1),
// which has a unique positive root for every u > 0 since w -> w/(cosh w - 1)
// is strictly decreasing.

// The positive eikonal root w(u); bracketing bisection refined by Newton.
double eikonal_w(double u);

// dw/du = (cosh w - 1) / (1 - u sinh w); the denominator never vanishes
// because u sinh w = w coth(w/2) >= 2.
double eikonal_w_prime(double u, double w);

// Scaled eikonal defect |1 + w/u - cosh w| / cosh w. The absolute defect is
// bounded below by the rounding of cosh w (of order 1e5 at u = 1e-4), so the
// meaningful residual is relative to that magnitude.
double eikonal_residual(double u, double w);

// Branch selector for the exp(-+ w) term in the transport equation; the two
// signs reflect the asymmetry between the rescalings q = 1 + eps and
// q = 1 - eps, which the expansion itself does not resolve.
enum class Branch { Minus, Plus };

// d(ln A0)/du = [u^2 V'' cosh w + w exp(-+ w)] / (2 (1 - u sinh w)), with
// u^2 V'' = u w' - w by implicit differentiation of the eikonal relation.
double transport_log_slope(double u, Branch branch);

// V on the grid nodes, anchored V(u_ref) = 0: cumulative adaptive-Simpson
// integration of w(s)/s between consecutive nodes. u_ref must be a node.
std::vector<double> phase_V(std::span<const double> u_grid, double u_ref);

// A0 on the grid nodes by integrating the transport slope; anchored to
// A0_ref (> 0) at the first node.
std::vector<double> transport_A0(std::span<const double> u_grid, Branch branch,
                                 double A0_ref);

struct WkbProfile {
  std::vector<double> u;
  std::vector<double> w;
  std::vector<double> V;
  std::vector<double> A0_minus;
  std::vector<double> A0_plus;
};

WkbProfile compute_profile(std::vector<double> u_grid, double u_ref,
                           double A0_ref = 1.0);

}  // namespace wkb
}  // namespace panto
