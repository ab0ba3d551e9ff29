#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace panto {
namespace qseries {

// Nonnegative real with an explicit binary exponent, value = mantissa *
// 2^exp2 with mantissa in [1, 2) (or exactly 0). The series coefficients
// decay like q^{-k^2/2} and leave double range near k = 50, while the
// recurrence residual has to stay meaningful up to k = 200.
struct ScaledReal {
  double mantissa = 0.0;
  std::int64_t exp2 = 0;

  static ScaledReal from(double v);
  ScaledReal times(double v) const;
  double to_double() const;  // underflows to 0 outside double range

  // |a - b| / a for positive a, b of comparable scale.
  static double relative_difference(const ScaledReal& a, const ScaledReal& b);
};

// Power-series solution of the order-2 functional equation
//   phi(q^2 s) - 2 (1 + q s) phi(q s) + phi(s) = 0
// with phi(s) = sum c_k s^k, c_0 = 1, and the coefficient recurrence
//   c_k = 2 q^k c_{k-1} / (q^k - 1)^2.
// The ratio c_k / c_{k-1} tends to 0, so phi is entire. All c_k > 0.
class SeriesPoly {
 public:
  SeriesPoly(double q, std::size_t order);  // q > 0, q != 1

  double q() const { return q_; }
  std::size_t order() const { return coeffs_.size() - 1; }

  double coefficient(std::size_t k) const { return coeffs_[k].to_double(); }
  const ScaledReal& coefficient_scaled(std::size_t k) const {
    return coeffs_[k];
  }

  // max over k of the relative defect of c_k (q^k - 1)^2 = 2 q^k c_{k-1},
  // evaluated in the scaled representation.
  double recurrence_residual() const;

 private:
  double q_;
  std::vector<ScaledReal> coeffs_;
};

struct PhiValue {
  double value = 0.0;
  double truncation_error = 0.0;  // |c_K s^K| * K
};

// Direct evaluation of the truncated series with compensated summation.
// Valid inside the accuracy envelope truncation_error <= 1e-10 * |value|;
// outside it the call throws and directs the caller to continue_phi.
PhiValue eval_phi(const SeriesPoly& poly, double s);

// Evaluation for s > 0 of any size: the series inside base_radius, and the
// functional-equation stepping
//   phi(q s) = 2 (1 + s) phi(s) - phi(s/q)          (q > 1)
//   phi(s)   = 2 (1 + q s) phi(q s) - phi(q^2 s)    (q < 1)
// outside. A running first-order error estimate detects catastrophic
// cancellation; an estimated relative error above 1e-4 throws, reporting the
// step at which it occurred.
double continue_phi(const SeriesPoly& poly, double s, double base_radius);

// Running maxima M(S) of |phi| over [0, S] at n_points values of S. A
// nonconstant entire solution of the functional equation has zero order, so
// log M(S) grows super-logarithmically but slower than any power of S.
std::vector<std::pair<double, double>> growth_diagnostic(
    const SeriesPoly& poly, double S_max, std::size_t n_points);

}  // namespace qseries
}  // namespace panto
