#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "panto/rng.hpp"

namespace panto {

// Distribution of the jump multiplier alpha > 0, equivalently of the jump
// exponent xi = ln(alpha). Three variants:
//   Discrete   -- atoms (alpha_j, p_j), probabilities normalized to 1;
//   LogNormal  -- xi ~ Normal(m, s^2);
//   UniformLog -- xi uniform on [lo, hi].
//
struct QuadratureConfig {
  std::size_t order = 64;   // Gauss-Legendre nodes in the xi variable
  double mass_tol = 1e-10;  // admissible truncated tail mass
};

// A law concentrated at alpha = 1 is constructible, but carries a degenerate
// flag; estimators that rely on the walk actually moving refuse it.
// Immutable after construction, safe for concurrent reads.
class JumpLaw {
 public:
  enum class Kind { Discrete, LogNormal, UniformLog };

  static JumpLaw discrete(const std::vector<std::pair<double, double>>& atoms);
  static JumpLaw log_normal(double m, double s,
                            QuadratureConfig cfg = QuadratureConfig());
  static JumpLaw uniform_log(double lo, double hi,
                             QuadratureConfig cfg = QuadratureConfig());

  Kind kind() const { return kind_; }
  bool degenerate() const { return degenerate_; }

  // K = E[ln alpha] in closed form.
  double mean_log() const;
  // E|ln alpha| in closed form.
  double mean_abs_log() const;
  // E[alpha^p] (p real); used by tests and diagnostics.
  double moment(double p) const;

  // One draw of xi = ln(alpha).
  double sample_xi(RngStream& rng) const;

  // E[f(alpha * x)]. Exact weighted sum for Discrete laws; Gauss-Legendre
  // quadrature in xi over a truncated support for continuous ones. Weights
  // are renormalized by their quadrature mass, so constants are reproduced
  // exactly and the truncation bias cancels at f == const.
  template <class F>
  double expect_alpha(F&& f, double x) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes_xi_.size(); ++i) {
      acc += weights_[i] * f(nodes_alpha_[i] * x);
    }
    return acc / weight_sum_;
  }

 private:
  JumpLaw() = default;
  void build_discrete(const std::vector<std::pair<double, double>>& atoms);
  void build_lognormal(double m, double s, QuadratureConfig cfg);
  void build_uniformlog(double lo, double hi, QuadratureConfig cfg);

  Kind kind_ = Kind::Discrete;
  bool degenerate_ = false;
  double par_a_ = 0.0;  // m for LogNormal, lo for UniformLog
  double par_b_ = 0.0;  // s for LogNormal, hi for UniformLog

  // Quadrature/atom tables in both variables. For Discrete these are the
  // atoms themselves and weight_sum_ == 1.
  std::vector<double> nodes_xi_;
  std::vector<double> nodes_alpha_;
  std::vector<double> weights_;
  std::vector<double> cum_weights_;  // sampling table for Discrete
  double weight_sum_ = 1.0;
};

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(std::size_t n, std::vector<double>& nodes,
                    std::vector<double>& weights);

}  // namespace panto
