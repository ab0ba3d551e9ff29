#include "panto/qseries.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace panto {
namespace qseries {

ScaledReal ScaledReal::from(double v) {
  if (v == 0.0) return {};
  int e = 0;
  const double m = std::frexp(v, &e);  // m in [0.5, 1)
  return {2.0 * m, e - 1};
}

ScaledReal ScaledReal::times(double v) const {
  if (mantissa == 0.0 || v == 0.0) return {};
  int ev = 0;
  const double mv = std::frexp(v, &ev);
  double m = mantissa * (2.0 * mv);
  std::int64_t e = exp2 + ev - 1;
  if (m >= 2.0) {
    m *= 0.5;
    e += 1;
  }
  return {m, e};
}

double ScaledReal::to_double() const {
  if (mantissa == 0.0) return 0.0;
  if (exp2 > 1023) return mantissa * std::ldexp(1.0, 1023);  // saturate
  if (exp2 < -1100) return 0.0;
  return std::ldexp(mantissa, static_cast<int>(exp2));
}

double ScaledReal::relative_difference(const ScaledReal& a,
                                       const ScaledReal& b) {
  if (a.mantissa == 0.0 && b.mantissa == 0.0) return 0.0;
  if (a.mantissa == 0.0 || b.mantissa == 0.0) return 1.0;
  const std::int64_t shift = b.exp2 - a.exp2;
  if (shift > 64 || shift < -64) return 1.0;
  const double bv = b.mantissa * std::ldexp(1.0, static_cast<int>(shift));
  return std::abs(a.mantissa - bv) / a.mantissa;
}

SeriesPoly::SeriesPoly(double q, std::size_t order) : q_(q) {
  if (!(q > 0.0) || q == 1.0) {
    throw std::invalid_argument(
        "SeriesPoly: q must be positive and different from 1");
  }
  coeffs_.resize(order + 1);
  coeffs_[0] = ScaledReal::from(1.0);
  double qk = 1.0;
  for (std::size_t k = 1; k <= order; ++k) {
    qk *= q;
    const double d = qk - 1.0;
    coeffs_[k] = coeffs_[k - 1].times(2.0 * qk).times(1.0 / (d * d));
  }
}

double SeriesPoly::recurrence_residual() const {
  double worst = 0.0;
  double qk = 1.0;
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    qk *= q_;
    const double d = qk - 1.0;
    const ScaledReal lhs = coeffs_[k].times(d * d);
    const ScaledReal rhs = coeffs_[k - 1].times(2.0 * qk);
    worst = std::max(worst, ScaledReal::relative_difference(lhs, rhs));
  }
  return worst;
}

PhiValue eval_phi(const SeriesPoly& poly, double s) {
  // Neumaier-compensated sum of c_k s^k. Terms below double range vanish;
  // they are also negligible against c_0 = 1 since every term is >= 0 for
  // s >= 0.
  double sum = 0.0, comp = 0.0;
  double sk = 1.0;
  const std::size_t order = poly.order();
  for (std::size_t k = 0; k <= order; ++k) {
    const double term = poly.coefficient_scaled(k).times(sk).to_double();
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
    sk *= s;
  }
  PhiValue out;
  out.value = sum + comp;
  // |c_K| |s|^K * K as a crude tail majorant.
  double sK = 1.0;
  for (std::size_t k = 0; k < order; ++k) sK *= std::abs(s);
  out.truncation_error = poly.coefficient_scaled(order).times(sK).to_double() *
                         static_cast<double>(order);
  if (!(out.truncation_error <= 1e-10 * std::abs(out.value))) {
    throw std::domain_error(
        "eval_phi: accuracy envelope exceeded at s = " + std::to_string(s) +
        "; use continue_phi for this argument");
  }
  return out;
}

namespace {

struct TrackedValue {
  double value = 0.0;
  double abs_error = 0.0;
};

constexpr double kMachineEps = 2.220446049250313e-16;

}  // namespace

double continue_phi(const SeriesPoly& poly, double s, double base_radius) {
  if (!(s >= 0.0)) {
    throw std::invalid_argument("continue_phi: s must be nonnegative");
  }
  if (!(base_radius > 0.0)) {
    throw std::invalid_argument("continue_phi: base_radius must be positive");
  }
  const double q = poly.q();
  const auto series = [&poly](double z) { return eval_phi(poly, z).value; };

  if (s <= base_radius) return series(s);

  if (q > 1.0) {
    // Walk s down into the disk, then step back up with
    // phi(q sigma) = 2 (1 + sigma) phi(sigma) - phi(sigma / q).
    int n = 0;
    double s0 = s;
    while (s0 > base_radius) {
      s0 /= q;
      ++n;
    }
    const double seed_mid = series(s0);
    const double seed_low = series(s0 / q);
    TrackedValue cur{seed_mid, std::abs(seed_mid) * kMachineEps};
    TrackedValue prev{seed_low, std::abs(seed_low) * kMachineEps};
    double sigma = s0;
    for (int j = 0; j < n; ++j) {
      const double a = 2.0 * (1.0 + sigma);
      const double next = a * cur.value - prev.value;
      const double err = a * (cur.abs_error + std::abs(cur.value) * kMachineEps) +
                         (prev.abs_error + std::abs(prev.value) * kMachineEps) +
                         std::abs(next) * kMachineEps;
      if (next != 0.0 && err / std::abs(next) > 1e-4) {
        throw std::runtime_error(
            "continue_phi: catastrophic cancellation at step " +
            std::to_string(j + 1) + " of " + std::to_string(n));
      }
      prev = cur;
      cur = TrackedValue{next, err};
      sigma *= q;
    }
    return cur.value;
  }

  // q < 1: the arguments q^j s shrink toward the disk; recover phi(s) from
  // phi(s) = 2 (1 + q s) phi(q s) - phi(q^2 s), stepping j = n-1 .. 0.
  int n = 0;
  double sn = s;
  while (sn > base_radius) {
    sn *= q;
    ++n;
  }
  const double seed_n = series(sn);          // phi(q^n s)
  const double seed_n1 = series(sn * q);     // phi(q^{n+1} s)
  TrackedValue lower{seed_n, std::abs(seed_n) * kMachineEps};
  TrackedValue upper{seed_n1, std::abs(seed_n1) * kMachineEps};
  // Iterate psi_j = 2 (1 + q^{j+1} s) psi_{j+1} - psi_{j+2}.
  for (int j = n - 1; j >= 0; --j) {
    const double arg = std::pow(q, j + 1) * s;
    const double a = 2.0 * (1.0 + arg);
    const double next = a * lower.value - upper.value;
    const double err = a * (lower.abs_error + std::abs(lower.value) * kMachineEps) +
                       (upper.abs_error + std::abs(upper.value) * kMachineEps) +
                       std::abs(next) * kMachineEps;
    if (next != 0.0 && err / std::abs(next) > 1e-4) {
      throw std::runtime_error(
          "continue_phi: catastrophic cancellation at step " +
          std::to_string(n - j) + " of " + std::to_string(n));
    }
    upper = lower;
    lower = TrackedValue{next, err};
  }
  return lower.value;
}

std::vector<std::pair<double, double>> growth_diagnostic(
    const SeriesPoly& poly, double S_max, std::size_t n_points) {
  if (!(S_max > 0.0)) {
    throw std::invalid_argument("growth_diagnostic: S_max must be positive");
  }
  if (n_points < 2) {
    throw std::invalid_argument("growth_diagnostic: need at least 2 points");
  }
  // Evaluate on a fine sweep and accumulate running maxima at the report
  // points. The series is preferred as far as its accuracy envelope holds
  // (on s >= 0 every term is nonnegative, so phi >= c_0 = 1 and the tail
  // estimate measured against 1 is conservative); beyond that the stepping
  // engages. The envelope test runs in log2 space, out of overflow reach.
  double base_radius = S_max;
  if (poly.order() > 0) {
    const ScaledReal& last = poly.coefficient_scaled(poly.order());
    const double log2_tail =
        std::log2(last.mantissa) + static_cast<double>(last.exp2) +
        static_cast<double>(poly.order()) * std::log2(S_max) +
        std::log2(static_cast<double>(poly.order()));
    if (log2_tail > std::log2(1e-10)) base_radius = 1.0;
  }
  const std::size_t sweep = n_points * 8;
  std::vector<std::pair<double, double>> table(n_points);
  double running = std::abs(continue_phi(poly, 0.0, base_radius));
  std::size_t out = 0;
  const auto report_at = [&](std::size_t k) {
    return S_max * static_cast<double>(k + 1) / static_cast<double>(n_points);
  };
  for (std::size_t i = 1; i <= sweep; ++i) {
    const double s = S_max * static_cast<double>(i) / static_cast<double>(sweep);
    while (out < n_points && s > report_at(out) * (1.0 + 1e-12)) {
      table[out] = {report_at(out), running};
      ++out;
    }
    running = std::max(running, std::abs(continue_phi(poly, s, base_radius)));
  }
  while (out < n_points) {
    table[out] = {report_at(out), running};
    ++out;
  }
  return table;
}

}  // namespace qseries
}  // namespace panto
