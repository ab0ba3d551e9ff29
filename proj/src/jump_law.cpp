#include "panto/jump_law.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace panto {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Standard normal cdf tail: P{Z > z}.
double normal_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// Smallest z with 2 * P{Z > z} <= mass_tol, by bisection.
double truncation_halfwidth(double mass_tol) {
  if (!(mass_tol > 0.0)) {
    throw std::invalid_argument("JumpLaw: mass_tol must be positive");
  }
  double lo = 0.0, hi = 40.0;
  if (2.0 * normal_tail(hi) > mass_tol) {
    throw std::invalid_argument(
        "JumpLaw: cannot truncate normal support to requested mass");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (2.0 * normal_tail(mid) > mass_tol) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

}  // namespace

void gauss_legendre(std::size_t n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  // Newton iteration from the Chebyshev-like initial guess; symmetric pairs.
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * static_cast<double>(k) - 1.0) * x * p1 -
                           (static_cast<double>(k) - 1.0) * p0) /
                          static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

JumpLaw JumpLaw::discrete(const std::vector<std::pair<double, double>>& atoms) {
  JumpLaw law;
  law.build_discrete(atoms);
  return law;
}

JumpLaw JumpLaw::log_normal(double m, double s, QuadratureConfig cfg) {
  JumpLaw law;
  law.build_lognormal(m, s, cfg);
  return law;
}

JumpLaw JumpLaw::uniform_log(double lo, double hi, QuadratureConfig cfg) {
  JumpLaw law;
  law.build_uniformlog(lo, hi, cfg);
  return law;
}

void JumpLaw::build_discrete(
    const std::vector<std::pair<double, double>>& atoms) {
  kind_ = Kind::Discrete;
  if (atoms.empty()) throw std::invalid_argument("JumpLaw: no atoms");
  double psum = 0.0;
  for (const auto& [alpha, p] : atoms) {
    if (!(alpha > 0.0)) {
      throw std::invalid_argument("JumpLaw: atom alpha must be positive");
    }
    if (!(p > 0.0)) {
      throw std::invalid_argument("JumpLaw: atom probability must be positive");
    }
    psum += p;
  }
  if (std::abs(psum - 1.0) > 1e-12) {
    throw std::invalid_argument("JumpLaw: atom probabilities must sum to 1");
  }
  nodes_alpha_.reserve(atoms.size());
  nodes_xi_.reserve(atoms.size());
  weights_.reserve(atoms.size());
  cum_weights_.reserve(atoms.size());
  double cum = 0.0;
  bool all_unit = true;
  for (const auto& [alpha, p] : atoms) {
    nodes_alpha_.push_back(alpha);
    nodes_xi_.push_back(std::log(alpha));
    const double pn = p / psum;
    weights_.push_back(pn);
    cum += pn;
    cum_weights_.push_back(cum);
    if (alpha != 1.0) all_unit = false;
  }
  cum_weights_.back() = 1.0;
  weight_sum_ = 1.0;
  degenerate_ = all_unit;
}

void JumpLaw::build_lognormal(double m, double s, QuadratureConfig cfg) {
  kind_ = Kind::LogNormal;
  if (!(s > 0.0)) throw std::invalid_argument("JumpLaw: s must be positive");
  par_a_ = m;
  par_b_ = s;
  degenerate_ = false;

  const double z = truncation_halfwidth(cfg.mass_tol);
  std::vector<double> gl_x, gl_w;
  gauss_legendre(cfg.order, gl_x, gl_w);
  const double half = z * s;
  nodes_xi_.resize(cfg.order);
  nodes_alpha_.resize(cfg.order);
  weights_.resize(cfg.order);
  weight_sum_ = 0.0;
  const double norm = 1.0 / (s * std::sqrt(2.0 * kPi));
  for (std::size_t i = 0; i < cfg.order; ++i) {
    const double xi = m + half * gl_x[i];
    const double pdf = norm * std::exp(-0.5 * (xi - m) * (xi - m) / (s * s));
    nodes_xi_[i] = xi;
    nodes_alpha_[i] = std::exp(xi);
    weights_[i] = gl_w[i] * half * pdf;
    weight_sum_ += weights_[i];
  }
}

void JumpLaw::build_uniformlog(double lo, double hi, QuadratureConfig cfg) {
  kind_ = Kind::UniformLog;
  if (!(hi > lo)) throw std::invalid_argument("JumpLaw: need lo < hi");
  par_a_ = lo;
  par_b_ = hi;
  degenerate_ = false;

  std::vector<double> gl_x, gl_w;
  gauss_legendre(cfg.order, gl_x, gl_w);
  nodes_xi_.resize(cfg.order);
  nodes_alpha_.resize(cfg.order);
  weights_.resize(cfg.order);
  weight_sum_ = 0.0;
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (std::size_t i = 0; i < cfg.order; ++i) {
    const double xi = mid + half * gl_x[i];
    nodes_xi_[i] = xi;
    nodes_alpha_[i] = std::exp(xi);
    weights_[i] = gl_w[i] * 0.5;  // pdf 1/(hi-lo) times half-width
    weight_sum_ += weights_[i];
  }
}

double JumpLaw::mean_log() const {
  switch (kind_) {
    case Kind::Discrete: {
      double k = 0.0;
      for (std::size_t i = 0; i < weights_.size(); ++i) {
        k += weights_[i] * nodes_xi_[i];
      }
      return k;
    }
    case Kind::LogNormal:
      return par_a_;
    case Kind::UniformLog:
      return 0.5 * (par_a_ + par_b_);
  }
  return 0.0;
}

double JumpLaw::mean_abs_log() const {
  switch (kind_) {
    case Kind::Discrete: {
      double k = 0.0;
      for (std::size_t i = 0; i < weights_.size(); ++i) {
        k += weights_[i] * std::abs(nodes_xi_[i]);
      }
      return k;
    }
    case Kind::LogNormal: {
      // Folded normal mean.
      const double m = par_a_, s = par_b_;
      return s * std::sqrt(2.0 / kPi) * std::exp(-0.5 * m * m / (s * s)) +
             m * std::erf(m / (s * std::sqrt(2.0)));
    }
    case Kind::UniformLog: {
      const double lo = par_a_, hi = par_b_;
      if (lo >= 0.0) return 0.5 * (lo + hi);
      if (hi <= 0.0) return -0.5 * (lo + hi);
      return 0.5 * (lo * lo + hi * hi) / (hi - lo);
    }
  }
  return 0.0;
}

double JumpLaw::moment(double p) const {
  switch (kind_) {
    case Kind::Discrete: {
      double m = 0.0;
      for (std::size_t i = 0; i < weights_.size(); ++i) {
        m += weights_[i] * std::pow(nodes_alpha_[i], p);
      }
      return m;
    }
    case Kind::LogNormal:
      return std::exp(p * par_a_ + 0.5 * p * p * par_b_ * par_b_);
    case Kind::UniformLog: {
      if (p == 0.0) return 1.0;
      const double lo = par_a_, hi = par_b_;
      return (std::exp(p * hi) - std::exp(p * lo)) / (p * (hi - lo));
    }
  }
  return 0.0;
}

double JumpLaw::sample_xi(RngStream& rng) const {
  switch (kind_) {
    case Kind::Discrete: {
      const double u = rng.uniform01();
      const auto it =
          std::upper_bound(cum_weights_.begin(), cum_weights_.end(), u);
      const std::size_t idx = std::min<std::size_t>(
          static_cast<std::size_t>(it - cum_weights_.begin()),
          nodes_xi_.size() - 1);
      return nodes_xi_[idx];
    }
    case Kind::LogNormal:
      return par_a_ + par_b_ * rng.normal();
    case Kind::UniformLog:
      return par_a_ + (par_b_ - par_a_) * rng.uniform01();
  }
  return 0.0;
}

}  // namespace panto
