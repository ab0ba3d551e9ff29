#include "panto/simulate.hpp"

#include <cmath>
#include <stdexcept>

namespace panto {

std::vector<double> PathSkeleton::jump_times() const {
  std::vector<double> sigma(tau.size());
  double t = 0.0;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    t += tau[i];
    sigma[i] = t;
  }
  return sigma;
}

double PathSkeleton::position_closed_form(std::size_t n) const {
  if (n == 0) return x0;
  double acc = x0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += zeta[i] * std::exp(-walk_at(i));
  }
  return std::exp(S[n - 1]) * acc;
}

PathSkeleton sample_skeleton(const ModelSpec& model, double x0,
                             std::size_t n_jumps, RngStream& rng) {
  PathSkeleton skel;
  skel.x0 = x0;
  skel.tau.resize(n_jumps);
  skel.xi.resize(n_jumps);
  skel.zeta.resize(n_jumps);
  skel.S.resize(n_jumps);
  skel.X.resize(n_jumps);

  double s = 0.0;
  double x = x0;
  for (std::size_t n = 0; n < n_jumps; ++n) {
    const double tau = rng.exponential(model.lambda);
    const double xi = model.jump_law.sample_xi(rng);
    double zeta = -model.v * tau;
    if (model.kappa > 0.0) {
      zeta += model.kappa * std::sqrt(tau) * rng.normal();
    }
    s += xi;
    x = std::exp(xi) * (x + zeta);
    skel.tau[n] = tau;
    skel.xi[n] = xi;
    skel.zeta[n] = zeta;
    skel.S[n] = s;
    skel.X[n] = x;
  }
  return skel;
}

double evaluate_between_jumps(const PathSkeleton& skel, const ModelSpec& model,
                              double t, RngStream& rng) {
  if (t < 0.0) throw std::invalid_argument("evaluate_between_jumps: t < 0");
  if (t == 0.0) return skel.x0;

  // Locate the interval [sigma_i, sigma_{i+1}) containing t.
  double sigma_i = 0.0;
  std::size_t i = 0;
  while (i < skel.n_jumps() && sigma_i + skel.tau[i] <= t) {
    sigma_i += skel.tau[i];
    ++i;
    if (sigma_i == t) return skel.position_at(i);
  }
  if (i >= skel.n_jumps()) {
    throw std::invalid_argument(
        "evaluate_between_jumps: t beyond simulated horizon");
  }

  const double dt = t - sigma_i;
  const double interval = skel.tau[i];
  const double x_start = skel.position_at(i);
  if (model.kappa == 0.0) return x_start - model.v * dt;

  // Brownian increment over the full interval implied by zeta_{i+1}.
  const double b_total = (skel.zeta[i] + model.v * interval) / model.kappa;
  const double frac = dt / interval;
  const double mean = b_total * frac;
  const double var = dt * (interval - dt) / interval;
  const double w = mean + std::sqrt(var) * rng.normal();
  return x_start - model.v * dt + model.kappa * w;
}

std::optional<std::size_t> first_passage_index(std::span<const double> S,
                                               double r) {
  if (!(r > 0.0)) throw std::invalid_argument("first_passage_index: r must be > 0");
  for (std::size_t k = 0; k < S.size(); ++k) {
    if (S[k] <= -r) return k + 1;
  }
  return std::nullopt;
}

std::vector<double> eta_partial_sums(const ModelSpec& model,
                                     std::size_t n_terms, RngStream& rng) {
  std::vector<double> eta(n_terms);
  double s_prev = 0.0;  // S_{n-1}
  double acc = 0.0;
  for (std::size_t n = 0; n < n_terms; ++n) {
    const double tau = rng.exponential(model.lambda);
    const double xi = model.jump_law.sample_xi(rng);
    double zeta = -model.v * tau;
    if (model.kappa > 0.0) {
      zeta += model.kappa * std::sqrt(tau) * rng.normal();
    }
    acc += zeta * std::exp(-s_prev);
    eta[n] = acc;
    s_prev += xi;
  }
  return eta;
}

double cauchy_increment(std::span<const double> eta) {
  if (eta.size() < 2) return 0.0;
  return std::abs(eta[eta.size() - 1] - eta[eta.size() / 2 - 1]);
}

}  // namespace panto
