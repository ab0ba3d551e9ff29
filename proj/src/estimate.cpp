#include "panto/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "panto/parallel.hpp"
#include "panto/rng.hpp"

namespace panto {

namespace {

double binomial_std_error(double p, std::size_t n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

void require_usable_law(const ModelSpec& model, const char* who) {
  if (model.jump_law.degenerate()) {
    throw std::invalid_argument(std::string(who) +
                                ": degenerate jump law (alpha == 1) rejected");
  }
}

// Exact draw of the minimum of a Brownian bridge on [0, interval] with
// diffusion coefficient kappa, pinned at a and b:
//   min = (a + b - sqrt((a-b)^2 - 2 kappa^2 interval ln U)) / 2,  U ~ U(0,1].
double bridge_minimum(double a, double b, double kappa, double interval,
                      RngStream& rng) {
  const double u = rng.uniform_open();
  const double d = a - b;
  return 0.5 *
         (a + b - std::sqrt(d * d - 2.0 * kappa * kappa * interval * std::log(u)));
}

enum class PathOutcome : std::uint8_t { Censored = 0, Hit = 1, Miss = 2 };

}  // namespace

EstimateResult estimate_ruin(const ModelSpec& model, double x,
                             std::size_t max_jumps, std::size_t n_paths,
                             std::uint64_t seed, unsigned workers) {
  if (n_paths < 1) throw std::invalid_argument("estimate_ruin: n_paths >= 1");
  require_usable_law(model, "estimate_ruin");

  if (x <= 0.0) {
    return EstimateResult{1.0, 0.0, n_paths, 0.0};
  }

  std::vector<PathOutcome> outcome(n_paths, PathOutcome::Censored);

  if (model.kappa == 0.0) {
    // Ruin happens at the pre-jump trough: the n-th trough is below zero iff
    // v * sum_{i<=n} tau_i exp(-S_{i-1}) >= x, and the sum is nondecreasing.
    parallel_indices(n_paths, workers, [&](std::size_t p) {
      RngStream rng(seed, p);
      double s_prev = 0.0;
      double drain = 0.0;
      for (std::size_t n = 0; n < max_jumps; ++n) {
        const double tau = rng.exponential(model.lambda);
        const double xi = model.jump_law.sample_xi(rng);
        drain += tau * std::exp(-s_prev);
        if (model.v * drain >= x) {
          outcome[p] = PathOutcome::Hit;
          return;
        }
        s_prev += xi;
      }
    });
  } else {
    parallel_indices(n_paths, workers, [&](std::size_t p) {
      RngStream rng(seed, p);
      double pos = x;
      for (std::size_t n = 0; n < max_jumps; ++n) {
        const double tau = rng.exponential(model.lambda);
        const double xi = model.jump_law.sample_xi(rng);
        const double zeta = -model.v * tau +
                            model.kappa * std::sqrt(tau) * rng.normal();
        const double pre_jump = pos + zeta;
        if (pre_jump <= 0.0 ||
            bridge_minimum(pos, pre_jump, model.kappa, tau, rng) <= 0.0) {
          outcome[p] = PathOutcome::Hit;
          return;
        }
        pos = std::exp(xi) * pre_jump;
      }
    });
  }

  std::size_t ruined = 0, censored = 0;
  for (auto o : outcome) {
    if (o == PathOutcome::Hit) ++ruined;
    if (o == PathOutcome::Censored) ++censored;
  }
  const double value = static_cast<double>(ruined) / static_cast<double>(n_paths);
  return EstimateResult{value, binomial_std_error(value, n_paths), n_paths,
                        static_cast<double>(censored) /
                            static_cast<double>(n_paths)};
}

std::vector<double> sample_eta_batch(const ModelSpec& model,
                                     std::size_t n_terms,
                                     std::size_t n_samples, std::uint64_t seed,
                                     unsigned workers) {
  require_usable_law(model, "estimate_escape_series");
  if (!(compute_K(model.jump_law) > 0.0)) {
    throw std::invalid_argument(
        "estimate_escape_series: requires K = E[ln alpha] > 0");
  }
  std::vector<double> eta(n_samples);
  parallel_indices(n_samples, workers, [&](std::size_t i) {
    RngStream rng(seed, i);
    double s_prev = 0.0;
    double acc = 0.0;
    for (std::size_t n = 0; n < n_terms; ++n) {
      const double tau = rng.exponential(model.lambda);
      const double xi = model.jump_law.sample_xi(rng);
      double zeta = -model.v * tau;
      if (model.kappa > 0.0) {
        zeta += model.kappa * std::sqrt(tau) * rng.normal();
      }
      acc += zeta * std::exp(-s_prev);
      s_prev += xi;
    }
    eta[i] = acc;
  });
  return eta;
}

EscapeSeriesResult escape_series_from_batch(std::span<const double> eta,
                                            double x, double epsilon) {
  std::size_t above = 0, above_eps = 0;
  for (double e : eta) {
    if (e > -x) ++above;
    if (e > -x - epsilon) ++above_eps;
  }
  const std::size_t n = eta.size();
  const double lower = static_cast<double>(above) / static_cast<double>(n);
  const double upper = static_cast<double>(above_eps) / static_cast<double>(n);
  EscapeSeriesResult r;
  r.lower = EstimateResult{lower, binomial_std_error(lower, n), n, 0.0};
  r.upper_value = upper;
  r.epsilon = epsilon;
  return r;
}

EscapeSeriesResult estimate_escape_series(const ModelSpec& model, double x,
                                          std::size_t n_terms,
                                          std::size_t n_samples,
                                          std::uint64_t seed, unsigned workers,
                                          double epsilon) {
  const auto eta = sample_eta_batch(model, n_terms, n_samples, seed, workers);
  return escape_series_from_batch(eta, x, epsilon);
}

EstimateResult estimate_escape_pathwise(const ModelSpec& model, double x,
                                        double barrier_hi, double barrier_lo,
                                        std::size_t max_jumps,
                                        std::size_t n_paths,
                                        std::uint64_t seed, unsigned workers) {
  if (!(barrier_lo < barrier_hi)) {
    throw std::invalid_argument("estimate_escape_pathwise: invalid barriers");
  }
  if (n_paths < 1) {
    throw std::invalid_argument("estimate_escape_pathwise: n_paths >= 1");
  }
  require_usable_law(model, "estimate_escape_pathwise");

  if (x >= barrier_hi) return EstimateResult{1.0, 0.0, n_paths, 0.0};
  if (x <= barrier_lo) return EstimateResult{0.0, 0.0, n_paths, 0.0};

  std::vector<PathOutcome> outcome(n_paths, PathOutcome::Censored);
  parallel_indices(n_paths, workers, [&](std::size_t p) {
    RngStream rng(seed, p);
    double pos = x;
    for (std::size_t n = 0; n < max_jumps; ++n) {
      const double tau = rng.exponential(model.lambda);
      const double xi = model.jump_law.sample_xi(rng);
      double zeta = -model.v * tau;
      if (model.kappa > 0.0) {
        zeta += model.kappa * std::sqrt(tau) * rng.normal();
      }
      const double pre_jump = pos + zeta;
      if (model.kappa > 0.0) {
        // One-sided bridge tests, lower barrier first. The joint two-sided
        // law is not sampled; the bias vanishes as the barriers widen.
        if (pre_jump <= barrier_lo ||
            bridge_minimum(pos, pre_jump, model.kappa, tau, rng) <=
                barrier_lo) {
          outcome[p] = PathOutcome::Miss;
          return;
        }
        if (pre_jump >= barrier_hi ||
            -bridge_minimum(-pos, -pre_jump, model.kappa, tau, rng) >=
                barrier_hi) {
          outcome[p] = PathOutcome::Hit;
          return;
        }
      } else {
        if (pre_jump <= barrier_lo) {
          outcome[p] = PathOutcome::Miss;
          return;
        }
      }
      pos = std::exp(xi) * pre_jump;
      if (pos <= barrier_lo) {
        outcome[p] = PathOutcome::Miss;
        return;
      }
      if (pos >= barrier_hi) {
        outcome[p] = PathOutcome::Hit;
        return;
      }
    }
  });

  std::size_t escaped = 0, censored = 0;
  for (auto o : outcome) {
    if (o == PathOutcome::Hit) ++escaped;
    if (o == PathOutcome::Censored) ++censored;
  }
  const double value =
      static_cast<double>(escaped) / static_cast<double>(n_paths);
  return EstimateResult{value, binomial_std_error(value, n_paths), n_paths,
                        static_cast<double>(censored) /
                            static_cast<double>(n_paths)};
}

MartingaleCheck check_martingale(const ModelSpec& model, const GridFunction& f,
                                 double x, double t, std::size_t n_paths,
                                 std::uint64_t seed, unsigned workers) {
  if (!(t >= 0.0)) throw std::invalid_argument("check_martingale: t >= 0");
  if (n_paths < 1) throw std::invalid_argument("check_martingale: n_paths >= 1");

  std::vector<double> fx(n_paths);
  parallel_indices(n_paths, workers, [&](std::size_t p) {
    RngStream rng(seed, p);
    double pos = x;
    double clock = 0.0;
    for (;;) {
      const double tau = rng.exponential(model.lambda);
      if (clock + tau > t) {
        const double dt = t - clock;
        double drift = -model.v * dt;
        if (model.kappa > 0.0) {
          drift += model.kappa * std::sqrt(dt) * rng.normal();
        }
        pos += drift;
        break;
      }
      clock += tau;
      const double xi = model.jump_law.sample_xi(rng);
      double zeta = -model.v * tau;
      if (model.kappa > 0.0) {
        zeta += model.kappa * std::sqrt(tau) * rng.normal();
      }
      pos = std::exp(xi) * (pos + zeta);
    }
    fx[p] = f(pos);
  });

  const double n = static_cast<double>(n_paths);
  const double mean = pairwise_sum(fx) / n;
  std::vector<double> sq(n_paths);
  for (std::size_t i = 0; i < n_paths; ++i) {
    const double d = fx[i] - mean;
    sq[i] = d * d;
  }
  const double var = n_paths > 1 ? pairwise_sum(sq) / (n - 1.0) : 0.0;

  MartingaleCheck out;
  out.mean_f = mean;
  out.residual = std::abs(mean - f(x));
  out.std_error = std::sqrt(var / n);
  out.n_paths = n_paths;
  return out;
}

GridFunction tabulate_escape_profile(std::span<const double> eta, double x_lo,
                                     double x_hi, std::size_t n_points) {
  // Sort a copy once; each profile value is then a binary search for the
  // count of samples strictly above -x.
  std::vector<double> sorted(eta.begin(), eta.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<double> vals(n_points);
  const double h = (x_hi - x_lo) / static_cast<double>(n_points - 1);
  for (std::size_t i = 0; i < n_points; ++i) {
    const double x = x_lo + h * static_cast<double>(i);
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), -x);
    vals[i] = static_cast<double>(sorted.end() - it) / n;
  }
  return GridFunction(x_lo, x_hi, std::move(vals),
                      GridClosure::constant(0.0, 1.0));
}

}  // namespace panto
