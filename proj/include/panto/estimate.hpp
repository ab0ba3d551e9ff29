#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "panto/grid_function.hpp"
#include "panto/model.hpp"

namespace panto {

// Monte Carlo point estimate. For probability estimates the standard error
// is sqrt(p(1-p)/n). censored_fraction counts paths whose defining event was
// still undecided at the truncation horizon; such paths never enter `value`,
// so probability-of-event estimates are lower bounds.
struct EstimateResult {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  double censored_fraction = 0.0;
};

// P{the process started at x ever reaches (-infty, 0]}, by path simulation
// up to max_jumps jumps. With kappa = 0 a path is ruined as soon as
// v * sum_{i<=n} tau_i exp(-S_{i-1}) >= x; with kappa > 0 the minimum of the
// Brownian bridge between consecutive jump endpoints is sampled exactly and
// ruin is declared on any sub-zero excursion. x <= 0 returns value 1 with
// zero variance. Degenerate jump laws are rejected.
EstimateResult estimate_ruin(const ModelSpec& model, double x,
                             std::size_t max_jumps, std::size_t n_paths,
                             std::uint64_t seed, unsigned workers = 1);

// Draws n_samples independent realizations of eta_N (N = n_terms). The
// samples do not depend on any evaluation point, so one batch serves a whole
// x-profile under common random numbers. Requires K > 0 and a
// non-degenerate law.
std::vector<double> sample_eta_batch(const ModelSpec& model,
                                     std::size_t n_terms,
                                     std::size_t n_samples, std::uint64_t seed,
                                     unsigned workers = 1);

// Series estimator of the escape probability. The proof identifies
// P{eta > -x} <= f_inf(x) <= P{eta > -x - eps} for every eps > 0; both
// sandwich values are reported rather than asserting equality (the law of
// eta could in principle carry an atom at -x).
struct EscapeSeriesResult {
  EstimateResult lower;      // P{eta > -x}
  double upper_value = 0.0;  // P{eta > -x - eps}
  double epsilon = 1e-3;
};

EscapeSeriesResult escape_series_from_batch(std::span<const double> eta,
                                            double x, double epsilon = 1e-3);

EscapeSeriesResult estimate_escape_series(const ModelSpec& model, double x,
                                          std::size_t n_terms,
                                          std::size_t n_samples,
                                          std::uint64_t seed,
                                          unsigned workers = 1,
                                          double epsilon = 1e-3);

// Barrier-hitting classifier for the escape event: a path counts as escaped
// on first touching barrier_hi and as trapped on first touching barrier_lo,
// undecided paths are censored. The value approximates f_inf(x) only as the
// barriers widen; the series estimator is the primary method.
EstimateResult estimate_escape_pathwise(const ModelSpec& model, double x,
                                        double barrier_hi, double barrier_lo,
                                        std::size_t max_jumps,
                                        std::size_t n_paths,
                                        std::uint64_t seed,
                                        unsigned workers = 1);

// Fixed-time mean test of the martingale identity E_x[f(X_t)] = f(x).
struct MartingaleCheck {
  double residual = 0.0;   // |mean f(X_t) - f(x)|
  double std_error = 0.0;  // sample std / sqrt(n_paths)
  double mean_f = 0.0;
  std::size_t n_paths = 0;
};

MartingaleCheck check_martingale(const ModelSpec& model, const GridFunction& f,
                                 double x, double t, std::size_t n_paths,
                                 std::uint64_t seed, unsigned workers = 1);

// Tabulates x -> fraction{eta > -x} on a uniform grid as a GridFunction with
// constant closure (0 on the left, 1 on the right).
GridFunction tabulate_escape_profile(std::span<const double> eta, double x_lo,
                                     double x_hi, std::size_t n_points);

}  // namespace panto
