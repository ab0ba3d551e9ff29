#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "panto/model.hpp"
#include "panto/rng.hpp"

namespace panto {

// One realization of the jump skeleton of the process: waiting times tau_n,
// jump exponents xi_n, diffusion increments zeta_n over each inter-jump
// interval, the walk S_n = xi_1 + ... + xi_n, and post-jump positions
// X_n = X at the n-th jump time. All arrays have equal length n_jumps;
// index k holds the quantities of jump number k+1.
struct PathSkeleton {
  double x0 = 0.0;
  std::vector<double> tau;
  std::vector<double> xi;
  std::vector<double> zeta;
  std::vector<double> S;
  std::vector<double> X;

  std::size_t n_jumps() const { return tau.size(); }

  // S_n with S_0 = 0; argument is the jump count n.
  double walk_at(std::size_t n) const { return n == 0 ? 0.0 : S[n - 1]; }

  // Post-jump position after n jumps; n = 0 gives the start point.
  double position_at(std::size_t n) const { return n == 0 ? x0 : X[n - 1]; }

  // Jump times sigma_n as the running sum of tau.
  std::vector<double> jump_times() const;

  // exp(S_n) * (x0 + sum_{i<=n} zeta_i exp(-S_{i-1})); equals X_n up to
  // floating-point rearrangement and serves as the algebraic cross-check of
  // the iterative recursion.
  double position_closed_form(std::size_t n) const;
};

// Draws a skeleton of n_jumps jumps. Per jump the draw order is fixed:
// tau (exponential), xi (jump law), then -- only when kappa > 0 -- the
// Gaussian for zeta; zeta_n ~ Normal(-v tau_n, kappa^2 tau_n). Positions
// follow the recursion X_n = exp(xi_n) (X_{n-1} + zeta_n).
PathSkeleton sample_skeleton(const ModelSpec& model, double x0,
                             std::size_t n_jumps, RngStream& rng);

// X_t for 0 <= t <= last jump time. Between jumps the diffusion is pinned to
// the already-sampled increment: the position is drawn from the Brownian
// bridge conditioned on both interval endpoints. t equal to a jump time
// returns the stored post-jump position; t beyond the horizon throws.
double evaluate_between_jumps(const PathSkeleton& skel, const ModelSpec& model,
                              double t, RngStream& rng);

// Smallest n >= 1 with S_n <= -r (S given as S_1..S_N), or nullopt if the
// level is not reached within the realization.
std::optional<std::size_t> first_passage_index(std::span<const double> S,
                                               double r);

// Partial sums eta_N = sum_{n<=N} zeta_n exp(-S_{n-1}) of the random series
// behind the escape probability; converges a.s. when K > 0.
std::vector<double> eta_partial_sums(const ModelSpec& model,
                                     std::size_t n_terms, RngStream& rng);

// Convergence diagnostic |eta_N - eta_{N/2}| for a partial-sum sequence.
double cauchy_increment(std::span<const double> eta);

}  // namespace panto
