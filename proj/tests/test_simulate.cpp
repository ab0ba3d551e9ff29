#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "panto/simulate.hpp"

using namespace panto;

namespace {

ModelSpec double_or_half_model() {
  return make_model(0.0, 1.0, 1.0, JumpLaw::discrete({{2.0, 0.5}, {0.5, 0.5}}));
}

ModelSpec tilted_model() {
  return make_model(
      0.0, 1.0, 1.0,
      JumpLaw::discrete({{std::exp(1.0), 0.75}, {std::exp(-1.0), 0.25}}));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

TEST_CASE("empty skeleton") {
  RngStream rng(1, 0);
  const auto skel = sample_skeleton(double_or_half_model(), 2.5, 0, rng);
  CHECK(skel.n_jumps() == 0);
  CHECK(skel.x0 == 2.5);
  CHECK(skel.X.empty());
  CHECK(skel.position_at(0) == 2.5);
}

TEST_CASE("kappa = 0 pins zeta to -v tau") {
  RngStream rng(42, 7);
  const auto model = double_or_half_model();
  const auto skel = sample_skeleton(model, 1.0, 50, rng);
  for (std::size_t n = 0; n < 50; ++n) {
    CHECK(skel.zeta[n] == -model.v * skel.tau[n]);
  }
}

TEST_CASE("iterative positions match the closed form") {
  RngStream meta(314, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const double kappa = meta.uniform01() * 2.0;
    const double v = meta.uniform01() * 2.0;
    const double lambda = 0.2 + meta.uniform01() * 3.0;
    const auto model = make_model(
        kappa, kappa + v == 0.0 ? 1.0 : v, lambda,
        JumpLaw::discrete({{2.0, 0.25}, {0.5, 0.25}, {1.5, 0.5}}));
    RngStream rng(1000 + rep, 0);
    const auto skel = sample_skeleton(model, meta.normal() * 3.0, 5, rng);
    double scale = std::abs(skel.x0);
    for (double xv : skel.X) scale = std::max(scale, std::abs(xv));
    for (std::size_t n = 1; n <= 5; ++n) {
      CHECK(std::abs(skel.position_at(n) - skel.position_closed_form(n)) <=
            1e-10 * scale);
    }
  }
}

TEST_CASE("skeleton determinism and stream independence") {
  const auto model = tilted_model();
  RngStream a(77, 5), b(77, 5), c(77, 6);
  const auto sa = sample_skeleton(model, 1.0, 100, a);
  const auto sb = sample_skeleton(model, 1.0, 100, b);
  const auto sc = sample_skeleton(model, 1.0, 100, c);
  bool identical = true, distinct = false;
  for (std::size_t n = 0; n < 100; ++n) {
    identical = identical && sa.tau[n] == sb.tau[n] && sa.X[n] == sb.X[n] &&
                sa.xi[n] == sb.xi[n];
    distinct = distinct || sa.tau[n] != sc.tau[n];
  }
  CHECK(identical);
  CHECK(distinct);
}

TEST_CASE("waiting times are Exp(lambda)") {
  const double lambda = 1.7;
  const auto model = make_model(0.0, 1.0, lambda,
                                JumpLaw::discrete({{2.0, 0.5}, {0.5, 0.5}}));
  const std::size_t n = 100000;
  std::vector<double> taus;
  taus.reserve(n);
  RngStream rng(5150, 0);
  for (std::size_t i = 0; i < n / 100; ++i) {
    const auto skel = sample_skeleton(model, 1.0, 100, rng);
    taus.insert(taus.end(), skel.tau.begin(), skel.tau.end());
  }
  double mean = 0.0;
  for (double t : taus) mean += t;
  mean /= static_cast<double>(n);
  // Exp(lambda): mean 1/lambda, std 1/lambda.
  const double se_mean = 1.0 / lambda / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(mean - 1.0 / lambda) < 3.0 * se_mean);

  for (double t0 : {0.5, 1.0, 2.0}) {
    std::size_t above = 0;
    for (double t : taus) {
      if (t > t0) ++above;
    }
    const double p = static_cast<double>(above) / static_cast<double>(n);
    const double p_exact = std::exp(-lambda * t0);
    const double se =
        std::sqrt(p_exact * (1.0 - p_exact) / static_cast<double>(n));
    CHECK(std::abs(p - p_exact) < 3.0 * se);
  }
}

TEST_CASE("law of large numbers for the walk drift") {
  const auto model = tilted_model();  // K = 0.5, Var xi = 0.75
  RngStream rng(31337, 0);
  const std::size_t n = 10000;
  const auto skel = sample_skeleton(model, 1.0, n, rng);
  const double k_hat = skel.S.back() / static_cast<double>(n);
  const double s = std::sqrt(0.75);
  CHECK(std::abs(k_hat - 0.5) < 4.0 * s / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("evaluate_between_jumps") {
  SUBCASE("exact at jump times") {
    const auto model = tilted_model();
    RngStream rng(9, 2);
    const auto skel = sample_skeleton(model, 1.0, 10, rng);
    const auto sigma = skel.jump_times();
    RngStream probe(10, 0);
    CHECK(evaluate_between_jumps(skel, model, 0.0, probe) == skel.x0);
    for (std::size_t n = 0; n < 10; ++n) {
      CHECK(evaluate_between_jumps(skel, model, sigma[n], probe) == skel.X[n]);
    }
    CHECK_THROWS_AS(
        evaluate_between_jumps(skel, model, sigma.back() + 1.0, probe),
        std::invalid_argument);
  }

  SUBCASE("deterministic drift when kappa = 0") {
    const auto model = double_or_half_model();
    RngStream rng(11, 4);
    const auto skel = sample_skeleton(model, 3.0, 5, rng);
    const auto sigma = skel.jump_times();
    const double t = 0.5 * (sigma[1] + sigma[2]);
    RngStream probe(12, 0);
    CHECK(evaluate_between_jumps(skel, model, t, probe) ==
          doctest::Approx(skel.X[1] - model.v * (t - sigma[1])).epsilon(1e-14));
  }

  SUBCASE("bridge variance matches theory") {
    const auto model = make_model(1.0, 0.0, 1.0,
                                  JumpLaw::discrete({{2.0, 0.5}, {0.5, 0.5}}));
    RngStream rng(21, 0);
    const auto skel = sample_skeleton(model, 0.0, 2, rng);
    const auto sigma = skel.jump_times();
    const double t = sigma[0] + 0.37 * skel.tau[1];
    const double s = t - sigma[0];
    const double expected_var =
        s * (skel.tau[1] - s) / skel.tau[1];  // kappa = 1
    const double expected_mean =
        skel.X[0] + (skel.zeta[1] / 1.0) * (s / skel.tau[1]);

    const std::size_t n = 100000;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      RngStream probe(5000, i);
      const double xv = evaluate_between_jumps(skel, model, t, probe);
      sum += xv;
      sum2 += xv * xv;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = sum2 / static_cast<double>(n) - mean * mean;
    const double se_mean = std::sqrt(expected_var / static_cast<double>(n));
    CHECK(std::abs(mean - expected_mean) < 3.0 * se_mean);
    const double se_var =
        expected_var * std::sqrt(2.0 / static_cast<double>(n - 1));
    CHECK(std::abs(var - expected_var) < 3.0 * se_var);
  }
}

TEST_CASE("first passage index basics") {
  const std::vector<double> down = {-1.0, -2.0, -3.0};
  CHECK(first_passage_index(down, 1.5) == 2);
  CHECK(first_passage_index(down, 0.5) == 1);
  const std::vector<double> up = {1.0, 2.0, 0.5, 3.0};
  CHECK_FALSE(first_passage_index(up, 1.0).has_value());
  CHECK_THROWS_AS(first_passage_index(down, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(first_passage_index(down, -1.0), std::invalid_argument);
}

TEST_CASE("symmetric walk reaches -3 within 1e6 steps almost always") {
  // The +-1 walk is recurrent; the Monte Carlo hit rate over 1e4 seeds
  // must be at least 99%.
  const std::size_t seeds = 10000;
  const std::size_t cap = 1000000;
  std::size_t hits = 0;
  std::vector<double> walk;
  for (std::size_t seed_idx = 0; seed_idx < seeds; ++seed_idx) {
    RngStream rng(888, seed_idx);
    walk.clear();
    double s = 0.0;
    for (std::size_t n = 0; n < cap; ++n) {
      s += rng.uniform01() < 0.5 ? 1.0 : -1.0;
      walk.push_back(s);
      if (s <= -3.0) break;
    }
    const auto idx = first_passage_index(walk, 3.0);
    if (idx.has_value()) {
      ++hits;
      CHECK(walk[*idx - 1] <= -3.0);
    }
  }
  CHECK(static_cast<double>(hits) / static_cast<double>(seeds) >= 0.99);
}

TEST_CASE("eta partial sums") {
  SUBCASE("decreasing when kappa = 0") {
    // Every term is -v tau exp(-S) < 0. Strict decrease holds until the
    // terms drop below one ulp of the accumulated sum (K > 0 drives the
    // weights to zero), after which consecutive sums tie exactly.
    RngStream rng(3, 3);
    const auto eta = eta_partial_sums(tilted_model(), 200, rng);
    for (std::size_t n = 1; n < eta.size(); ++n) {
      CHECK(eta[n] <= eta[n - 1]);
    }
    for (std::size_t n = 1; n < 20; ++n) {
      CHECK(eta[n] < eta[n - 1]);
    }
  }

  SUBCASE("constant-exponent walk has geometric mean") {
    // xi == 1 deterministically, kappa = 0, v = 1:
    // E[eta_N] = -sum_{n=0}^{N-1} exp(-n).
    const double c = 1.0;
    const auto model =
        make_model(0.0, 1.0, 1.0, JumpLaw::discrete({{std::exp(c), 1.0}}));
    const std::size_t n_terms = 30, n_streams = 20000;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n_streams; ++i) {
      RngStream rng(606, i);
      const auto eta = eta_partial_sums(model, n_terms, rng);
      sum += eta.back();
      sum2 += eta.back() * eta.back();
    }
    const double mean = sum / static_cast<double>(n_streams);
    const double var = sum2 / static_cast<double>(n_streams) - mean * mean;
    double expected = 0.0;
    for (std::size_t n = 0; n < n_terms; ++n) {
      expected -= std::exp(-c * static_cast<double>(n));
    }
    const double se = std::sqrt(var / static_cast<double>(n_streams));
    CHECK(std::abs(mean - expected) < 3.0 * se);
  }

  SUBCASE("Cauchy increments collapse when K > 0") {
    const auto model = tilted_model();
    std::vector<double> increments, tails;
    for (std::size_t i = 0; i < 1000; ++i) {
      RngStream rng(2222, i);
      const auto eta = eta_partial_sums(model, 2048, rng);
      increments.push_back(cauchy_increment(eta));
      tails.push_back(std::abs(eta.back()));
    }
    CHECK(median(increments) < 1e-2 * median(tails));
  }
}
