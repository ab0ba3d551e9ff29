#pragma once

#include <string>

#include "panto/grid_function.hpp"
#include "panto/jump_law.hpp"

namespace panto {

// Parameterization of the jump diffusion: drift -v, diffusion coefficient
// kappa, Poisson jump intensity lambda, and the multiplier law. The
// equivalent equation coefficients are a1 = v/lambda and a2 = kappa^2/(2
// lambda); lambda is a free time normalization. Immutable after construction.
struct ModelSpec {
  double kappa;
  double v;
  double lambda;
  JumpLaw jump_law;

  double a1() const { return v / lambda; }
  double a2() const { return kappa * kappa / (2.0 * lambda); }
  double K() const { return jump_law.mean_log(); }
};

// Validates kappa >= 0, v >= 0, lambda > 0, kappa^2 + v^2 > 0.
ModelSpec make_model(double kappa, double v, double lambda, JumpLaw law);

// Builds the model from the equation coefficients: v = a1 * lambda,
// kappa = sqrt(2 * a2 * lambda). Rejects a1 = a2 = 0.
ModelSpec model_from_coefficients(double a1, double a2, const JumpLaw& law,
                                  double lambda = 1.0);

double compute_K(const JumpLaw& law);

// E[f(alpha x)] for a tabulated f; the swept range is covered by f's closure.
double expect_f_alpha_x(const JumpLaw& law, const GridFunction& f, double x);

// Model config I/O. JSON schema:
//   {"kappa": float, "v": float, "lambda": float,
//    "jump_law": {"type": "discrete", "atoms": [[alpha, p], ...]}
//              | {"type": "lognormal", "m": float, "s": float}
//              | {"type": "uniformlog", "lo": float, "hi": float}}
ModelSpec load_model_json(const std::string& text);
ModelSpec load_model_file(const std::string& path);

}  // namespace panto
