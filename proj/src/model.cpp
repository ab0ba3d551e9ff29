#include "panto/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace panto {

ModelSpec make_model(double kappa, double v, double lambda, JumpLaw law) {
  if (!(kappa >= 0.0)) throw std::invalid_argument("model: kappa must be >= 0");
  if (!(v >= 0.0)) throw std::invalid_argument("model: v must be >= 0");
  if (!(lambda > 0.0)) throw std::invalid_argument("model: lambda must be > 0");
  if (kappa * kappa + v * v <= 0.0) {
    throw std::invalid_argument("model: kappa and v cannot both vanish");
  }
  return ModelSpec{kappa, v, lambda, std::move(law)};
}

ModelSpec model_from_coefficients(double a1, double a2, const JumpLaw& law,
                                  double lambda) {
  if (!(a1 >= 0.0) || !(a2 >= 0.0)) {
    throw std::invalid_argument("model: a1, a2 must be >= 0");
  }
  if (a1 * a1 + a2 * a2 <= 0.0) {
    throw std::invalid_argument("model: a1 and a2 cannot both vanish");
  }
  const double v = a1 * lambda;
  const double kappa = std::sqrt(2.0 * a2 * lambda);
  return make_model(kappa, v, lambda, law);
}

double compute_K(const JumpLaw& law) { return law.mean_log(); }

double expect_f_alpha_x(const JumpLaw& law, const GridFunction& f, double x) {
  return law.expect_alpha([&f](double u) { return f(u); }, x);
}

namespace {

JumpLaw law_from_json(const nlohmann::json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "discrete") {
    std::vector<std::pair<double, double>> atoms;
    for (const auto& a : j.at("atoms")) {
      if (!a.is_array() || a.size() != 2) {
        throw std::invalid_argument("model config: atom must be [alpha, p]");
      }
      atoms.emplace_back(a[0].get<double>(), a[1].get<double>());
    }
    return JumpLaw::discrete(atoms);
  }
  if (type == "lognormal") {
    return JumpLaw::log_normal(j.at("m").get<double>(), j.at("s").get<double>());
  }
  if (type == "uniformlog") {
    return JumpLaw::uniform_log(j.at("lo").get<double>(),
                                j.at("hi").get<double>());
  }
  throw std::invalid_argument("model config: unknown jump_law type '" + type +
                              "'");
}

}  // namespace

ModelSpec load_model_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("model config: parse error: ") +
                                e.what());
  }
  try {
    return make_model(j.at("kappa").get<double>(), j.at("v").get<double>(),
                      j.at("lambda").get<double>(),
                      law_from_json(j.at("jump_law")));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("model config: bad field: ") +
                                e.what());
  }
}

ModelSpec load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("model config: cannot open '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_model_json(ss.str());
}

}  // namespace panto
