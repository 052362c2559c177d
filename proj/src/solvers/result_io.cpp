// SPDX-License-Identifier: Apache-2.0
#include "ddfr/solvers.hpp"

namespace ddfr {

nlohmann::json result_to_json(const SolverResult& result) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (Index q = 0; q < result.coefficients.size(); ++q) {
    coeffs.push_back({result.coefficients(q).real(), result.coefficients(q).imag()});
  }
  return {{"solver", result.solver},
          {"residual_norm", result.residual_norm},
          {"support", result.support},
          {"iterations", result.iterations},
          {"converged", result.converged},
          {"rank_deficient", result.rank_deficient},
          {"lambda", result.lambda},
          {"coefficients", coeffs}};
}

SolverResult result_from_json(const nlohmann::json& doc) {
  try {
    SolverResult r;
    r.solver = doc.value("solver", std::string{});
    r.residual_norm = doc.at("residual_norm").get<double>();
    r.support = doc.at("support").get<std::vector<Index>>();
    r.iterations = doc.value("iterations", 0);
    r.converged = doc.value("converged", false);
    r.rank_deficient = doc.value("rank_deficient", false);
    r.lambda = doc.value("lambda", 0.0);
    const auto& c = doc.at("coefficients");
    r.coefficients.resize(static_cast<Index>(c.size()));
    for (std::size_t q = 0; q < c.size(); ++q) {
      r.coefficients(static_cast<Index>(q)) = Complex{c[q].at(0).get<double>(), c[q].at(1).get<double>()};
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("solver result: ") + e.what());
  }
}

}  // namespace ddfr
