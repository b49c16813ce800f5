#pragma once

#include <string>

#include <json.hpp>

#include "geri/core.hpp"
#include "geri/generators.hpp"
#include "geri/solver.hpp"

namespace geri {

/// {"kind":"shannon"} or
/// {"kind":"nested_logit","nests":[[0,1,2],[3,4]],"zeta":[0.5,0.5]}
/// (zero-based option indices; nests must partition 0..N-1).
nlohmann::json generator_to_json(const GeneratorSpec& gen);
GeneratorSpec generator_from_json(const nlohmann::json& j,
                                  const std::string& field_path = "generator");

/// Model file: generator, states matrix (numbers or "-inf"), prior, and
/// optional solver overrides (tolerance/max_iterations/damping/n_restarts/
/// prune_threshold/seed). Parse errors name the offending field.
struct ModelFile {
  GeneratorSpec generator = GeneratorSpec::shannon();
  FiniteChoiceProblem problem;
  SolverConfig solver;
};
ModelFile model_from_json(const nlohmann::json& j);
ModelFile load_model_file(const std::string& path);

nlohmann::json solution_to_json(const GeriSolution& solution, bool converged);

/// Re-reads a solution written by solution_to_json and re-validates the
/// simplex and support invariants.
GeriSolution solution_from_json(const nlohmann::json& j);

}  // namespace geri
