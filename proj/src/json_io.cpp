#include "geri/json_io.hpp"

#include <cmath>
#include <fstream>

namespace geri {

using nlohmann::json;

namespace {

[[noreturn]] void bad_field(const std::string& path, const std::string& what) {
  fail(ErrorKind::InvalidProblem, path + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key))
    bad_field(path, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) bad_field(path, "expected a number");
  return j.get<double>();
}

// A payoff entry: a JSON number or the string "-inf".
double payoff_at(const json& j, const std::string& path) {
  if (j.is_string()) {
    if (j.get<std::string>() == "-inf") return kNegInf;
    bad_field(path, "expected a number or \"-inf\"");
  }
  return number_at(j, path);
}

}  // namespace

json generator_to_json(const GeneratorSpec& gen) {
  if (gen.is_shannon()) return json{{"kind", "shannon"}};
  const NestStructure& ns = gen.nests();
  json nests = json::array();
  for (const auto& g : ns.members) nests.push_back(g);
  return json{{"kind", "nested_logit"}, {"nests", nests}, {"zeta", ns.zeta}};
}

GeneratorSpec generator_from_json(const json& j, const std::string& path) {
  const json& kind = require(j, "kind", path);
  if (!kind.is_string()) bad_field(path + ".kind", "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "shannon") return GeneratorSpec::shannon();
  if (k != "nested_logit")
    bad_field(path + ".kind", "unknown generator kind \"" + k + "\"");

  const json& nests_j = require(j, "nests", path);
  const json& zeta_j = require(j, "zeta", path);
  if (!nests_j.is_array() || nests_j.empty())
    bad_field(path + ".nests", "expected a non-empty array of option lists");
  std::vector<std::vector<int>> nests;
  for (std::size_t g = 0; g < nests_j.size(); ++g) {
    const json& grp = nests_j[g];
    const std::string gpath = path + ".nests[" + std::to_string(g) + "]";
    if (!grp.is_array() || grp.empty())
      bad_field(gpath, "expected a non-empty array of option indices");
    std::vector<int> members;
    for (std::size_t i = 0; i < grp.size(); ++i) {
      if (!grp[i].is_number_integer())
        bad_field(gpath + "[" + std::to_string(i) + "]",
                  "expected an integer option index");
      members.push_back(grp[i].get<int>());
    }
    nests.push_back(std::move(members));
  }
  if (!zeta_j.is_array())
    bad_field(path + ".zeta", "expected an array of reals");
  std::vector<double> zeta;
  for (std::size_t g = 0; g < zeta_j.size(); ++g)
    zeta.push_back(number_at(zeta_j[g], path + ".zeta[" + std::to_string(g) + "]"));

  try {
    return GeneratorSpec::nested_logit(NestStructure::from_partition(nests, zeta));
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

ModelFile model_from_json(const json& j) {
  ModelFile out;
  out.generator = generator_from_json(require(j, "generator", "model"));

  const json& states_j = require(j, "states", "model");
  if (!states_j.is_array() || states_j.empty())
    bad_field("states", "expected a non-empty matrix of payoffs");
  std::vector<ValuationVector> states;
  for (std::size_t m = 0; m < states_j.size(); ++m) {
    const std::string row_path = "states[" + std::to_string(m) + "]";
    const json& row = states_j[m];
    if (!row.is_array() || row.empty())
      bad_field(row_path, "expected a non-empty payoff row");
    std::vector<double> v;
    for (std::size_t i = 0; i < row.size(); ++i)
      v.push_back(payoff_at(row[i], row_path + "[" + std::to_string(i) + "]"));
    try {
      states.push_back(ValuationVector::validated(std::move(v)));
    } catch (const Error& e) {
      throw Error(e.kind(), row_path + ": " + e.what());
    }
  }

  const json& prior_j = require(j, "prior", "model");
  if (!prior_j.is_array())
    bad_field("prior", "expected an array of weights");
  std::vector<double> prior;
  for (std::size_t m = 0; m < prior_j.size(); ++m)
    prior.push_back(number_at(prior_j[m], "prior[" + std::to_string(m) + "]"));

  try {
    out.problem = FiniteChoiceProblem::validated(std::move(states), std::move(prior));
    out.generator.check_dimension(out.problem.n_options);
  } catch (const Error& e) {
    throw Error(e.kind(), std::string("prior/states: ") + e.what());
  }

  if (j.contains("solver")) {
    const json& s = j.at("solver");
    if (!s.is_object()) bad_field("solver", "expected an object");
    if (s.contains("tolerance"))
      out.solver.tolerance = number_at(s.at("tolerance"), "solver.tolerance");
    if (s.contains("max_iterations")) {
      if (!s.at("max_iterations").is_number_integer())
        bad_field("solver.max_iterations", "expected an integer");
      out.solver.max_iterations = s.at("max_iterations").get<long>();
    }
    if (s.contains("damping"))
      out.solver.damping = number_at(s.at("damping"), "solver.damping");
    if (s.contains("prune_threshold"))
      out.solver.prune_threshold =
          number_at(s.at("prune_threshold"), "solver.prune_threshold");
    if (s.contains("n_restarts")) {
      if (!s.at("n_restarts").is_number_integer())
        bad_field("solver.n_restarts", "expected an integer");
      out.solver.n_restarts = s.at("n_restarts").get<int>();
    }
    if (s.contains("seed")) {
      if (!s.at("seed").is_number_integer())
        bad_field("solver.seed", "expected an integer");
      out.solver.seed = s.at("seed").get<std::uint64_t>();
    }
  }
  return out;
}

ModelFile load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidProblem, "cannot open model file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail(ErrorKind::InvalidProblem, std::string("JSON parse error: ") + e.what());
  }
  return model_from_json(j);
}

json solution_to_json(const GeriSolution& solution, bool converged) {
  json conds = json::array();
  for (const auto& c : solution.conditionals) conds.push_back(c.values());
  return json{{"p0", solution.p0.values()},
              {"conditionals", conds},
              {"info_cost", solution.info_cost},
              {"objective", solution.objective},
              {"consideration_set", solution.consideration_set},
              {"iterations", solution.iterations},
              {"residual", solution.residual},
              {"converged", converged}};
}

GeriSolution solution_from_json(const json& j) {
  GeriSolution out;
  const json& p0 = require(j, "p0", "solution");
  out.p0 = validate_simplex(p0.get<std::vector<double>>());
  const json& conds = require(j, "conditionals", "solution");
  for (std::size_t m = 0; m < conds.size(); ++m) {
    auto row = conds[m].get<std::vector<double>>();
    try {
      out.conditionals.push_back(validate_simplex(std::move(row)));
    } catch (const Error& e) {
      throw Error(e.kind(),
                  "conditionals[" + std::to_string(m) + "]: " + e.what());
    }
    if (out.conditionals.back().size() != out.p0.size())
      bad_field("conditionals[" + std::to_string(m) + "]",
                "dimension differs from p0");
  }
  out.info_cost = number_at(require(j, "info_cost", "solution"), "info_cost");
  out.objective = number_at(require(j, "objective", "solution"), "objective");
  out.consideration_set =
      require(j, "consideration_set", "solution").get<std::vector<int>>();
  out.iterations = require(j, "iterations", "solution").get<long>();
  out.residual = number_at(require(j, "residual", "solution"), "residual");

  // Support mask must agree with the recorded consideration set.
  std::vector<int> support = out.p0.support_indices();
  if (support != out.consideration_set)
    bad_field("consideration_set", "does not match the support of p0");
  return out;
}

}  // namespace geri
