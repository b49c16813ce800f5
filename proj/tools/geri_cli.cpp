// Command-line front end: solve attention problems from JSON model files,
// reproduce the uniform-valuation and consideration-set studies, and run the
// generator self-checks. Exit codes: 0 success, 1 input error, 2 numerical
// non-convergence.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "geri/experiments.hpp"
#include "geri/json_io.hpp"
#include "geri/kernels.hpp"
#include "geri/solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNoConvergence = 2;

struct SolverFlags {
  std::optional<double> tolerance;
  std::optional<long> max_iterations;
  std::optional<double> damping;
  std::optional<int> n_restarts;
  std::optional<std::uint64_t> seed;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--tol", tolerance, "solver tolerance (sup-norm residual)");
    cmd.add_option("--max-iter", max_iterations, "iteration cap");
    cmd.add_option("--damping", damping, "update damping in (0,1]");
    cmd.add_option("--restarts", n_restarts, "number of solver restarts");
    cmd.add_option("--seed", seed, "seed (restart perturbations)");
  }
  void apply(geri::SolverConfig& config) const {
    if (tolerance) config.tolerance = *tolerance;
    if (max_iterations) config.max_iterations = *max_iterations;
    if (damping) config.damping = *damping;
    if (n_restarts) config.n_restarts = *n_restarts;
    if (seed) config.seed = *seed;
  }
};

void set_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw geri::Error(geri::ErrorKind::InvalidProblem,
                              "cannot write to " + path);
  out << text;
}

void print_solution(std::ostream& os, const geri::GeriSolution& sol,
                    const std::vector<int>* labels) {
  os << std::fixed << std::setprecision(6);
  os << "p0:";
  for (int i = 0; i < sol.p0.size(); ++i) {
    os << " " << sol.p0[i];
  }
  os << "\nconsideration set:";
  for (int i : sol.consideration_set)
    os << " " << (labels != nullptr ? (*labels)[i] : i);
  os << "\ninfo cost: " << sol.info_cost << "\nobjective: " << sol.objective
     << "\niterations: " << sol.iterations << "  residual: " << std::scientific
     << std::setprecision(3) << sol.residual << "\n"
     << std::defaultfloat;
}

int cmd_solve(const std::string& model_path, const std::string& out_path,
              const SolverFlags& flags) {
  geri::ModelFile model = geri::load_model_file(model_path);
  flags.apply(model.solver);
  try {
    const geri::GeriSolution sol =
        geri::solve_fixed_point(model.generator, model.problem, model.solver);
    const std::string text = geri::solution_to_json(sol, true).dump(2) + "\n";
    if (!out_path.empty()) write_text(out_path, text);
    print_solution(std::cout, sol, nullptr);
    return kExitOk;
  } catch (const geri::NoConvergenceError& e) {
    const std::string text =
        geri::solution_to_json(e.partial(), false).dump(2) + "\n";
    if (!out_path.empty()) write_text(out_path, text);
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  }
}

void print_panel(std::ostream& os, double zeta, const geri::SummaryStats& s) {
  os << std::fixed << std::setprecision(3);
  if (zeta == 1.0) {
    os << "multinomial logit (zeta = 1.0)\n";
  } else {
    os << "nested logit (zeta = " << zeta << " on nests {1,2,3}, {4,5})\n";
  }
  auto row = [&](const char* name, const std::vector<double>& x) {
    os << "  " << std::left << std::setw(8) << name << std::right;
    for (double v : x) os << std::setw(8) << v;
    os << "\n";
  };
  row("avg:", s.avg);
  row("median:", s.median);
  row("std:", s.std_dev);
  os << "  efficiency: " << s.efficiency << "\n";
}

int cmd_table1(std::vector<double> zetas, long n_states, int replications,
               std::uint64_t seed, const std::string& out_path,
               const SolverFlags& flags) {
  if (zetas.empty()) zetas.push_back(1.0);
  for (double z : zetas) {
    if (!(z > 0.0) || z > 1.0) {
      std::cerr << "error: --zeta must be in (0,1], got " << z << "\n";
      return kExitInputError;
    }
  }
  for (std::size_t k = 0; k < zetas.size(); ++k) {
    geri::MonteCarloConfig config;
    config.n_states = n_states;
    config.n_replications = replications;
    config.seed = seed;
    if (zetas[k] != 1.0) {
      config.generator = geri::GeneratorSpec::nested_logit(
          geri::NestStructure::from_partition({{0, 1, 2}, {3, 4}},
                                              {zetas[k], zetas[k]}));
    }
    flags.apply(config.solver);
    const geri::Table1Result result = geri::run_table1(config);
    print_panel(std::cout, zetas[k], result.stats);
    if (!out_path.empty()) {
      std::string path = out_path;
      if (zetas.size() > 1) {
        const std::size_t dot = path.rfind('.');
        std::ostringstream tag;
        tag << "_zeta" << zetas[k];
        path = dot == std::string::npos
                   ? path + tag.str()
                   : path.substr(0, dot) + tag.str() + path.substr(dot);
      }
      write_text(path, geri::to_csv(result.stats, result.n_states, result.seed));
      std::cout << "wrote " << path << "\n";
    }
  }
  return kExitOk;
}

int cmd_appendix(const std::string& generator_name,
                 const std::string& choice_set_arg, const std::string& out_path,
                 const SolverFlags& flags) {
  geri::GeneratorSpec gen = geri::GeneratorSpec::shannon();
  if (generator_name == "nested") {
    gen = geri::appendix_nested_generator();
  } else if (generator_name != "shannon") {
    std::cerr << "error: --generator must be shannon or nested\n";
    return kExitInputError;
  }
  geri::SolverConfig solver;
  flags.apply(solver);

  if (!choice_set_arg.empty()) {
    std::vector<int> options;
    std::stringstream ss(choice_set_arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) options.push_back(std::stoi(tok));
    const geri::AppendixSolution run =
        geri::run_appendix_example(gen, options, solver);
    std::cout << "choice set {" << choice_set_arg << "}, " << generator_name
              << " cost\n";
    print_solution(std::cout, run.solution, &run.options);
    if (!out_path.empty())
      write_text(out_path,
                 geri::solution_to_json(run.solution, true).dump(2) + "\n");
    return kExitOk;
  }

  const geri::AppendixSolution small =
      geri::run_appendix_example(gen, {1, 2, 3}, solver);
  const geri::AppendixSolution full =
      geri::run_appendix_example(gen, {1, 2, 3, 4}, solver);
  std::cout << "choice set {1,2,3}, " << generator_name << " cost\n";
  print_solution(std::cout, small.solution, &small.options);
  std::cout << "\nchoice set {1,2,3,4}, " << generator_name << " cost\n";
  print_solution(std::cout, full.solution, &full.options);

  const geri::RegularityReport report = geri::regularity_check(small, full);
  std::cout << "\nregularity: ";
  if (report.empty()) {
    std::cout << "no option gained probability after enlarging the choice set\n";
  } else {
    std::cout << "options whose p0 increased after adding option 4:\n";
    std::cout << std::fixed << std::setprecision(4);
    for (const auto& e : report.increased) {
      std::cout << "  option " << e.option << ": " << e.before << " -> "
                << e.after << " (+" << e.increase() << ")\n";
    }
  }
  if (!out_path.empty()) {
    nlohmann::json j{
        {"choice_set_123", geri::solution_to_json(small.solution, true)},
        {"choice_set_1234", geri::solution_to_json(full.solution, true)}};
    nlohmann::json reg = nlohmann::json::array();
    for (const auto& e : report.increased) {
      reg.push_back({{"option", e.option},
                     {"before", e.before},
                     {"after", e.after}});
    }
    j["regularity_increases"] = reg;
    write_text(out_path, j.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_verify(const std::string& generator_arg, int trials,
               std::uint64_t seed, int options) {
  geri::GeneratorSpec gen = geri::GeneratorSpec::shannon();
  if (generator_arg != "shannon") {
    std::ifstream in(generator_arg);
    if (!in) {
      std::cerr << "error: cannot open generator file " << generator_arg
                << "\n";
      return kExitInputError;
    }
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::parse_error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitInputError;
    }
    gen = geri::generator_from_json(j);
  }

  const geri::GeneratorDiagnostics report =
      geri::check_generator(gen, trials, seed, options);
  std::cout << report.summary();

  // Exclusion check: solve a problem with a deliberately dominated option
  // and make sure it is dropped from the consideration set.
  const int n = gen.dimension() > 0 ? gen.dimension() : options;
  std::vector<geri::ValuationVector> states;
  for (int m = 0; m < 3; ++m) {
    std::vector<double> v(n);
    double min_other = std::numeric_limits<double>::infinity();
    for (int i = 1; i < n; ++i) {
      v[i] = 1.0 + 0.5 * ((i * 7 + m * 3) % 5);
      min_other = std::min(min_other, v[i]);
    }
    v[0] = min_other - 1.0;
    states.push_back(geri::ValuationVector::validated(std::move(v)));
  }
  const geri::FiniteChoiceProblem problem = geri::FiniteChoiceProblem::validated(
      std::move(states), std::vector<double>(3, 1.0 / 3));
  const geri::GeriSolution sol = geri::solve_fixed_point(gen, problem, {});
  const geri::DominanceReport dom =
      geri::check_dominance_exclusion(sol, problem, gen);
  const bool excluded = sol.p0[0] == 0.0 && dom.empty();
  std::cout << (excluded ? "pass" : "FAIL")
            << "  dominated option excluded from the consideration set\n";

  return report.all_passed() && excluded ? kExitOk : kExitInputError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "geri: discrete choice and generalized-entropy rational inattention"};
  app.require_subcommand(1);
  app.fallthrough();  // lets --threads appear after the subcommand name
  int threads = 0;
  app.add_option("--threads", threads, "cap OpenMP worker count");

  auto* solve = app.add_subcommand("solve", "solve a model file");
  std::string model_path, solve_out;
  solve->add_option("model", model_path, "model JSON path")->required();
  solve->add_option("--out", solve_out, "solution JSON path");
  SolverFlags solve_flags;
  solve_flags.add_to(*solve);

  auto* table1 = app.add_subcommand(
      "table1", "five options, i.i.d. Uniform(0,1) valuations");
  std::vector<double> zetas;
  long n_states = 10000;
  int replications = 10;
  std::uint64_t t1_seed = 0;
  std::string t1_out;
  table1->add_option("--zeta", zetas,
                     "nest parameter; 1.0 = multinomial logit (repeatable)");
  table1->add_option("--n-states", n_states, "uniform draws per replication");
  table1->add_option("--replications", replications, "independent replications");
  table1->add_option("--seed", t1_seed, "master seed");
  table1->add_option("--out", t1_out, "CSV output path");
  SolverFlags t1_flags;
  table1->add_option("--tol", t1_flags.tolerance, "solver tolerance");
  table1->add_option("--max-iter", t1_flags.max_iterations, "iteration cap");

  auto* appendix = app.add_subcommand(
      "appendix", "four-option consideration-set example");
  std::string gen_name = "shannon", choice_set, appendix_out;
  appendix->add_option("--generator", gen_name, "shannon or nested");
  appendix->add_option("--choice-set", choice_set,
                       "comma-separated one-based labels, e.g. 1,2,3");
  appendix->add_option("--out", appendix_out, "solution JSON path");
  SolverFlags appendix_flags;
  appendix_flags.add_to(*appendix);

  auto* verify = app.add_subcommand("verify", "generator self-checks");
  std::string verify_gen = "shannon";
  int trials = 100;
  std::uint64_t verify_seed = 12345;
  int verify_options = 5;
  verify->add_option("--generator", verify_gen,
                     "shannon or a generator JSON file");
  verify->add_option("--trials", trials, "random points per check");
  verify->add_option("--seed", verify_seed, "seed");
  verify->add_option("--options", verify_options,
                     "dimension used for Shannon checks");

  CLI11_PARSE(app, argc, argv);
  set_threads(threads);

  try {
    if (solve->parsed()) return cmd_solve(model_path, solve_out, solve_flags);
    if (table1->parsed())
      return cmd_table1(zetas, n_states, replications, t1_seed, t1_out,
                        t1_flags);
    if (appendix->parsed())
      return cmd_appendix(gen_name, choice_set, appendix_out, appendix_flags);
    if (verify->parsed())
      return cmd_verify(verify_gen, trials, verify_seed, verify_options);
  } catch (const geri::NoConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const geri::Error& e) {
    std::cerr << "error [" << geri::to_string(e.kind()) << "]: " << e.what()
              << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}
