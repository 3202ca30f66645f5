#include "blockbench/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "blockbench/decomposition.hpp"
#include "blockbench/enumeration.hpp"
#include "blockbench/errors.hpp"
#include "blockbench/experiment.hpp"
#include "blockbench/io.hpp"
#include "blockbench/objectives.hpp"
#include "blockbench/optimizer.hpp"
#include "blockbench/simulator.hpp"
#include "blockbench/variance.hpp"

namespace blockbench {

namespace {

int default_threads() {
  if (const char* env = std::getenv("BLOCKBENCH_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 0) return static_cast<int>(v);
  }
  return 0;
}

const std::map<std::string, Method> kMethods{
    {"complete", Method::Complete}, {"fixed", Method::FixedSized}, {"threshold", Method::Threshold}};
const std::map<std::string, ObjectiveKind> kObjectives{
    {"weighted-average", ObjectiveKind::WeightedAverageDistance},
    {"sum", ObjectiveKind::SumOfDistances},
    {"max", ObjectiveKind::MaxWithinBlockDistance}};
const std::map<std::string, Metric> kMetrics{{"euclidean", Metric::Euclidean},
                                             {"sqeuclidean", Metric::SquaredEuclidean}};
const std::map<std::string, SolverChoice> kSolvers{{"auto", SolverChoice::Auto},
                                                   {"exhaustive", SolverChoice::Exhaustive},
                                                   {"dp", SolverChoice::DynamicProgram}};

template <class T>
std::string name_of(const std::map<std::string, T>& m, T v) {
  for (const auto& [k, x] : m)
    if (x == v) return k;
  return "?";
}

std::string join_units(const Block& b, const std::vector<std::string>& ids) {
  std::string s;
  for (UnitIndex i : b) {
    if (!s.empty()) s += ' ';
    s += ids[i];
  }
  return s;
}

struct BlockArgs {
  std::string input;
  std::string method = "threshold";
  std::size_t size = 2;
  std::string objective = "weighted-average";
  std::string metric = "euclidean";
  std::string solver = "auto";
  std::string format = "table";
  std::uint64_t ceiling = kDefaultBlockingCeiling;
  int threads = 0;
};

int cmd_block(const BlockArgs& a, std::ostream& out) {
  const Sample sample = read_sample_csv(a.input);
  DesignSpec design{kMethods.at(a.method), a.size,
                    ObjectiveSpec{kObjectives.at(a.objective), kMetrics.at(a.metric)},
                    TieBreak::SmallestMeanBlockSize};
  const auto r = optimal_blocking(sample, design, kSolvers.at(a.solver),
                                  SearchOptions{a.ceiling, a.threads});
  const auto ids = unit_ids(sample);
  const std::string solver = r.solver == Solver::Exhaustive ? "exhaustive" : "dp";

  if (a.format == "json") {
    BlockingMeta meta{a.method, std::nullopt, a.objective, a.metric, r.value, solver};
    if (design.method != Method::Complete) meta.size = a.size;
    out << blocking_to_json(r.blocking, ids, meta).dump(2) << '\n';
    return 0;
  }
  out << "method     " << a.method;
  if (design.method != Method::Complete) out << " (S=" << a.size << ")";
  out << "\nobjective  " << a.objective << " " << a.metric << " = " << fmt(r.value, 6) << '\n'
      << "solver     " << solver << " (" << r.examined
      << (r.solver == Solver::Exhaustive ? " blockings" : " segments") << " scored)\n"
      << "tie-break  smallest mean block size, then lexicographic block list\n\n";
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < r.blocking.size(); ++k)
    rows.push_back({std::to_string(k + 1), std::to_string(r.blocking[k].size()),
                    join_units(r.blocking[k], ids)});
  out << format_table({"block", "size", "units"}, rows);
  return 0;
}

int cmd_assign(const std::string& input, std::uint64_t seed, std::ostream& out) {
  nlohmann::json j;
  try {
    if (input == "-") {
      j = nlohmann::json::parse(std::cin);
    } else {
      std::ifstream in(input);
      if (!in) throw ParseError("cannot open " + input);
      j = nlohmann::json::parse(in);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  const auto rec = blocking_from_json(j);
  const Assignment a = balanced_block_randomize(rec.blocking, seed);
  out << assignment_to_json(rec.blocking, a, rec.ids, seed).dump(2) << '\n';
  return 0;
}

struct VarianceArgs {
  std::string preset;
  std::size_t n = 6;
  double sigma2 = 1.0;
  double delta2 = 2.0;
  bool raw = false;
};

int preset_six_unit(const VarianceArgs& a, std::ostream& out) {
  const std::vector<double> x{1, 1, 1, 0, 0, 0};
  const Sample sample = Sample::from_scalars(x);
  const auto params = BinaryOutcomeParams::with_contrast(a.sigma2, a.delta2);
  const auto fixed = covariate_pattern_classes(sample, SizeRule::exactly(2));
  std::vector<std::vector<std::string>> rows;
  for (const auto& c : covariate_pattern_classes(sample, SizeRule::at_least(2))) {
    bool both = false;
    for (const auto& f : fixed) both = both || f.pattern == c.pattern;
    rows.push_back({pattern_string(c.pattern), both ? "both" : "threshold",
                    std::to_string(c.multiplicity),
                    fmt(evaluate(c.representative, sample, {}), 3),
                    fmt(conditional_variance_binary(c.representative, x, params), 3)});
  }
  out << "sample x = (1,1,1,0,0,0), sigma2 = " << a.sigma2 << ", delta2 = " << a.delta2 << "\n\n"
      << format_table({"blocking", "valid for", "count", "distance", "variance"}, rows);
  return 0;
}

int preset_pairing(const VarianceArgs& a, std::ostream& out) {
  const Sample sample = Sample::from_rows({{1, 36}, {1, 38}, {1, 40}, {0, 36}, {0, 38}, {0, 40}});
  const auto x = sample.column(0);
  const auto params = BinaryOutcomeParams::with_contrast(a.sigma2, a.delta2);
  std::vector<std::vector<std::string>> rows;
  auto it = enumerate_blockings(6, SizeRule::exactly(2));
  while (auto b = it.next()) {
    std::string s;
    for (const auto& blk : *b) {
      s += s.empty() ? "{" : ",{";
      for (UnitIndex i : blk) s += (i == blk.front() ? "" : ",") + std::to_string(i + 1);
      s += "}";
    }
    rows.push_back({s, fmt(evaluate(*b, sample, {}), 3)});
  }
  out << "pairings of the two-covariate sample (x1 binary, x2 integer)\n\n"
      << format_table({"blocking", "distance"}, rows) << '\n';
  const auto best = optimal_blocking_exhaustive(sample, DesignSpec{Method::FixedSized, 2, {}, {}});
  const double vf = conditional_variance_binary(best.blocking, x, params);
  const double vc = conditional_variance_binary(Blocking::single_block(6), x, params);
  out << "surrogate optimum     " << blocking_to_json(best.blocking, unit_ids(sample))["blocks"].dump()
      << " at " << fmt(best.value, 3) << '\n'
      << "Var fixed optimum     " << fmt(vf, 6) << '\n'
      << "Var complete          " << fmt(vc, 6) << '\n'
      << "difference            " << fmt(vf - vc, 6) << "  (2*delta2/15 = " << fmt(2 * a.delta2 / 15, 6)
      << ")\n";
  return 0;
}

int preset_closed_forms(const VarianceArgs& a, std::ostream& out) {
  const auto params = BinaryOutcomeParams::with_contrast(a.sigma2, a.delta2);
  const double scale = a.raw ? 1.0 / static_cast<double>(a.n) : 1.0;
  std::vector<std::vector<std::string>> rows;
  for (auto d : {BinaryDesign::Complete, BinaryDesign::Paired, BinaryDesign::ThresholdPairs}) {
    const double cf = unconditional_variance_closed_form(d, a.n, params);
    const double en = enumerate_unconditional(d, a.n, params);
    rows.push_back({design_name(d), fmt(cf * scale, 6), fmt(en * scale, 6),
                    fmt(std::abs(cf - en) * scale, 12)});
  }
  out << (a.raw ? "Var" : "n*Var") << " with a fair-coin covariate, n = " << a.n
      << ", sigma2 = " << a.sigma2 << ", delta2 = " << a.delta2 << "\n\n"
      << format_table({"design", "closed form", "enumerated", "|diff|"}, rows);
  return 0;
}

int preset_decomposition(const VarianceArgs& a, std::ostream& out) {
  const auto params = BinaryOutcomeParams::with_contrast(a.sigma2, a.delta2);
  const auto dist = CovariateDistribution::binary_fair_coin(a.n);
  const auto model = binary_outcome_model(params);
  const double scale = a.raw ? 1.0 / static_cast<double>(a.n) : 1.0;
  std::vector<std::vector<std::string>> rows;
  for (auto d : {BinaryDesign::Complete, BinaryDesign::Paired, BinaryDesign::ThresholdPairs}) {
    const auto r = decompose(binary_mapping(d), dist, model);
    const double oracle = enumerate_unconditional(d, a.n, params);
    rows.push_back({design_name(d), fmt(r.w1, 6), fmt(r.w2, 6), fmt(r.w3, 6),
                    fmt(r.total * scale, 6), fmt(oracle * scale, 6),
                    fmt(std::abs(r.total - oracle) * scale, 12)});
  }
  out << "4*W1 + 4*W2 + 2*W3 against enumeration (" << (a.raw ? "Var" : "n*Var") << "), n = " << a.n
      << ", sigma2 = " << a.sigma2 << ", delta2 = " << a.delta2 << "\n\n"
      << format_table({"design", "W1", "W2", "W3", "total", "enumerated", "|diff|"}, rows);
  return 0;
}

int cmd_variance(const VarianceArgs& a, std::ostream& out) {
  if (a.sigma2 < 0.0 || a.delta2 < 0.0) throw DomainError("sigma2 and delta2 must be nonnegative");
  if (a.preset == "six-unit") return preset_six_unit(a, out);
  if (a.preset == "pairing") return preset_pairing(a, out);
  if (a.n < 2 || a.n % 2 != 0) throw DomainError("n must be even and at least 2");
  if (a.preset == "closed-forms") return preset_closed_forms(a, out);
  return preset_decomposition(a, out);
}

struct SimulateArgs {
  std::string model = "informative";
  std::size_t n = 12;
  std::size_t samples = 10'000;
  std::size_t reps = 10;
  std::uint64_t seed = 1;
  std::string format = "table";
  int threads = 0;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  if (a.n % 2 != 0) throw DomainError("simulate needs an even n, got " + std::to_string(a.n));
  SimulationConfig c;
  c.n = a.n;
  c.model = *parse_model(a.model);
  c.num_samples = a.samples;
  c.reps_per_sample = a.reps;
  c.seed = a.seed;
  c.threads = a.threads;
  const auto r = run_simulation(c);
  if (a.format == "json") {
    out << simulation_to_json(r).dump(2) << '\n';
    return 0;
  }
  auto cell = [](const MeanEstimate& e) {
    return fmt(e.mean, 4) + " (" + (std::isnan(e.se) ? std::string("se n/a") : fmt(e.se, 4)) + ")";
  };
  out << "model " << a.model << ", n = " << a.n << ", " << a.samples << " samples x " << a.reps
      << " reps, seed " << a.seed << ", PATE = " << fmt(r.population_ate, 4) << "\n\n"
      << "mean values (standard error)\n";
  std::vector<std::vector<std::string>> rows;
  for (const auto& d : r.designs)
    rows.push_back({method_name(d.method), cell(d.objective), cell(d.pate), cell(d.cate), cell(d.sate)});
  out << format_table({"method", "objective", "PATE", "CATE", "SATE"}, rows) << '\n';
  rows.clear();
  for (const auto& q : r.ratios)
    rows.push_back({method_name(q.method), fmt(q.objective, 3), fmt(q.pate, 3), fmt(q.cate, 3),
                    fmt(q.sate, 3)});
  out << "relative to threshold blocking\n"
      << format_table({"method", "objective", "PATE", "CATE", "SATE"}, rows);
  return 0;
}

template <class T>
CLI::IsMember one_of(const std::map<std::string, T>& m) {
  std::vector<std::string> keys;
  for (const auto& [k, v] : m) keys.push_back(k);
  return CLI::IsMember(keys);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal fixed-sized and threshold blocking for randomized experiments", "blockbench"};
  app.require_subcommand(1);
  const int env_threads = default_threads();

  BlockArgs ba;
  ba.threads = env_threads;
  auto* block = app.add_subcommand("block", "find an optimal blocking of a CSV sample");
  block->add_option("input", ba.input, "CSV file with header id,x1[,x2,...]")->required();
  block->add_option("--method", ba.method)->check(one_of(kMethods))->capture_default_str();
  block->add_option("--size", ba.size, "block size S")->check(CLI::PositiveNumber)->capture_default_str();
  block->add_option("--objective", ba.objective)->check(one_of(kObjectives))->capture_default_str();
  block->add_option("--metric", ba.metric)->check(one_of(kMetrics))->capture_default_str();
  block->add_option("--solver", ba.solver)->check(one_of(kSolvers))->capture_default_str();
  block->add_option("--format", ba.format)->check(CLI::IsMember({"table", "json"}))->capture_default_str();
  block->add_option("--max-blockings", ba.ceiling, "refuse exhaustive search above this many blockings")
      ->capture_default_str();
  block->add_option("--threads", ba.threads, "worker threads, 0 = all cores")->capture_default_str();

  std::string assign_input;
  std::uint64_t assign_seed = 1;
  auto* assign = app.add_subcommand("assign", "balanced block randomization of a saved blocking");
  assign->add_option("blocking", assign_input, "blocking JSON written by `block --format json`, or -")
      ->required();
  assign->add_option("--seed", assign_seed)->capture_default_str();

  VarianceArgs va;
  auto* variance = app.add_subcommand("variance", "analytic variance reports");
  variance->add_option("--preset", va.preset)
      ->required()
      ->check(CLI::IsMember({"six-unit", "pairing", "closed-forms", "decomposition"}));
  variance->add_option("--n", va.n, "even sample size")->capture_default_str();
  variance->add_option("--sigma2", va.sigma2)->capture_default_str();
  variance->add_option("--delta2", va.delta2, "squared mean contrast (mu1 - mu0)^2")->capture_default_str();
  variance->add_flag("--raw", va.raw, "report Var instead of n*Var");

  SimulateArgs sa;
  sa.threads = env_threads;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo comparison of C, F and T designs");
  simulate->add_option("--model", sa.model)->check(CLI::IsMember({"informative", "noise"}))->capture_default_str();
  simulate->add_option("--n", sa.n)->capture_default_str();
  simulate->add_option("--samples", sa.samples)->capture_default_str();
  simulate->add_option("--reps", sa.reps)->capture_default_str();
  simulate->add_option("--seed", sa.seed)->capture_default_str();
  simulate->add_option("--format", sa.format)->check(CLI::IsMember({"table", "json"}))->capture_default_str();
  simulate->add_option("--threads", sa.threads, "worker threads, 0 = all cores")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*block) return cmd_block(ba, out);
    if (*assign) return cmd_assign(assign_input, assign_seed, out);
    if (*variance) return cmd_variance(va, out);
    if (*simulate) return cmd_simulate(sa, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const ResourceLimitExceeded& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace blockbench
