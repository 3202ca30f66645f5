#include "blockbench/simulator.hpp"

#include <random>
#include <stdexcept>

#include "blockbench/errors.hpp"
#include "blockbench/experiment.hpp"
#include "blockbench/objectives.hpp"
#include "blockbench/optimizer.hpp"
#include "blockbench/parallel.hpp"

namespace blockbench {

namespace {

constexpr std::uint64_t kDrawStream = 0;
constexpr std::uint64_t kAssignStream = 1;

struct Coefficients {
  double treated, control;
};

Coefficients coefficients(OutcomeModelId id) {
  return id == OutcomeModelId::Informative ? Coefficients{2.0, 1.7} : Coefficients{0.0, 0.0};
}

// Per design, one value per covariate draw.
struct Columns {
  std::vector<double> objective, pate, cate, sate;
  explicit Columns(std::size_t samples)
      : objective(samples), pate(samples), cate(samples), sate(samples) {}
};

void validate(const SimulationConfig& c) {
  if (c.num_samples == 0) throw DomainError("num_samples must be at least 1");
  if (c.reps_per_sample == 0) throw DomainError("reps_per_sample must be at least 1");
  if (c.n < 2) throw DomainError("simulation needs n >= 2");
  if (c.designs.empty()) throw DomainError("no designs to simulate");
  for (Method m : c.designs) check_feasible(DesignSpec{m, c.size, c.objective, {}}, c.n);
}

void simulate_one(const SimulationConfig& c, double pate_target, std::size_t s,
                  std::vector<Columns>& cols) {
  const StreamRng base = StreamRng(c.seed).split(s);
  const SimulatedDraw draw = draw_sample(c.model, c.n, base.split(kDrawStream));
  const auto [bt, bc] = coefficients(c.model);

  double cate_target = 0.0, sate_target = 0.0;
  for (std::size_t i = 0; i < c.n; ++i) {
    const double x = draw.sample.covariates(i)[0];
    cate_target += (bt - bc) * x * x;
    sate_target += draw.outcomes.y1[i] - draw.outcomes.y0[i];
  }
  cate_target /= static_cast<double>(c.n);
  sate_target /= static_cast<double>(c.n);

  const StreamRng assign = base.split(kAssignStream);
  const double reps = static_cast<double>(c.reps_per_sample);
  for (std::size_t d = 0; d < c.designs.size(); ++d) {
    const Method m = c.designs[d];
    const DesignSpec spec{m, c.size, c.objective, TieBreak::SmallestMeanBlockSize};
    const Blocking blocking = m == Method::Complete ? Blocking::single_block(c.n)
                                                    : optimal_blocking_1d(draw.sample, spec).blocking;
    cols[d].objective[s] = evaluate(blocking, draw.sample, c.objective);

    double ep = 0.0, ec = 0.0, es = 0.0;
    for (std::size_t r = 0; r < c.reps_per_sample; ++r) {
      const Assignment a =
          balanced_block_randomize(blocking, assign.split(r).split(static_cast<std::uint64_t>(m)));
      const double est = estimate(blocking, a, observe(a, draw.outcomes));
      ep += (est - pate_target) * (est - pate_target);
      ec += (est - cate_target) * (est - cate_target);
      es += (est - sate_target) * (est - sate_target);
    }
    cols[d].pate[s] = ep / reps;
    cols[d].cate[s] = ec / reps;
    cols[d].sate[s] = es / reps;
  }
}

SimulationResult summarize(const SimulationConfig& c, double pate_target,
                           const std::vector<Columns>& cols) {
  SimulationResult out;
  out.config = c;
  out.population_ate = pate_target;
  const DesignResult* threshold = nullptr;
  for (std::size_t d = 0; d < c.designs.size(); ++d) {
    out.designs.push_back(DesignResult{c.designs[d], mean_and_se(cols[d].objective),
                                       mean_and_se(cols[d].pate), mean_and_se(cols[d].cate),
                                       mean_and_se(cols[d].sate)});
  }
  for (const auto& r : out.designs)
    if (r.method == Method::Threshold) threshold = &r;
  if (threshold) {
    for (const auto& r : out.designs) {
      if (r.method == Method::Threshold) continue;
      out.ratios.push_back(RatioRow{r.method, r.objective.mean / threshold->objective.mean,
                                    r.pate.mean / threshold->pate.mean,
                                    r.cate.mean / threshold->cate.mean,
                                    r.sate.mean / threshold->sate.mean});
    }
  }
  return out;
}

}  // namespace

const char* model_name(OutcomeModelId id) {
  return id == OutcomeModelId::Informative ? "informative" : "noise";
}

std::optional<OutcomeModelId> parse_model(const std::string& name) {
  if (name == "informative") return OutcomeModelId::Informative;
  if (name == "noise") return OutcomeModelId::Noise;
  return std::nullopt;
}

const char* method_name(Method m) {
  switch (m) {
    case Method::Complete: return "C";
    case Method::FixedSized: return "F";
    case Method::Threshold: return "T";
  }
  return "?";
}

OutcomeModel outcome_model(OutcomeModelId id) {
  const auto [bt, bc] = coefficients(id);
  OutcomeModel m;
  m.mu0 = [bc](std::span<const double> x) { return bc * x[0] * x[0]; };
  m.mu1 = [bt](std::span<const double> x) { return bt * x[0] * x[0]; };
  m.conditional_sd = [](std::span<const double>) { return 1.0; };
  if (id == OutcomeModelId::Noise) m.constant_effect = 0.0;
  return m;
}

double population_ate(OutcomeModelId id) {
  const auto [bt, bc] = coefficients(id);
  return (bt - bc) * 25.0 / 3.0;  // E[x^2] = 25/3 for U(-5, 5)
}

SimulatedDraw draw_sample(OutcomeModelId id, std::size_t n, StreamRng rng) {
  std::vector<double> x(n);
  for (auto& v : x) v = -5.0 + 10.0 * rng.uniform01();
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto [bt, bc] = coefficients(id);
  PotentialOutcomes po{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    po.y1[i] = bt * x[i] * x[i] + normal(rng);
    po.y0[i] = bc * x[i] * x[i] + normal(rng);
  }
  return SimulatedDraw{Sample::from_scalars(x), std::move(po)};
}

SimulationResult run_simulation(const SimulationConfig& config) {
  validate(config);
  const double target = population_ate(config.model);
  std::vector<Columns> cols(config.designs.size(), Columns(config.num_samples));
  parallel_for(config.num_samples, config.threads,
               [&](std::size_t s) { simulate_one(config, target, s, cols); });
  return summarize(config, target, cols);
}

SimulationResult run_simulation_serial(const SimulationConfig& config) {
  validate(config);
  const double target = population_ate(config.model);
  std::vector<Columns> cols(config.designs.size(), Columns(config.num_samples));
  for (std::size_t s = 0; s < config.num_samples; ++s) simulate_one(config, target, s, cols);
  return summarize(config, target, cols);
}

}  // namespace blockbench
