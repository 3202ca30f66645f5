#include <doctest.h>

#include <cmath>

#include "blockbench/errors.hpp"
#include "blockbench/objectives.hpp"
#include "blockbench/simulator.hpp"
#include "oracles.hpp"

using namespace blockbench;

namespace {

SimulationConfig small_config(OutcomeModelId model) {
  SimulationConfig c;
  c.n = 8;
  c.model = model;
  c.num_samples = 300;
  c.reps_per_sample = 4;
  c.seed = 12;
  return c;
}

void same(const MeanEstimate& a, const MeanEstimate& b) {
  CHECK(a.mean == b.mean);
  CHECK(a.se == b.se);
}

}  // namespace

TEST_CASE("population effect matches quadrature") {
  const double informative =
      oracle::simpson([](double x) { return (2.0 * x * x - 1.7 * x * x) / 10.0; }, -5.0, 5.0);
  CHECK(population_ate(OutcomeModelId::Informative) == doctest::Approx(informative).epsilon(1e-12));
  CHECK(population_ate(OutcomeModelId::Noise) == 0.0);
  const auto m = outcome_model(OutcomeModelId::Informative);
  const std::vector<double> x{2.0};
  CHECK(m.mean_treated(x) - m.mean_control(x) == doctest::Approx(1.2));
  CHECK(parse_model("noise") == OutcomeModelId::Noise);
  CHECK_FALSE(parse_model("other").has_value());
}

TEST_CASE("draws are deterministic and share covariates across models") {
  const StreamRng rng(4);
  const auto a = draw_sample(OutcomeModelId::Informative, 10, rng);
  const auto b = draw_sample(OutcomeModelId::Informative, 10, rng);
  const auto c = draw_sample(OutcomeModelId::Noise, 10, rng);
  CHECK(a.outcomes.y1 == b.outcomes.y1);
  CHECK(a.sample.column() == c.sample.column());
  for (double x : a.sample.column()) CHECK((x >= -5.0 && x < 5.0));
}

TEST_CASE("parallel simulation equals the serial reference bit for bit") {
  for (auto model : {OutcomeModelId::Informative, OutcomeModelId::Noise}) {
    auto c = small_config(model);
    const auto ref = run_simulation_serial(c);
    for (int threads : {1, 2, 5}) {
      c.threads = threads;
      const auto par = run_simulation(c);
      REQUIRE(par.designs.size() == ref.designs.size());
      for (std::size_t d = 0; d < ref.designs.size(); ++d) {
        same(par.designs[d].objective, ref.designs[d].objective);
        same(par.designs[d].pate, ref.designs[d].pate);
        same(par.designs[d].cate, ref.designs[d].cate);
        same(par.designs[d].sate, ref.designs[d].sate);
      }
    }
  }
}

TEST_CASE("simulation invariants") {
  const auto r = run_simulation(small_config(OutcomeModelId::Informative));
  REQUIRE(r.designs.size() == 3);
  CHECK(r.population_ate == doctest::Approx(2.5));
  const auto& c = r.designs[0];
  const auto& f = r.designs[1];
  const auto& t = r.designs[2];
  CHECK(c.method == Method::Complete);
  CHECK(t.objective.mean <= f.objective.mean);
  CHECK(f.objective.mean < c.objective.mean);
  REQUIRE(r.ratios.size() == 2);
  CHECK(r.ratios[0].objective == doctest::Approx(c.objective.mean / t.objective.mean));
  for (const auto& d : r.designs) {
    CHECK(d.sate.mean <= d.cate.mean * 1.2);
    CHECK(d.pate.se > 0.0);
  }
  const auto noise = run_simulation(small_config(OutcomeModelId::Noise));
  CHECK(noise.designs[2].objective.mean == t.objective.mean);
  CHECK(noise.population_ate == 0.0);
}

TEST_CASE("simulation rejects bad configurations") {
  auto c = small_config(OutcomeModelId::Noise);
  c.n = 7;
  CHECK_THROWS_AS(run_simulation(c), InfeasibleDesign);
  c.n = 8;
  c.num_samples = 0;
  CHECK_THROWS_AS(run_simulation(c), DomainError);
  CHECK(std::string(method_name(Method::FixedSized)) == "F");
}
