#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blockbench/core.hpp"
#include "blockbench/numeric.hpp"
#include "blockbench/rng.hpp"

namespace blockbench {

/// x ~ U(-5, 5). Informative: y(1) = 2x^2 + e1, y(0) = 1.7x^2 + e0.
/// Noise: y(1) = e1, y(0) = e0. Noise terms are independent standard normals.
enum class OutcomeModelId { Informative, Noise };

const char* model_name(OutcomeModelId id);
std::optional<OutcomeModelId> parse_model(const std::string& name);

/// Conditional means and unit variance of the model's potential outcomes.
OutcomeModel outcome_model(OutcomeModelId id);

/// Expected unit-level effect over x ~ U(-5, 5): 2.5 (informative) or 0 (noise).
double population_ate(OutcomeModelId id);

struct SimulatedDraw {
  Sample sample;
  PotentialOutcomes outcomes;
};

/// All covariates are drawn before any noise, so both models see the same x
/// for the same stream.
SimulatedDraw draw_sample(OutcomeModelId id, std::size_t n, StreamRng rng);

struct SimulationConfig {
  std::size_t n = 12;
  std::vector<Method> designs{Method::Complete, Method::FixedSized, Method::Threshold};
  OutcomeModelId model = OutcomeModelId::Informative;
  ObjectiveSpec objective{};
  std::size_t size = 2;
  std::size_t num_samples = 10'000;
  std::size_t reps_per_sample = 10;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = all cores; never changes the result
};

struct DesignResult {
  Method method = Method::Threshold;
  MeanEstimate objective;
  MeanEstimate pate;  // mean squared error against the population effect
  MeanEstimate cate;  // ... against the mean of mu1(x_i) - mu0(x_i)
  MeanEstimate sate;  // ... against the mean of y_i(1) - y_i(0)
};

struct RatioRow {
  Method method = Method::Complete;
  double objective = 0.0, pate = 0.0, cate = 0.0, sate = 0.0;
};

struct SimulationResult {
  SimulationConfig config;
  double population_ate = 0.0;
  std::vector<DesignResult> designs;
  std::vector<RatioRow> ratios;  // each non-threshold design over threshold; empty without threshold
};

/// Complete randomization uses one block; fixed-sized and threshold designs use
/// the 1-D dynamic program. Samples are spread over OpenMP threads and reduced
/// in sample order, so the result is bit-identical for any thread count.
/// Throws InfeasibleDesign (e.g. odd n with fixed size 2) or DomainError on a bad config.
SimulationResult run_simulation(const SimulationConfig& config);

/// Single-threaded reference for run_simulation.
SimulationResult run_simulation_serial(const SimulationConfig& config);

const char* method_name(Method m);  // "C", "F", "T"

}  // namespace blockbench
