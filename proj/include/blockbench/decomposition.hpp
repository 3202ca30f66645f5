#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "blockbench/core.hpp"
#include "blockbench/rng.hpp"
#include "blockbench/variance.hpp"

namespace blockbench {

/// The blocking a design picks for a given covariate draw.
using DesignMapping = std::function<Blocking(const Sample&)>;

/// Mapping for the binary designs, reading the first covariate.
DesignMapping binary_mapping(BinaryDesign design);

/// Where covariate draws come from: an explicit finite distribution (exact
/// expectations) or a sampler (Monte Carlo expectations with standard errors).
class CovariateDistribution {
 public:
  struct Atom {
    Sample sample;
    double probability;
  };
  using Sampler = std::function<Sample(StreamRng&)>;

  static CovariateDistribution finite(std::vector<Atom> atoms);
  static CovariateDistribution sampled(Sampler sampler, std::size_t replications = 100'000,
                                       std::uint64_t seed = 1);
  /// n independent fair coins, collapsed onto the n+1 values of sum(x).
  static CovariateDistribution binary_fair_coin(std::size_t n);

  bool exact() const noexcept { return !sampler_; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t replications() const noexcept { return replications_; }
  /// Draw r of a sampled distribution; deterministic in (seed, r).
  Sample draw(std::size_t r) const;

 private:
  std::vector<Atom> atoms_;
  Sampler sampler_;
  std::size_t replications_ = 0;
  std::uint64_t seed_ = 0;
};

struct BlockDiagnostics {
  std::size_t size = 0;
  double s2_mu = 0.0;                 // within-block sample variance of mu0(x_i)
  double sd_inverse_treated = 0.0;    // 2 o_b / (n_b^2 - 1)
  double expected_s2_y = 0.0;         // sum sigma^2 / n_b + s2_mu
};

struct DrawDiagnostics {
  double probability = 0.0;  // 1/replications for sampled distributions
  std::vector<BlockDiagnostics> blocks;
};

/// n Var(estimate | design) = 4 w1 + 4 w2 + 2 w3 under constant effects.
struct DecompositionReport {
  double w1 = 0.0;  // E[mean sigma^2]
  double w2 = 0.0;  // E[sum_b (n_b/n) s2_mu_b]
  double w3 = 0.0;  // E[sum_b (n_b/n) SD(1/T_b) E(s2_y_b | x)]
  double total = 0.0;
  // Monte Carlo standard errors; NaN for exact expectations.
  double w1_se = std::numeric_limits<double>::quiet_NaN();
  double w2_se = std::numeric_limits<double>::quiet_NaN();
  double w3_se = std::numeric_limits<double>::quiet_NaN();
  double total_se = std::numeric_limits<double>::quiet_NaN();
  bool exact = true;
  // Every atom of a finite distribution; the first draws of a sampled one.
  std::vector<DrawDiagnostics> draws;
};

/// Requires model.constant_effect. Throws DomainError on a size-1 block.
/// Sampled distributions run replications across `threads` OpenMP threads
/// (0 = all cores) with a result independent of the thread count.
DecompositionReport decompose(const DesignMapping& mapping, const CovariateDistribution& dist,
                              const OutcomeModel& model, int threads = 0);

/// w2 for a linear conditional mean alpha + x'beta: E[sum_b (n_b/n) beta' Q_b beta],
/// with Q_b the within-block sample covariance of the covariates.
double w2_linear(const DesignMapping& mapping, const CovariateDistribution& dist,
                 std::span<const double> beta, double alpha = 0.0, int threads = 0);

/// Outcome model with mu0(x) = mu0 + (mu1 - mu0) x_1, constant variance and zero effect.
OutcomeModel binary_outcome_model(const BinaryOutcomeParams& params, double effect = 0.0);

}  // namespace blockbench
