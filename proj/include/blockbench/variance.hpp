#pragma once

#include <span>

#include "blockbench/core.hpp"

namespace blockbench {

/// Outcome structure for one binary covariate: E[y(0)|x=0] = mu0,
/// E[y(0)|x=1] = mu1, Var[y(d)|x] = sigma2, constant treatment effect.
struct BinaryOutcomeParams {
  double sigma2 = 1.0;
  double mu0 = 0.0;
  double mu1 = 0.0;

  /// mu0 = 0 and mu1 = sqrt(delta_mu_sq).
  static BinaryOutcomeParams with_contrast(double sigma2, double delta_mu_sq);
  double delta_mu_sq() const noexcept { return (mu1 - mu0) * (mu1 - mu0); }
};

/// Var(estimate | x, B) for per-unit conditional means mu and variances sigma2:
/// (4/n) sum_b (n_b/n)(1 + o_b/(n_b^2-1)) [mean_b(sigma2) + s^2_b(mu)],
/// with s^2_b the unbiased within-block sample variance.
/// Throws DomainError on a block of size 1.
double conditional_variance_general(const Blocking& blocking, std::span<const double> mu,
                                    std::span<const double> sigma2);

/// The same for a 0/1 covariate: (4/n) sum_b (n_b/n)(1 + o_b/(n_b^2-1))(sigma2 + s^2_xb delta^2).
double conditional_variance_binary(const Blocking& blocking, std::span<const double> x,
                                   const BinaryOutcomeParams& params);

/// Designs for one fair-coin binary covariate and block size two.
enum class BinaryDesign { Complete, Paired, ThresholdPairs };

const char* design_name(BinaryDesign design);

/// The blocking each design picks for covariates x, which depends only on sum(x):
/// Complete is one block; Paired pairs like with like plus one mixed pair when
/// sum(x) is odd; ThresholdPairs uses homogeneous pairs when sum(x) is even,
/// one all-ones and one all-zeros triple plus pairs when sum(x) is odd, and one
/// mixed pair when sum(x) is 1 or n-1.
Blocking binary_design_blocking(BinaryDesign design, std::span<const double> x);

/// Normalized unconditional variance n Var(estimate | design), closed form, for
/// even n >= 2 and x_i independent fair coins. Throws DomainError on odd n.
double unconditional_variance_closed_form(BinaryDesign design, std::size_t n,
                                          const BinaryOutcomeParams& params);

/// The same expectation by summing over sum(x) = 0..n with binomial weights.
double enumerate_unconditional(BinaryDesign design, std::size_t n,
                               const BinaryOutcomeParams& params);

/// Covariates with `ones` leading ones followed by zeros.
std::vector<double> binary_covariates(std::size_t n, std::size_t ones);

}  // namespace blockbench
