#include "blockbench/variance.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "blockbench/errors.hpp"
#include "blockbench/numeric.hpp"

namespace blockbench {

namespace {

void require_even(std::size_t n) {
  if (n < 2 || n % 2 != 0)
    throw DomainError("the binary designs need an even sample size >= 2, got " + std::to_string(n));
}

// (n_b/n)(1 + o_b/(n_b^2 - 1))
double block_weight(std::size_t nb, std::size_t n) {
  if (nb < 2)
    throw DomainError("block of size " + std::to_string(nb) + " leaves the estimator undefined");
  const double m = static_cast<double>(nb);
  return m / static_cast<double>(n) * (1.0 + static_cast<double>(nb % 2) / (m * m - 1.0));
}

double sample_variance(const Block& b, std::span<const double> v) {
  double mean = 0.0;
  for (UnitIndex i : b) mean += v[i];
  mean /= static_cast<double>(b.size());
  double ss = 0.0;
  for (UnitIndex i : b) ss += (v[i] - mean) * (v[i] - mean);
  return ss / static_cast<double>(b.size() - 1);
}

}  // namespace

BinaryOutcomeParams BinaryOutcomeParams::with_contrast(double sigma2, double delta_mu_sq) {
  if (sigma2 < 0.0 || delta_mu_sq < 0.0)
    throw DomainError("sigma2 and the squared mean contrast must be nonnegative");
  return {sigma2, 0.0, std::sqrt(delta_mu_sq)};
}

double conditional_variance_general(const Blocking& blocking, std::span<const double> mu,
                                    std::span<const double> sigma2) {
  const std::size_t n = blocking.unit_count();
  if (mu.size() != n || sigma2.size() != n)
    throw std::invalid_argument("per-unit moments must cover every unit");
  double total = 0.0;
  for (const auto& b : blocking) {
    const double w = block_weight(b.size(), n);
    double s = 0.0;
    for (UnitIndex i : b) s += sigma2[i];
    total += w * (s / static_cast<double>(b.size()) + sample_variance(b, mu));
  }
  return 4.0 / static_cast<double>(n) * total;
}

double conditional_variance_binary(const Blocking& blocking, std::span<const double> x,
                                   const BinaryOutcomeParams& params) {
  const std::size_t n = blocking.unit_count();
  if (x.size() != n) throw std::invalid_argument("covariates must cover every unit");
  for (double v : x)
    if (v != 0.0 && v != 1.0) throw DomainError("binary covariate must be 0 or 1");
  const double d2 = params.delta_mu_sq();
  double total = 0.0;
  for (const auto& b : blocking)
    total += block_weight(b.size(), n) * (params.sigma2 + sample_variance(b, x) * d2);
  return 4.0 / static_cast<double>(n) * total;
}

const char* design_name(BinaryDesign design) {
  switch (design) {
    case BinaryDesign::Complete: return "C";
    case BinaryDesign::Paired: return "F2";
    case BinaryDesign::ThresholdPairs: return "T2";
  }
  return "?";
}

Blocking binary_design_blocking(BinaryDesign design, std::span<const double> x) {
  const std::size_t n = x.size();
  require_even(n);
  if (design == BinaryDesign::Complete) return Blocking::single_block(n);

  std::vector<UnitIndex> ones, zeros;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == 1.0) ones.push_back(i);
    else if (x[i] == 0.0) zeros.push_back(i);
    else throw DomainError("binary covariate must be 0 or 1");
  }
  const std::size_t k = ones.size();
  std::vector<std::vector<UnitIndex>> blocks;
  auto pair_up = [&](const std::vector<UnitIndex>& v, std::size_t from) {
    for (std::size_t j = from; j + 1 < v.size(); j += 2) blocks.push_back({v[j], v[j + 1]});
  };

  const bool triples = design == BinaryDesign::ThresholdPairs && k % 2 == 1 && k != 1 && k != n - 1;
  if (triples) {
    blocks.push_back({ones[0], ones[1], ones[2]});
    blocks.push_back({zeros[0], zeros[1], zeros[2]});
    pair_up(ones, 3);
    pair_up(zeros, 3);
  } else {
    std::vector<UnitIndex> all(ones);
    all.insert(all.end(), zeros.begin(), zeros.end());
    pair_up(all, 0);
  }
  return Blocking(blocks);
}

double unconditional_variance_closed_form(BinaryDesign design, std::size_t n,
                                          const BinaryOutcomeParams& params) {
  require_even(n);
  const double s2 = params.sigma2, d2 = params.delta_mu_sq(), m = static_cast<double>(n);
  switch (design) {
    case BinaryDesign::Complete: return 4.0 * s2 + d2;
    case BinaryDesign::Paired: return 4.0 * s2 + 2.0 * d2 / m;
    case BinaryDesign::ThresholdPairs: break;
  }
  // With two units the events sum(x)=1 and sum(x)=n-1 coincide; the design is plain pairing.
  if (n == 2) return 4.0 * s2 + 2.0 * d2 / m;
  const double p = std::ldexp(1.0, static_cast<int>(n));
  return 4.0 * s2 + 8.0 * d2 / p + 3.0 * (p / 2.0 - 2.0 * m) * s2 / (p * m);
}

std::vector<double> binary_covariates(std::size_t n, std::size_t ones) {
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 0; i < ones && i < n; ++i) x[i] = 1.0;
  return x;
}

double enumerate_unconditional(BinaryDesign design, std::size_t n,
                               const BinaryOutcomeParams& params) {
  require_even(n);
  if (n > 60) throw DomainError("enumeration over sum(x) supports n <= 60");
  const double p = std::ldexp(1.0, static_cast<int>(n));
  double total = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    const auto x = binary_covariates(n, k);
    const double v = conditional_variance_binary(binary_design_blocking(design, x), x, params);
    total += binomial(static_cast<unsigned>(n), static_cast<unsigned>(k)) / p * v;
  }
  return static_cast<double>(n) * total;
}

}  // namespace blockbench
