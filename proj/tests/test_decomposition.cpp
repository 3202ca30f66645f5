#include <doctest.h>

#include <cmath>
#include <random>

#include "blockbench/decomposition.hpp"
#include "blockbench/errors.hpp"
#include "blockbench/optimizer.hpp"
#include "oracles.hpp"

using namespace blockbench;

namespace {

constexpr BinaryDesign kDesigns[] = {BinaryDesign::Complete, BinaryDesign::Paired,
                                     BinaryDesign::ThresholdPairs};

}  // namespace

TEST_CASE("decomposition total equals the unconditional variance") {
  for (double s2 : {0.0, 1.0, 4.0})
    for (double d2 : {0.0, 0.5, 2.0}) {
      const auto p = BinaryOutcomeParams::with_contrast(s2, d2);
      const auto model = binary_outcome_model(p);
      for (std::size_t n = 2; n <= 16; n += 2) {
        const auto dist = CovariateDistribution::binary_fair_coin(n);
        for (auto d : kDesigns) {
          CAPTURE(n);
          const auto r = decompose(binary_mapping(d), dist, model, 1);
          CHECK(r.exact);
          CHECK(std::abs(r.total - (4 * r.w1 + 4 * r.w2 + 2 * r.w3)) < 1e-12);
          CHECK(std::abs(r.total - enumerate_unconditional(d, n, p)) < 1e-10);
          CHECK(r.w1 == doctest::Approx(s2));
          if (d != BinaryDesign::ThresholdPairs) CHECK(r.w3 == 0.0);
        }
      }
    }
}

TEST_CASE("decomposition over every covariate vector") {
  const auto p = BinaryOutcomeParams::with_contrast(1.0, 2.0);
  const std::size_t n = 6;
  std::vector<CovariateDistribution::Atom> atoms;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> i) & 1u;
    atoms.push_back({Sample::from_scalars(x), 1.0 / 64.0});
  }
  const auto dist = CovariateDistribution::finite(atoms);
  for (auto d : kDesigns) {
    double brute = 0.0;
    for (const auto& a : atoms) {
      const auto x = a.sample.column();
      std::vector<double> mu(n), s2(n, 1.0);
      for (std::size_t i = 0; i < n; ++i) mu[i] = x[i] * std::sqrt(2.0);
      brute += a.probability * n * oracle::assignment_variance(binary_design_blocking(d, x), mu, s2);
    }
    const auto r = decompose(binary_mapping(d), dist, binary_outcome_model(p));
    CHECK(r.total == doctest::Approx(brute).epsilon(1e-12));
    CHECK(r.draws.size() == 64);
  }
}

TEST_CASE("threshold pairs carry the whole odd-block penalty") {
  const auto p = BinaryOutcomeParams::with_contrast(1.0, 2.0);
  const auto r = decompose(binary_mapping(BinaryDesign::ThresholdPairs),
                           CovariateDistribution::binary_fair_coin(6), binary_outcome_model(p));
  CHECK(r.w3 > 0.0);
  const auto c = decompose(binary_mapping(BinaryDesign::Complete),
                           CovariateDistribution::binary_fair_coin(6), binary_outcome_model(p));
  CHECK(c.w2 == doctest::Approx(0.5));
}

TEST_CASE("linear w2 equals w2 for a linear conditional mean") {
  const auto p = BinaryOutcomeParams::with_contrast(1.0, 2.0);
  const double beta[] = {std::sqrt(2.0)};
  for (std::size_t n : {4u, 8u})
    for (auto d : kDesigns) {
      const auto dist = CovariateDistribution::binary_fair_coin(n);
      CHECK(w2_linear(binary_mapping(d), dist, beta, 0.3) ==
            doctest::Approx(decompose(binary_mapping(d), dist, binary_outcome_model(p)).w2));
    }
}

TEST_CASE("sampled distributions are reproducible across thread counts") {
  auto sampler = [](StreamRng& rng) {
    std::vector<std::vector<double>> rows(8);
    for (auto& r : rows) r = {rng.uniform01() * 4 - 2, rng.uniform01()};
    return Sample::from_rows(rows);
  };
  const auto dist = CovariateDistribution::sampled(sampler, 300, 9);
  CHECK_FALSE(dist.exact());
  const auto mapping = [](const Sample& s) {
    return optimal_blocking_exhaustive_serial(s, DesignSpec{Method::Threshold, 2, {}, {}}).blocking;
  };
  const auto model = OutcomeModel::with_constant_effect(
      [](std::span<const double> x) { return x[0] * x[0] + x[1]; },
      [](std::span<const double>) { return 1.0; }, 0.0);
  const auto r1 = decompose(mapping, dist, model, 1);
  const auto r3 = decompose(mapping, dist, model, 3);
  CHECK(r1.total == r3.total);
  CHECK(r1.w3 == r3.w3);
  CHECK(std::isfinite(r1.total_se));
  CHECK(r1.w1 == doctest::Approx(1.0));
  const double beta[] = {1.0, 2.0};
  CHECK(w2_linear(mapping, dist, beta, 0.0, 1) == w2_linear(mapping, dist, beta, 0.0, 4));
}

TEST_CASE("decomposition preconditions") {
  OutcomeModel varying;
  varying.mu0 = [](std::span<const double>) { return 0.0; };
  varying.mu1 = [](std::span<const double> x) { return x[0]; };
  varying.conditional_sd = [](std::span<const double>) { return 1.0; };
  const auto dist = CovariateDistribution::binary_fair_coin(4);
  CHECK_THROWS_AS(decompose(binary_mapping(BinaryDesign::Complete), dist, varying), DomainError);
  const auto singles = [](const Sample& s) {
    std::vector<std::vector<UnitIndex>> b;
    for (std::size_t i = 0; i < s.size(); ++i) b.push_back({i});
    return Blocking(b);
  };
  CHECK_THROWS_AS(decompose(singles, dist, binary_outcome_model({})), DomainError);
  CHECK_THROWS_AS(CovariateDistribution::finite({{Sample::from_scalars(std::vector<double>{1.0}), 0.5}}),
                  std::invalid_argument);
}
