#include <doctest.h>

#include <cmath>
#include <random>

#include "blockbench/errors.hpp"
#include "blockbench/experiment.hpp"
#include "blockbench/variance.hpp"
#include "oracles.hpp"

using namespace blockbench;

namespace {

using BL = std::vector<std::vector<UnitIndex>>;

// n Var averaged over all 2^n covariate vectors, each blocked by the design.
double brute_unconditional(BinaryDesign d, std::size_t n, const BinaryOutcomeParams& p) {
  double total = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<double> x(n), mu(n), s2(n, p.sigma2);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = (mask >> i) & 1u;
      mu[i] = x[i] ? p.mu1 : p.mu0;
    }
    total += oracle::assignment_variance(binary_design_blocking(d, x), mu, s2);
  }
  return total * static_cast<double>(n) / static_cast<double>(1u << n);
}

}  // namespace

TEST_CASE("conditional variance matches enumeration over assignments") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(-2, 2), v(0.1, 3);
  const std::vector<Blocking> blockings{
      Blocking(BL{{0, 1, 2}, {3, 4}, {5, 6, 7, 8}}), Blocking(BL{{0, 4, 8}, {1, 2, 3, 5, 6, 7}}),
      Blocking::single_block(9), Blocking(BL{{0, 1, 2}, {3, 4, 5}, {6, 7, 8}})};
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> mu(9), s2(9);
    for (auto& m : mu) m = u(gen);
    for (auto& s : s2) s = v(gen);
    for (const auto& b : blockings)
      CHECK(conditional_variance_general(b, mu, s2) ==
            doctest::Approx(oracle::assignment_variance(b, mu, s2)).epsilon(1e-12));
  }
}

TEST_CASE("conditional variance matches a Monte Carlo experiment") {
  const Blocking b(BL{{0, 1, 2}, {3, 4}, {5, 6, 7, 8, 9}});
  const std::vector<double> mu{0.5, -1, 2, 0, 1, 3, -2, 0.5, 1, 0};
  const std::vector<double> sd{1, 0.5, 2, 1, 1, 0.3, 1.5, 1, 2, 0.7};
  std::vector<double> s2(10);
  for (std::size_t i = 0; i < 10; ++i) s2[i] = sd[i] * sd[i];
  const double expected = conditional_variance_general(b, mu, s2);

  const int reps = 200000;
  const StreamRng root(3);
  std::normal_distribution<double> z;
  double sum = 0.0, sum2 = 0.0;
  for (int r = 0; r < reps; ++r) {
    StreamRng noise = root.split(2 * r);
    PotentialOutcomes po{std::vector<double>(10), std::vector<double>(10)};
    for (std::size_t i = 0; i < 10; ++i) {
      po.y0[i] = mu[i] + sd[i] * z(noise);
      po.y1[i] = mu[i] + 1.0 + sd[i] * z(noise);
    }
    const Assignment a = balanced_block_randomize(b, root.split(2 * r + 1));
    const double e = estimate(b, a, observe(a, po));
    sum += e;
    sum2 += e * e;
  }
  const double mean = sum / reps, var = sum2 / reps - mean * mean;
  CHECK(std::abs(mean - 1.0) < 5 * std::sqrt(expected / reps));
  CHECK(std::abs(var / expected - 1.0) < 5 * std::sqrt(2.0 / reps));
}

TEST_CASE("six-unit binary sample conditional variances") {
  const std::vector<double> x{1, 1, 1, 0, 0, 0};
  const auto p = BinaryOutcomeParams::with_contrast(1.0, 2.0);
  CHECK(conditional_variance_binary(Blocking(BL{{0, 3}, {1, 4}, {2, 5}}), x, p) ==
        doctest::Approx(4.0 / 3.0));
  CHECK(conditional_variance_binary(Blocking(BL{{0, 1}, {2, 3}, {4, 5}}), x, p) ==
        doctest::Approx(8.0 / 9.0));
  CHECK(conditional_variance_binary(Blocking(BL{{0, 1, 2}, {3, 4, 5}}), x, p) ==
        doctest::Approx(0.75));
  CHECK(conditional_variance_binary(Blocking::single_block(6), x, p) == doctest::Approx(1.6 * 2.0 / 3.0));

  const auto half = BinaryOutcomeParams::with_contrast(1.0, 0.5);
  CHECK(conditional_variance_binary(Blocking(BL{{0, 1, 2}, {3, 4, 5}}), x, half) ==
        doctest::Approx(0.75));
  CHECK(conditional_variance_binary(Blocking(BL{{0, 1}, {2, 3}, {4, 5}}), x, half) ==
        doctest::Approx(0.722).epsilon(1e-3));

  std::vector<double> mu(6), s2(6, 1.0);
  for (std::size_t i = 0; i < 6; ++i) mu[i] = x[i] * std::sqrt(2.0);
  const Blocking b(BL{{0, 1, 3}, {2, 4, 5}});
  CHECK(conditional_variance_binary(b, x, p) == doctest::Approx(conditional_variance_general(b, mu, s2)));
}

TEST_CASE("size-one block has no variance") {
  const std::vector<double> mu{0, 0, 0}, s2{1, 1, 1};
  CHECK_THROWS_AS(conditional_variance_general(Blocking(BL{{0, 1}, {2}}), mu, s2), DomainError);
}

TEST_CASE("design blockings depend on the count of ones") {
  const auto x = binary_covariates(6, 3);
  CHECK(x == std::vector<double>{1, 1, 1, 0, 0, 0});
  CHECK(binary_design_blocking(BinaryDesign::Complete, x) == Blocking::single_block(6));
  CHECK(binary_design_blocking(BinaryDesign::ThresholdPairs, x) == Blocking(BL{{0, 1, 2}, {3, 4, 5}}));
  const auto paired = binary_design_blocking(BinaryDesign::Paired, x);
  for (const auto& blk : paired) CHECK(blk.size() == 2);
  const auto one = binary_covariates(6, 1);
  for (auto d : {BinaryDesign::Paired, BinaryDesign::ThresholdPairs})
    for (const auto& blk : binary_design_blocking(d, one)) CHECK(blk.size() == 2);
  CHECK(std::string(design_name(BinaryDesign::Paired)) == "F2");
}

TEST_CASE("closed forms agree with summation and with brute force") {
  for (double s2 : {0.0, 1.0, 4.0})
    for (double d2 : {0.0, 0.5, 2.0}) {
      const auto p = BinaryOutcomeParams::with_contrast(s2, d2);
      for (std::size_t n = 2; n <= 16; n += 2)
        for (auto d : {BinaryDesign::Complete, BinaryDesign::Paired, BinaryDesign::ThresholdPairs}) {
          CAPTURE(n);
          const double cf = unconditional_variance_closed_form(d, n, p);
          CHECK(std::abs(cf - enumerate_unconditional(d, n, p)) < 1e-10);
          if (n <= 10) CHECK(cf == doctest::Approx(brute_unconditional(d, n, p)).epsilon(1e-10));
        }
    }
}

TEST_CASE("closed-form values") {
  const auto p = BinaryOutcomeParams::with_contrast(1.0, 2.0);
  CHECK(unconditional_variance_closed_form(BinaryDesign::Complete, 6, p) == doctest::Approx(6.0));
  CHECK(unconditional_variance_closed_form(BinaryDesign::Paired, 6, p) == doctest::Approx(4.0 + 4.0 / 6.0));
  CHECK(unconditional_variance_closed_form(BinaryDesign::ThresholdPairs, 2, p) ==
        doctest::Approx(unconditional_variance_closed_form(BinaryDesign::Paired, 2, p)));
  CHECK_THROWS_AS(unconditional_variance_closed_form(BinaryDesign::Complete, 5, p), DomainError);
  CHECK_THROWS_AS(enumerate_unconditional(BinaryDesign::Complete, 7, p), DomainError);
}

TEST_CASE("threshold pairs lose without signal and win with strong signal") {
  for (std::size_t n = 6; n <= 20; n += 2) {
    const auto flat = BinaryOutcomeParams::with_contrast(1.0, 0.0);
    CHECK(unconditional_variance_closed_form(BinaryDesign::ThresholdPairs, n, flat) >
          unconditional_variance_closed_form(BinaryDesign::Complete, n, flat));
    const auto strong = BinaryOutcomeParams::with_contrast(1.0, 1.0);
    CHECK(unconditional_variance_closed_form(BinaryDesign::ThresholdPairs, n, strong) <
          unconditional_variance_closed_form(BinaryDesign::Paired, n, strong));
  }
}
