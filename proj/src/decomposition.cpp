#include "blockbench/decomposition.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "blockbench/errors.hpp"
#include "blockbench/numeric.hpp"
#include "blockbench/parallel.hpp"

namespace blockbench {

namespace {

constexpr std::size_t kSampledDiagnostics = 8;

struct Terms {
  double w1 = 0.0, w2 = 0.0, w3 = 0.0;
};

Terms draw_terms(const Sample& sample, const Blocking& blocking, const OutcomeModel& model,
                 std::vector<BlockDiagnostics>* diag) {
  const std::size_t n = sample.size();
  if (!validate_blocking(n, blocking).partition())
    throw std::invalid_argument("design mapping did not return a partition of the sample");
  std::vector<double> mu(n), s2(n);
  for (std::size_t i = 0; i < n; ++i) {
    mu[i] = model.mean_control(sample.covariates(i));
    s2[i] = model.variance(sample.covariates(i));
  }
  Terms t;
  const double dn = static_cast<double>(n);
  for (const auto& b : blocking) {
    const std::size_t nb = b.size();
    if (nb < 2)
      throw DomainError("block of size 1 at unit " + std::to_string(b.front() + 1) +
                        " leaves the estimator undefined");
    const double m = static_cast<double>(nb);
    double mean = 0.0, sig = 0.0;
    for (UnitIndex i : b) {
      mean += mu[i];
      sig += s2[i];
    }
    mean /= m;
    double ss = 0.0;
    for (UnitIndex i : b) ss += (mu[i] - mean) * (mu[i] - mean);
    const double s2_mu = ss / (m - 1.0);
    const double sd_inv = 2.0 * static_cast<double>(nb % 2) / (m * m - 1.0);
    const double e_s2y = sig / m + s2_mu;
    t.w1 += sig / dn;
    t.w2 += m / dn * s2_mu;
    t.w3 += m / dn * sd_inv * e_s2y;
    if (diag) diag->push_back({nb, s2_mu, sd_inv, e_s2y});
  }
  return t;
}

double quadratic_term(const Sample& sample, const Blocking& blocking, std::span<const double> beta) {
  const std::size_t n = sample.size(), p = sample.dimension();
  double total = 0.0;
  std::vector<double> mean(p);
  for (const auto& b : blocking) {
    const double m = static_cast<double>(b.size());
    if (b.size() < 2) throw DomainError("block of size 1 leaves the estimator undefined");
    std::fill(mean.begin(), mean.end(), 0.0);
    for (UnitIndex i : b)
      for (std::size_t k = 0; k < p; ++k) mean[k] += sample.covariates(i)[k] / m;
    double q = 0.0;  // beta' Q_b beta = sample variance of beta'(x_i - mean)
    for (UnitIndex i : b) {
      double proj = 0.0;
      for (std::size_t k = 0; k < p; ++k) proj += beta[k] * (sample.covariates(i)[k] - mean[k]);
      q += proj * proj;
    }
    total += m / static_cast<double>(n) * q / (m - 1.0);
  }
  return total;
}

}  // namespace

DesignMapping binary_mapping(BinaryDesign design) {
  return [design](const Sample& s) {
    const auto x = s.column(0);
    return binary_design_blocking(design, x);
  };
}

CovariateDistribution CovariateDistribution::finite(std::vector<Atom> atoms) {
  if (atoms.empty()) throw std::invalid_argument("finite distribution needs at least one atom");
  double mass = 0.0;
  for (const auto& a : atoms) {
    if (a.probability < 0.0) throw std::invalid_argument("negative probability");
    mass += a.probability;
  }
  if (std::abs(mass - 1.0) > 1e-9) throw std::invalid_argument("probabilities must sum to 1");
  CovariateDistribution d;
  d.atoms_ = std::move(atoms);
  return d;
}

CovariateDistribution CovariateDistribution::sampled(Sampler sampler, std::size_t replications,
                                                     std::uint64_t seed) {
  if (!sampler || replications == 0)
    throw std::invalid_argument("sampled distribution needs a sampler and replications >= 1");
  CovariateDistribution d;
  d.sampler_ = std::move(sampler);
  d.replications_ = replications;
  d.seed_ = seed;
  return d;
}

CovariateDistribution CovariateDistribution::binary_fair_coin(std::size_t n) {
  const double p = std::ldexp(1.0, -static_cast<int>(n));
  std::vector<Atom> atoms;
  for (std::size_t k = 0; k <= n; ++k) {
    const auto x = binary_covariates(n, k);
    atoms.push_back({Sample::from_scalars(x),
                     binomial(static_cast<unsigned>(n), static_cast<unsigned>(k)) * p});
  }
  return finite(std::move(atoms));
}

Sample CovariateDistribution::draw(std::size_t r) const {
  if (!sampler_) throw std::logic_error("draw() on a finite distribution");
  StreamRng rng = StreamRng(seed_).split(r);
  return sampler_(rng);
}

DecompositionReport decompose(const DesignMapping& mapping, const CovariateDistribution& dist,
                              const OutcomeModel& model, int threads) {
  if (!model.constant_effect)
    throw DomainError("the decomposition assumes a constant treatment effect");
  DecompositionReport report;
  if (dist.exact()) {
    for (const auto& atom : dist.atoms()) {
      DrawDiagnostics d{atom.probability, {}};
      const Terms t = draw_terms(atom.sample, mapping(atom.sample), model, &d.blocks);
      report.w1 += atom.probability * t.w1;
      report.w2 += atom.probability * t.w2;
      report.w3 += atom.probability * t.w3;
      report.draws.push_back(std::move(d));
    }
    report.total = 4.0 * report.w1 + 4.0 * report.w2 + 2.0 * report.w3;
    return report;
  }

  const std::size_t reps = dist.replications();
  std::vector<double> w1(reps), w2(reps), w3(reps), tot(reps);
  std::vector<DrawDiagnostics> diag(std::min(reps, kSampledDiagnostics));
  parallel_for(reps, threads, [&](std::size_t r) {
    const Sample s = dist.draw(r);
    auto* d = r < diag.size() ? &diag[r].blocks : nullptr;
    const Terms t = draw_terms(s, mapping(s), model, d);
    w1[r] = t.w1;
    w2[r] = t.w2;
    w3[r] = t.w3;
    tot[r] = 4.0 * t.w1 + 4.0 * t.w2 + 2.0 * t.w3;
  });
  for (auto& d : diag) d.probability = 1.0 / static_cast<double>(reps);
  const auto e1 = mean_and_se(w1), e2 = mean_and_se(w2), e3 = mean_and_se(w3),
             et = mean_and_se(tot);
  report.exact = false;
  report.w1 = e1.mean;
  report.w2 = e2.mean;
  report.w3 = e3.mean;
  report.w1_se = e1.se;
  report.w2_se = e2.se;
  report.w3_se = e3.se;
  report.total = 4.0 * report.w1 + 4.0 * report.w2 + 2.0 * report.w3;
  report.total_se = et.se;
  report.draws = std::move(diag);
  return report;
}

double w2_linear(const DesignMapping& mapping, const CovariateDistribution& dist,
                 std::span<const double> beta, double alpha, int threads) {
  (void)alpha;  // the intercept cancels inside every Q_b
  auto check = [&](const Sample& s) {
    if (s.dimension() != beta.size())
      throw std::invalid_argument("beta has " + std::to_string(beta.size()) +
                                  " entries but covariates have dimension " +
                                  std::to_string(s.dimension()));
  };
  if (dist.exact()) {
    double total = 0.0;
    for (const auto& atom : dist.atoms()) {
      check(atom.sample);
      total += atom.probability * quadratic_term(atom.sample, mapping(atom.sample), beta);
    }
    return total;
  }
  const std::size_t reps = dist.replications();
  std::vector<double> v(reps);
  parallel_for(reps, threads, [&](std::size_t r) {
    const Sample s = dist.draw(r);
    check(s);
    v[r] = quadratic_term(s, mapping(s), beta);
  });
  return mean_and_se(v).mean;
}

OutcomeModel binary_outcome_model(const BinaryOutcomeParams& params, double effect) {
  const double a = params.mu0, b = params.mu1 - params.mu0, sd = std::sqrt(params.sigma2);
  return OutcomeModel::with_constant_effect(
      [a, b](std::span<const double> x) { return a + b * x[0]; },
      [sd](std::span<const double>) { return sd; }, effect);
}

}  // namespace blockbench
