#include "blockbench/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "blockbench/errors.hpp"
#include "blockbench/objectives.hpp"
#include "blockbench/parallel.hpp"

namespace blockbench {

namespace {

constexpr std::size_t kShardDepth = 5;

struct Candidate {
  double value = std::numeric_limits<double>::infinity();
  std::optional<Blocking> blocking;
  std::uint64_t examined = 0;
};

class LabelScorer {
 public:
  LabelScorer(const DistanceMatrix& d, ObjectiveKind kind) : d_(d), kind_(kind) {}

  double operator()(const std::vector<std::uint32_t>& labels, std::size_t blocks) {
    groups_.resize(std::max(groups_.size(), blocks));
    for (std::size_t k = 0; k < blocks; ++k) groups_[k].clear();
    for (std::size_t i = 0; i < labels.size(); ++i) groups_[labels[i]].push_back(i);
    double total = 0.0;
    for (std::size_t k = 0; k < blocks; ++k) {
      const double c = block_cost(groups_[k], d_, kind_);
      total = kind_ == ObjectiveKind::MaxWithinBlockDistance ? std::max(total, c) : total + c;
    }
    return total;
  }

 private:
  const DistanceMatrix& d_;
  ObjectiveKind kind_;
  std::vector<std::vector<UnitIndex>> groups_;
};

void offer(Candidate& best, double value, const std::vector<std::uint32_t>& labels,
           TieBreak tie_break) {
  if (best.blocking && value > best.value + kObjectiveTolerance) return;
  Blocking b = Blocking::from_labels(labels);
  if (!best.blocking || preferred(value, b, best.value, *best.blocking, tie_break)) {
    best.value = value;
    best.blocking = std::move(b);
  }
}

void merge(Candidate& into, Candidate&& shard, TieBreak tie_break) {
  into.examined += shard.examined;
  if (!shard.blocking) return;
  if (!into.blocking ||
      preferred(shard.value, *shard.blocking, into.value, *into.blocking, tie_break)) {
    into.value = shard.value;
    into.blocking = std::move(shard.blocking);
  }
}

Candidate search_shard(std::size_t n, SizeRule rule, std::vector<std::uint32_t> prefix,
                       const DistanceMatrix& d, const DesignSpec& design) {
  Candidate best;
  LabelScorer score(d, design.objective.kind);
  BlockingIterator it(n, rule, std::move(prefix));
  while (it.advance()) {
    ++best.examined;
    offer(best, score(it.labels(), it.block_count()), it.labels(), design.tie_break);
  }
  return best;
}

OptimalBlocking finish(Candidate&& c, Solver solver) {
  return OptimalBlocking{std::move(*c.blocking), c.value, solver, c.examined};
}

OptimalBlocking complete_blocking(const Sample& sample, const DesignSpec& design, Solver solver) {
  Blocking b = Blocking::single_block(sample.size());
  const double v = evaluate(b, sample, design.objective);
  return OptimalBlocking{std::move(b), v, solver, 1};
}

}  // namespace

bool preferred(double a_value, const Blocking& a, double b_value, const Blocking& b,
               TieBreak tie_break) {
  if (a_value < b_value - kObjectiveTolerance) return true;
  if (a_value > b_value + kObjectiveTolerance) return false;
  if (tie_break == TieBreak::SmallestMeanBlockSize && a.size() != b.size())
    return a.size() > b.size();
  return a < b;
}

void check_feasible(const DesignSpec& design, std::size_t n) {
  if (design.method == Method::Complete) return;
  if (design.size == 0) throw DomainError("block size must be positive");
  if (design.method == Method::FixedSized && n % design.size != 0)
    throw InfeasibleDesign("fixed-sized blocking infeasible: " + std::to_string(n) +
                           " not a multiple of " + std::to_string(design.size));
  if (design.method == Method::Threshold && n < design.size)
    throw InfeasibleDesign("threshold blocking infeasible: " + std::to_string(n) +
                           " units, fewer than " + std::to_string(design.size));
}

OptimalBlocking optimal_blocking_exhaustive(const Sample& sample, const DesignSpec& design,
                                            const SearchOptions& options) {
  check_feasible(design, sample.size());
  if (design.method == Method::Complete) return complete_blocking(sample, design, Solver::Exhaustive);

  const std::size_t n = sample.size();
  const SizeRule rule = size_rule(design, n);
  (void)enumerate_blockings(n, rule, options.ceiling);  // resource guard

  const DistanceMatrix d(sample, design.objective.metric);
  const auto prefixes = BlockingIterator::prefixes(n, rule, std::min(kShardDepth, n));
  std::vector<Candidate> shards(prefixes.size());

  parallel_for(
      prefixes.size(), options.threads,
      [&](std::size_t s) { shards[s] = search_shard(n, rule, prefixes[s], d, design); }, true);

  Candidate best;
  for (auto& s : shards) merge(best, std::move(s), design.tie_break);
  if (!best.blocking) throw InfeasibleDesign("no admissible blocking");
  return finish(std::move(best), Solver::Exhaustive);
}

OptimalBlocking optimal_blocking_exhaustive_serial(const Sample& sample, const DesignSpec& design,
                                                   std::uint64_t ceiling) {
  check_feasible(design, sample.size());
  if (design.method == Method::Complete) return complete_blocking(sample, design, Solver::Exhaustive);

  const std::size_t n = sample.size();
  const DistanceMatrix d(sample, design.objective.metric);
  LabelScorer score(d, design.objective.kind);
  Candidate best;
  auto it = enumerate_blockings(n, size_rule(design, n), ceiling);
  while (it.advance()) {
    ++best.examined;
    offer(best, score(it.labels(), it.block_count()), it.labels(), design.tie_break);
  }
  if (!best.blocking) throw InfeasibleDesign("no admissible blocking");
  return finish(std::move(best), Solver::Exhaustive);
}

OptimalBlocking optimal_blocking_1d(const Sample& sample, const DesignSpec& design) {
  if (sample.dimension() != 1)
    throw DomainError("the 1-D solver needs exactly one covariate, got " +
                      std::to_string(sample.dimension()));
  const ObjectiveKind kind = design.objective.kind;
  if (kind == ObjectiveKind::MaxWithinBlockDistance)
    throw DomainError("the 1-D solver supports the weighted-average and sum-of-distances objectives");
  check_feasible(design, sample.size());
  if (design.method == Method::Complete)
    return complete_blocking(sample, design, Solver::DynamicProgram);

  const std::size_t n = sample.size();
  const bool squared = design.objective.metric == Metric::SquaredEuclidean;
  std::vector<UnitIndex> order(n);
  std::iota(order.begin(), order.end(), UnitIndex{0});
  std::stable_sort(order.begin(), order.end(), [&](UnitIndex a, UnitIndex b) {
    return sample.covariates(a)[0] < sample.covariates(b)[0];
  });
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = sample.covariates(order[k])[0];

  // cost[i][j]: objective contribution of the sorted run x[i..j]
  std::vector<double> cost(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double pair = 0.0, sum = 0.0, sumsq = 0.0;
    for (std::size_t j = i; j < n; ++j) {
      const double m = static_cast<double>(j - i);
      pair += squared ? m * x[j] * x[j] - 2.0 * x[j] * sum + sumsq : m * x[j] - sum;
      sum += x[j];
      sumsq += x[j] * x[j];
      const double len = static_cast<double>(j - i + 1);
      cost[i * n + j] = kind == ObjectiveKind::WeightedAverageDistance
                            ? 2.0 * pair / (static_cast<double>(n) * len)
                            : pair;
    }
  }

  const std::size_t s = design.size;
  const std::size_t max_len = design.method == Method::FixedSized ? s : n;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best(n + 1, inf);
  std::vector<std::size_t> blocks(n + 1, 0), cut(n + 1, 0);
  best[0] = 0.0;
  std::uint64_t examined = 0;
  for (std::size_t j = s; j <= n; ++j) {
    for (std::size_t len = s; len <= std::min(max_len, j); ++len) {
      const std::size_t i = j - len;
      if (best[i] == inf) continue;
      ++examined;
      const double v = best[i] + cost[i * n + j - 1];
      const std::size_t nb = blocks[i] + 1;
      bool take = v < best[j] - kObjectiveTolerance;
      if (!take && best[j] != inf && v <= best[j] + kObjectiveTolerance)
        take = design.tie_break == TieBreak::SmallestMeanBlockSize && nb > blocks[j];
      if (take) {
        best[j] = v;
        blocks[j] = nb;
        cut[j] = i;
      }
    }
  }
  if (best[n] == inf) throw InfeasibleDesign("no admissible blocking");

  std::vector<std::vector<UnitIndex>> groups;
  for (std::size_t j = n; j > 0; j = cut[j]) {
    std::vector<UnitIndex> g(order.begin() + static_cast<long>(cut[j]),
                             order.begin() + static_cast<long>(j));
    groups.push_back(std::move(g));
  }
  Blocking result(groups);
  const double value = evaluate(result, sample, design.objective);
  return OptimalBlocking{std::move(result), value, Solver::DynamicProgram, examined};
}

OptimalBlocking optimal_blocking(const Sample& sample, const DesignSpec& design,
                                 SolverChoice choice, const SearchOptions& options) {
  switch (choice) {
    case SolverChoice::Exhaustive: return optimal_blocking_exhaustive(sample, design, options);
    case SolverChoice::DynamicProgram: return optimal_blocking_1d(sample, design);
    case SolverChoice::Auto: break;
  }
  check_feasible(design, sample.size());
  const std::uint64_t count =
      design.method == Method::Complete ? 1 : count_blockings(sample.size(), size_rule(design, sample.size()));
  if (count <= options.ceiling) return optimal_blocking_exhaustive(sample, design, options);
  if (sample.dimension() == 1 && design.objective.kind != ObjectiveKind::MaxWithinBlockDistance)
    return optimal_blocking_1d(sample, design);
  return optimal_blocking_exhaustive(sample, design, options);  // throws the resource error
}

DominanceReport assert_dominance(const Sample& sample, std::size_t size,
                                 const ObjectiveSpec& objective, SolverChoice choice,
                                 const SearchOptions& options) {
  DesignSpec fixed{Method::FixedSized, size, objective, TieBreak::SmallestMeanBlockSize};
  DesignSpec threshold{Method::Threshold, size, objective, TieBreak::SmallestMeanBlockSize};
  check_feasible(fixed, sample.size());
  DominanceReport r{optimal_blocking(sample, threshold, choice, options),
                    optimal_blocking(sample, fixed, choice, options), false, false};
  r.holds = r.threshold.value <= r.fixed.value + kObjectiveTolerance;
  r.strict = r.threshold.value < r.fixed.value - kObjectiveTolerance;
  return r;
}

}  // namespace blockbench
