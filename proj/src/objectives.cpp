#include "blockbench/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace blockbench {

double pairwise_distance(std::span<const double> a, std::span<const double> b, Metric metric) {
  if (a.size() != b.size())
    throw std::invalid_argument("covariate dimension mismatch: " + std::to_string(a.size()) +
                                " vs " + std::to_string(b.size()));
  double ss = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) ss += (a[k] - b[k]) * (a[k] - b[k]);
  return metric == Metric::SquaredEuclidean ? ss : std::sqrt(ss);
}

DistanceMatrix::DistanceMatrix(const Sample& sample, Metric metric)
    : n_(sample.size()), d_(n_ * n_, 0.0) {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      d_[i * n_ + j] = d_[j * n_ + i] =
          pairwise_distance(sample.covariates(i), sample.covariates(j), metric);
}

double block_cost(std::span<const UnitIndex> members, const DistanceMatrix& d, ObjectiveKind kind) {
  const std::size_t m = members.size();
  double acc = 0.0;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      const double v = d(members[a], members[b]);
      acc = kind == ObjectiveKind::MaxWithinBlockDistance ? std::max(acc, v) : acc + v;
    }
  if (kind == ObjectiveKind::WeightedAverageDistance)
    return 2.0 * acc / (static_cast<double>(d.size()) * static_cast<double>(m));
  return acc;
}

double evaluate(const Blocking& blocking, const DistanceMatrix& d, ObjectiveKind kind) {
  double total = 0.0;
  for (const auto& b : blocking) {
    const double c = block_cost(b.members(), d, kind);
    total = kind == ObjectiveKind::MaxWithinBlockDistance ? std::max(total, c) : total + c;
  }
  return total;
}

double evaluate(const Blocking& blocking, const Sample& sample, const ObjectiveSpec& spec) {
  return evaluate(blocking, DistanceMatrix(sample, spec.metric), spec.kind);
}

}  // namespace blockbench
