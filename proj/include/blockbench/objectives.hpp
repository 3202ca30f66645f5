#pragma once

#include <span>
#include <vector>

#include "blockbench/core.hpp"

namespace blockbench {

/// Throws std::invalid_argument on dimension mismatch.
double pairwise_distance(std::span<const double> a, std::span<const double> b, Metric metric);

/// Dense symmetric matrix of unit-to-unit distances.
class DistanceMatrix {
 public:
  DistanceMatrix(const Sample& sample, Metric metric);

  std::size_t size() const noexcept { return n_; }
  double operator()(UnitIndex i, UnitIndex j) const noexcept { return d_[i * n_ + j]; }

 private:
  std::size_t n_;
  std::vector<double> d_;
};

/// WeightedAverageDistance: sum_b (n_b/n) * sum_{i,j in b} d(i,j) / n_b^2, self-pairs included.
/// SumOfDistances: sum_b sum_{i<j in b} d(i,j).
/// MaxWithinBlockDistance: largest within-block pair distance.
double evaluate(const Blocking& blocking, const Sample& sample, const ObjectiveSpec& spec);
double evaluate(const Blocking& blocking, const DistanceMatrix& d, ObjectiveKind kind);

/// Objective contribution of one block, given its members as unit labels.
/// Summing (or, for the max kind, maximizing) over blocks gives evaluate().
double block_cost(std::span<const UnitIndex> members, const DistanceMatrix& d, ObjectiveKind kind);

}  // namespace blockbench
