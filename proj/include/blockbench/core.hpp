#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace blockbench {

using UnitIndex = std::size_t;

struct Unit {
  std::string id;
  std::vector<double> covariates;
};

/// Ordered collection of experimental units. All units share one covariate
/// dimension, all covariates are finite and ids are unique.
class Sample {
 public:
  Sample() = default;
  explicit Sample(std::vector<Unit> units);

  /// Units get ids "1".."n".
  static Sample from_rows(const std::vector<std::vector<double>>& rows);
  static Sample from_scalars(std::span<const double> x);

  std::size_t size() const noexcept { return units_.size(); }
  std::size_t dimension() const noexcept {
    return units_.empty() ? 0 : units_.front().covariates.size();
  }
  const Unit& operator[](UnitIndex i) const { return units_[i]; }
  const std::vector<Unit>& units() const noexcept { return units_; }
  std::span<const double> covariates(UnitIndex i) const {
    return units_[i].covariates;
  }
  /// First covariate of each unit.
  std::vector<double> column(std::size_t k = 0) const;

 private:
  std::vector<Unit> units_;
};

/// Non-empty set of unit indices, members kept sorted.
class Block {
 public:
  explicit Block(std::vector<UnitIndex> members);

  std::size_t size() const noexcept { return members_.size(); }
  bool odd() const noexcept { return members_.size() % 2 == 1; }
  UnitIndex front() const noexcept { return members_.front(); }
  const std::vector<UnitIndex>& members() const noexcept { return members_; }
  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  friend bool operator==(const Block&, const Block&) = default;
  friend auto operator<=>(const Block&, const Block&) = default;

 private:
  std::vector<UnitIndex> members_;
};

/// Set of blocks in canonical order (sorted by smallest member), so that
/// two blockings compare equal iff they describe the same set of blocks.
/// Construction does not require a partition; validate_blocking reports.
class Blocking {
 public:
  Blocking() = default;
  explicit Blocking(std::vector<Block> blocks);
  explicit Blocking(const std::vector<std::vector<UnitIndex>>& blocks);

  /// Restricted-growth labels: unit i belongs to block labels[i].
  static Blocking from_labels(std::span<const std::uint32_t> labels);
  static Blocking single_block(std::size_t n);

  std::size_t size() const noexcept { return blocks_.size(); }
  std::size_t unit_count() const noexcept;
  double mean_block_size() const noexcept;
  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  const Block& operator[](std::size_t k) const { return blocks_[k]; }
  auto begin() const noexcept { return blocks_.begin(); }
  auto end() const noexcept { return blocks_.end(); }

  /// Per-unit block index for a blocking of units 0..n-1.
  std::vector<std::size_t> block_of(std::size_t n) const;

  friend bool operator==(const Blocking&, const Blocking&) = default;
  friend auto operator<=>(const Blocking&, const Blocking&) = default;

 private:
  std::vector<Block> blocks_;
};

enum class Method { Complete, FixedSized, Threshold };

enum class ObjectiveKind { WeightedAverageDistance, SumOfDistances, MaxWithinBlockDistance };
enum class Metric { Euclidean, SquaredEuclidean };

struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::WeightedAverageDistance;
  Metric metric = Metric::Euclidean;
};

enum class TieBreak {
  // Fewest units per block on average, then lexicographic block list.
  SmallestMeanBlockSize,
  // Lexicographic block list only.
  Lexicographic,
};

struct DesignSpec {
  Method method = Method::Threshold;
  std::size_t size = 2;  // ignored for Complete
  ObjectiveSpec objective{};
  TieBreak tie_break = TieBreak::SmallestMeanBlockSize;
};

struct ValidityReport {
  bool blocks_non_empty = true;
  bool covers_all_units = true;
  bool pairwise_disjoint = true;
  bool indices_in_range = true;
  std::optional<bool> size_constraint;
  std::vector<UnitIndex> uncovered;
  std::vector<UnitIndex> duplicated;
  std::vector<std::string> messages;

  bool partition() const noexcept {
    return blocks_non_empty && covers_all_units && pairwise_disjoint && indices_in_range;
  }
  bool valid() const noexcept { return partition() && size_constraint.value_or(true); }
};

/// Never throws; every violated condition is listed in the report.
ValidityReport validate_blocking(const Sample& sample, const Blocking& blocking,
                                 const std::optional<DesignSpec>& design = std::nullopt);
ValidityReport validate_blocking(std::size_t n, const Blocking& blocking,
                                 const std::optional<DesignSpec>& design = std::nullopt);

/// Per-unit treatment indicators T_i produced by balanced block randomization.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::vector<std::uint8_t> treated) : treated_(std::move(treated)) {}

  std::size_t size() const noexcept { return treated_.size(); }
  bool treated(UnitIndex i) const { return treated_[i] != 0; }
  const std::vector<std::uint8_t>& indicators() const noexcept { return treated_; }
  std::size_t treated_count(const Block& block) const;

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::uint8_t> treated_;
};

struct PotentialOutcomes {
  std::vector<double> y0;
  std::vector<double> y1;
};

using CovariateFunction = std::function<double(std::span<const double>)>;

enum class NoiseKind { StandardNormal };

/// Conditional mean and variance structure of the potential outcomes.
/// mu0(x) = E[y(0)|x], mu1(x) = E[y(1)|x], conditional_sd(x) = sd of y(d)|x.
struct OutcomeModel {
  CovariateFunction mu0;
  CovariateFunction mu1;
  CovariateFunction conditional_sd;
  NoiseKind noise = NoiseKind::StandardNormal;
  std::optional<double> constant_effect;

  static OutcomeModel with_constant_effect(CovariateFunction mu0, CovariateFunction sd,
                                           double delta);

  double mean_control(std::span<const double> x) const { return mu0(x); }
  double mean_treated(std::span<const double> x) const;
  double variance(std::span<const double> x) const {
    const double s = conditional_sd(x);
    return s * s;
  }
};

}  // namespace blockbench
