#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "blockbench/core.hpp"

namespace blockbench {

/// Which block sizes a blocking may use.
struct SizeRule {
  enum class Kind { Any, Exactly, AtLeast };
  Kind kind = Kind::Any;
  std::size_t size = 1;

  static SizeRule any() { return {Kind::Any, 1}; }
  static SizeRule exactly(std::size_t s) { return {Kind::Exactly, s}; }
  static SizeRule at_least(std::size_t s) { return {Kind::AtLeast, s}; }

  bool admits(std::size_t block_size) const noexcept {
    switch (kind) {
      case Kind::Exactly: return block_size == size;
      case Kind::AtLeast: return block_size >= size;
      case Kind::Any: break;
    }
    return block_size >= 1;
  }
};

/// Complete randomization admits only the single block of all n units.
SizeRule size_rule(const DesignSpec& design, std::size_t n);

/// Refuses n=12 threshold (S=2) enumeration, which has 580,317 blockings.
inline constexpr std::uint64_t kDefaultBlockingCeiling = 500'000;

/// Streams every set partition of {0..n-1} whose blocks satisfy the rule, each
/// exactly once, in restricted-growth-string order (lowest unassigned unit
/// first). Yields nothing when the rule is unsatisfiable.
///
/// An optional label prefix pins the blocks of the first units, which splits
/// the stream into disjoint shards for parallel search.
class BlockingIterator {
 public:
  BlockingIterator(std::size_t n, SizeRule rule, std::vector<std::uint32_t> prefix = {});

  std::optional<Blocking> next();

  /// Advances to the next admissible labelling; the labels stay valid
  /// until the following call.
  bool advance();
  const std::vector<std::uint32_t>& labels() const noexcept { return labels_; }
  std::size_t block_count() const noexcept { return blocks_open_; }
  std::size_t n() const noexcept { return n_; }

  /// All admissible label prefixes of the given length, in stream order.
  static std::vector<std::vector<std::uint32_t>> prefixes(std::size_t n, SizeRule rule,
                                                          std::size_t depth);

 private:
  BlockingIterator(std::size_t n, SizeRule rule, std::vector<std::uint32_t> prefix,
                   std::size_t stop_at);

  bool feasible_with(std::size_t pos, std::uint32_t label) const noexcept;
  void assign(std::size_t pos, std::uint32_t label) noexcept;
  void unassign(std::size_t pos) noexcept;
  bool load_prefix();

  std::size_t n_;
  std::size_t stop_;
  SizeRule rule_;
  std::vector<std::uint32_t> prefix_;
  std::vector<std::uint32_t> labels_;
  std::vector<std::size_t> sizes_;
  std::size_t blocks_open_ = 0;
  std::size_t deficit_ = 0;  // units still needed to bring open blocks up to the rule size
  bool started_ = false;
  bool done_ = false;
};

/// Number of admissible blockings, via the recurrence over the size of the
/// block holding the first unit. Saturates at UINT64_MAX.
std::uint64_t count_blockings(std::size_t n, SizeRule rule);

/// Throws ResourceLimitExceeded when count_blockings exceeds the ceiling.
BlockingIterator enumerate_blockings(std::size_t n, SizeRule rule,
                                     std::uint64_t ceiling = kDefaultBlockingCeiling);

/// Blockings that differ only by swapping units with identical covariate rows.
struct PatternClass {
  // Blocks as sorted covariate rows; blocks sorted descending.
  std::vector<std::vector<std::vector<double>>> pattern;
  Blocking representative;  // first unit-level blocking in stream order
  std::uint64_t multiplicity = 0;
};

/// Groups admissible unit-level blockings into covariate-pattern classes,
/// in order of first appearance. Requires integer-valued (discrete)
/// covariates; throws DomainError otherwise.
std::vector<PatternClass> covariate_pattern_classes(const Sample& sample, SizeRule rule,
                                                    std::uint64_t ceiling = kDefaultBlockingCeiling);

/// The pattern as text, e.g. "{{1,1,0},{1,0,0}}".
std::string pattern_string(const std::vector<std::vector<std::vector<double>>>& pattern);

}  // namespace blockbench
