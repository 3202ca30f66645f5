#pragma once

#include <cstdint>

#include "blockbench/core.hpp"
#include "blockbench/enumeration.hpp"

namespace blockbench {

enum class Solver { Exhaustive, DynamicProgram };
enum class SolverChoice { Auto, Exhaustive, DynamicProgram };

struct OptimalBlocking {
  Blocking blocking;
  double value = 0.0;
  Solver solver = Solver::Exhaustive;
  std::uint64_t examined = 0;  // blockings scored (exhaustive) or segments scored (DP)
};

struct SearchOptions {
  std::uint64_t ceiling = kDefaultBlockingCeiling;
  int threads = 0;  // 0 = all cores; never changes the result
};

/// Objective values closer than this are treated as ties.
inline constexpr double kObjectiveTolerance = 1e-12;

/// True when `a` should replace incumbent `b` under the design's tie-break.
bool preferred(double a_value, const Blocking& a, double b_value, const Blocking& b,
               TieBreak tie_break);

/// Global minimizer over every admissible blocking. Shards the enumeration by
/// label prefix across OpenMP threads and reduces shards in stream order.
/// Throws InfeasibleDesign when no admissible blocking exists and
/// ResourceLimitExceeded when the admissible set exceeds the ceiling.
OptimalBlocking optimal_blocking_exhaustive(const Sample& sample, const DesignSpec& design,
                                            const SearchOptions& options = {});

/// Single-threaded reference for optimal_blocking_exhaustive.
OptimalBlocking optimal_blocking_exhaustive_serial(const Sample& sample, const DesignSpec& design,
                                                   std::uint64_t ceiling = kDefaultBlockingCeiling);

/// Best blocking into runs of consecutive units after sorting by the single
/// covariate (ties by unit index). O(n^2) dynamic program.
///
/// Contiguous runs are optimal for fixed-sized blocking but not always for
/// threshold blocking: tight clusters next to a lone outlier can favour a
/// non-contiguous block. optimal_blocking() with SolverChoice::Auto prefers
/// exhaustive search whenever it fits under the ceiling.
///
/// Requires dimension 1 and the weighted-average or sum-of-distances objective.
OptimalBlocking optimal_blocking_1d(const Sample& sample, const DesignSpec& design);

/// Auto: exhaustive within the ceiling, otherwise the 1-D DP when applicable,
/// otherwise ResourceLimitExceeded.
OptimalBlocking optimal_blocking(const Sample& sample, const DesignSpec& design,
                                 SolverChoice choice = SolverChoice::Auto,
                                 const SearchOptions& options = {});

struct DominanceReport {
  OptimalBlocking threshold;
  OptimalBlocking fixed;
  bool holds = false;   // f(threshold) <= f(fixed)
  bool strict = false;  // f(threshold) <  f(fixed)
};

/// Optimal threshold and fixed-sized blockings of size S side by side.
/// Throws InfeasibleDesign unless n is a multiple of S.
DominanceReport assert_dominance(const Sample& sample, std::size_t size,
                                 const ObjectiveSpec& objective,
                                 SolverChoice choice = SolverChoice::Exhaustive,
                                 const SearchOptions& options = {});

/// Throws InfeasibleDesign (or DomainError for S = 0) when the design admits no blocking of n units.
void check_feasible(const DesignSpec& design, std::size_t n);

}  // namespace blockbench
