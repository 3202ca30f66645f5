#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "blockbench/core.hpp"
#include "blockbench/rng.hpp"

namespace blockbench {

/// Per block, independently: a fair coin picks floor(n_b/2) or ceil(n_b/2)
/// treated units, then a uniform subset of that size is treated.
/// Block k of the canonical order draws from rng.split(k), so the result is
/// independent of evaluation order. Throws DomainError on a size-1 block.
Assignment balanced_block_randomize(const Blocking& blocking, const StreamRng& rng);
Assignment balanced_block_randomize(const Blocking& blocking, std::uint64_t seed);

/// y_i = T_i y_i(1) + (1 - T_i) y_i(0).
std::vector<double> observe(const Assignment& assignment, const PotentialOutcomes& outcomes);

/// Within-block difference in means, blocks weighted by n_b/n.
/// Throws DomainError when a block has no treated or no control unit.
double estimate(const Blocking& blocking, const Assignment& assignment,
                std::span<const double> observed);

/// Moments of 1/T_b under balanced block randomization of a block of size n_b >= 2.
double expected_inverse_treated(std::size_t block_size);
double sd_inverse_treated(std::size_t block_size);

}  // namespace blockbench
