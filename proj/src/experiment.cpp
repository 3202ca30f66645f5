#include "blockbench/experiment.hpp"

#include <algorithm>
#include <utility>
#include <stdexcept>
#include <string>

#include "blockbench/errors.hpp"

namespace blockbench {

namespace {

void require_pairable(std::size_t block_size) {
  if (block_size < 2)
    throw DomainError("block of size " + std::to_string(block_size) +
                      " cannot hold both treatment arms");
}

}  // namespace

Assignment balanced_block_randomize(const Blocking& blocking, const StreamRng& rng) {
  std::size_t n = 0;
  for (const auto& b : blocking) {
    require_pairable(b.size());
    for (UnitIndex i : b) n = std::max(n, i + 1);
  }
  if (!validate_blocking(n, blocking).partition())
    throw std::invalid_argument("assignment needs a partition of the units");

  std::vector<std::uint8_t> treated(n, 0);
  std::vector<UnitIndex> members;
  for (std::size_t k = 0; k < blocking.size(); ++k) {
    const Block& b = blocking[k];
    StreamRng r = rng.split(k);
    std::size_t t = b.size() / 2;
    if (b.odd() && r.coin()) ++t;
    members.assign(b.begin(), b.end());
    for (std::size_t j = 0; j < t; ++j) {
      const std::size_t pick = j + static_cast<std::size_t>(r.below(members.size() - j));
      std::swap(members[j], members[pick]);
      treated[members[j]] = 1;
    }
  }
  return Assignment(std::move(treated));
}

Assignment balanced_block_randomize(const Blocking& blocking, std::uint64_t seed) {
  return balanced_block_randomize(blocking, StreamRng(seed));
}

std::vector<double> observe(const Assignment& assignment, const PotentialOutcomes& outcomes) {
  const std::size_t n = assignment.size();
  if (outcomes.y0.size() != n || outcomes.y1.size() != n)
    throw std::invalid_argument("potential outcomes and assignment differ in length");
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = assignment.treated(i) ? outcomes.y1[i] : outcomes.y0[i];
  return y;
}

double estimate(const Blocking& blocking, const Assignment& assignment,
                std::span<const double> observed) {
  if (observed.size() != assignment.size())
    throw std::invalid_argument("observed outcomes and assignment differ in length");
  const double n = static_cast<double>(blocking.unit_count());
  double total = 0.0;
  for (const auto& b : blocking) {
    double sum_t = 0.0, sum_c = 0.0;
    std::size_t t = 0;
    for (UnitIndex i : b) {
      if (assignment.treated(i)) {
        sum_t += observed[i];
        ++t;
      } else {
        sum_c += observed[i];
      }
    }
    if (t == 0 || t == b.size())
      throw DomainError("block starting at unit " + std::to_string(b.front() + 1) +
                        " lacks a treated or a control unit");
    const double nb = static_cast<double>(b.size());
    total += nb / n * (sum_t / static_cast<double>(t) - sum_c / (nb - static_cast<double>(t)));
  }
  return total;
}

double expected_inverse_treated(std::size_t block_size) {
  require_pairable(block_size);
  const double nb = static_cast<double>(block_size);
  const double o = static_cast<double>(block_size % 2);
  return 2.0 * nb / (nb * nb - o);
}

double sd_inverse_treated(std::size_t block_size) {
  require_pairable(block_size);
  const double nb = static_cast<double>(block_size);
  const double o = static_cast<double>(block_size % 2);
  return 2.0 * o / (nb * nb - 1.0);
}

}  // namespace blockbench
