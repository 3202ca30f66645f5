#include "blockbench/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "blockbench/errors.hpp"

namespace blockbench {

namespace {

std::size_t rule_size(const SizeRule& rule) {
  return rule.kind == SizeRule::Kind::Any ? 1 : rule.size;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  return __builtin_add_overflow(a, b, &r) ? std::numeric_limits<std::uint64_t>::max() : r;
}

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  return __builtin_mul_overflow(a, b, &r) ? std::numeric_limits<std::uint64_t>::max() : r;
}

}  // namespace

SizeRule size_rule(const DesignSpec& design, std::size_t n) {
  switch (design.method) {
    case Method::Complete: return SizeRule::exactly(n);
    case Method::FixedSized: return SizeRule::exactly(design.size);
    case Method::Threshold: return SizeRule::at_least(design.size);
  }
  return SizeRule::any();
}

BlockingIterator::BlockingIterator(std::size_t n, SizeRule rule, std::vector<std::uint32_t> prefix)
    : BlockingIterator(n, rule, std::move(prefix), n) {}

BlockingIterator::BlockingIterator(std::size_t n, SizeRule rule, std::vector<std::uint32_t> prefix,
                                   std::size_t stop_at)
    : n_(n), stop_(stop_at), rule_(rule), prefix_(std::move(prefix)) {
  if (n_ == 0) throw std::invalid_argument("enumeration requires n >= 1");
  if (rule_.kind != SizeRule::Kind::Any && rule_.size == 0)
    throw std::invalid_argument("block size requirement must be positive");
  if (prefix_.size() > stop_) throw std::invalid_argument("label prefix longer than the sample");
  labels_.assign(stop_, 0);
  sizes_.assign(n_ + 1, 0);
}

bool BlockingIterator::feasible_with(std::size_t pos, std::uint32_t label) const noexcept {
  const std::size_t s = rule_size(rule_);
  std::size_t deficit = deficit_;
  if (label < blocks_open_) {
    if (rule_.kind == SizeRule::Kind::Exactly && sizes_[label] + 1 > s) return false;
    if (sizes_[label] < s) --deficit;
  } else {
    deficit += s - 1;
  }
  const std::size_t remaining = n_ - pos - 1;
  if (deficit > remaining) return false;
  if (rule_.kind == SizeRule::Kind::Exactly && (remaining - deficit) % s != 0) return false;
  return true;
}

void BlockingIterator::assign(std::size_t pos, std::uint32_t label) noexcept {
  const std::size_t s = rule_size(rule_);
  if (label == blocks_open_) {
    ++blocks_open_;
    deficit_ += s - 1;
  } else if (sizes_[label] < s) {
    --deficit_;
  }
  ++sizes_[label];
  labels_[pos] = label;
}

void BlockingIterator::unassign(std::size_t pos) noexcept {
  const std::size_t s = rule_size(rule_);
  const std::uint32_t label = labels_[pos];
  --sizes_[label];
  if (sizes_[label] == 0) {
    --blocks_open_;
    deficit_ -= s - 1;
  } else if (sizes_[label] < s) {
    ++deficit_;
  }
}

bool BlockingIterator::load_prefix() {
  for (std::size_t i = 0; i < prefix_.size(); ++i) {
    const std::uint32_t label = prefix_[i];
    if (label > blocks_open_ || !feasible_with(i, label)) return false;
    assign(i, label);
  }
  return true;
}

bool BlockingIterator::advance() {
  if (done_) return false;
  const std::size_t fixed = prefix_.size();
  std::size_t i;
  std::uint32_t candidate = 0;
  if (!started_) {
    started_ = true;
    if (!load_prefix()) {
      done_ = true;
      return false;
    }
    if (fixed == stop_) return true;
    i = fixed;
  } else {
    if (fixed == stop_) {
      done_ = true;
      return false;
    }
    i = stop_ - 1;
    candidate = labels_[i] + 1;
    unassign(i);
  }

  while (true) {
    bool placed = false;
    for (std::uint32_t c = candidate; c <= blocks_open_; ++c) {
      if (feasible_with(i, c)) {
        assign(i, c);
        placed = true;
        break;
      }
    }
    if (placed) {
      if (i + 1 == stop_) return true;
      ++i;
      candidate = 0;
      continue;
    }
    if (i == fixed) {
      done_ = true;
      return false;
    }
    --i;
    candidate = labels_[i] + 1;
    unassign(i);
  }
}

std::optional<Blocking> BlockingIterator::next() {
  if (!advance()) return std::nullopt;
  return Blocking::from_labels(labels_);
}

std::vector<std::vector<std::uint32_t>> BlockingIterator::prefixes(std::size_t n, SizeRule rule,
                                                                   std::size_t depth) {
  depth = std::min(depth, n);
  BlockingIterator it(n, rule, {}, depth);
  std::vector<std::vector<std::uint32_t>> out;
  while (it.advance()) out.push_back(it.labels());
  return out;
}

std::uint64_t count_blockings(std::size_t n, SizeRule rule) {
  if (n == 0) throw std::invalid_argument("count_blockings requires n >= 1");
  // pascal[m][k] = C(m, k), saturating
  std::vector<std::vector<std::uint64_t>> pascal(n, std::vector<std::uint64_t>(n, 0));
  for (std::size_t m = 0; m < n; ++m) {
    pascal[m][0] = 1;
    for (std::size_t k = 1; k <= m; ++k)
      pascal[m][k] = sat_add(pascal[m - 1][k - 1], k <= m - 1 ? pascal[m - 1][k] : 0);
  }
  std::vector<std::uint64_t> a(n + 1, 0);
  a[0] = 1;
  for (std::size_t m = 1; m <= n; ++m) {
    std::uint64_t total = 0;
    for (std::size_t k = 1; k <= m; ++k) {
      if (!rule.admits(k)) continue;
      total = sat_add(total, sat_mul(pascal[m - 1][k - 1], a[m - k]));
    }
    a[m] = total;
  }
  return a[n];
}

BlockingIterator enumerate_blockings(std::size_t n, SizeRule rule, std::uint64_t ceiling) {
  const std::uint64_t predicted = count_blockings(n, rule);
  if (predicted > ceiling) {
    std::ostringstream msg;
    msg << "enumerating " << predicted << " blockings of n=" << n
        << " exceeds the ceiling of " << ceiling
        << "; use the 1-D dynamic program or raise the ceiling";
    throw ResourceLimitExceeded(msg.str(), predicted, ceiling);
  }
  return BlockingIterator(n, rule);
}

std::vector<PatternClass> covariate_pattern_classes(const Sample& sample, SizeRule rule,
                                                    std::uint64_t ceiling) {
  for (const auto& u : sample.units())
    for (double v : u.covariates)
      if (v != std::floor(v))
        throw DomainError("covariate pattern classes need discrete covariates; unit '" + u.id +
                          "' has a continuous value");

  using Row = std::vector<double>;
  using Pattern = std::vector<std::vector<Row>>;
  std::map<Pattern, std::size_t> index;
  std::vector<PatternClass> classes;

  auto it = enumerate_blockings(sample.size(), rule, ceiling);
  std::vector<std::vector<Row>> blocks;
  while (it.advance()) {
    const auto& labels = it.labels();
    blocks.assign(it.block_count(), {});
    for (std::size_t i = 0; i < labels.size(); ++i) blocks[labels[i]].push_back(sample[i].covariates);
    for (auto& b : blocks) std::sort(b.begin(), b.end(), std::greater<>());
    std::sort(blocks.begin(), blocks.end(), std::greater<>());

    auto [pos, inserted] = index.try_emplace(blocks, classes.size());
    if (inserted) classes.push_back(PatternClass{blocks, Blocking::from_labels(labels), 0});
    ++classes[pos->second].multiplicity;
  }
  return classes;
}

std::string pattern_string(const std::vector<std::vector<std::vector<double>>>& pattern) {
  std::ostringstream os;
  auto value = [&](const std::vector<double>& row) {
    if (row.size() != 1) os << '(';
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) os << ',';
      os << row[k];
    }
    if (row.size() != 1) os << ')';
  };
  os << '{';
  for (std::size_t b = 0; b < pattern.size(); ++b) {
    if (b) os << ',';
    os << '{';
    for (std::size_t i = 0; i < pattern[b].size(); ++i) {
      if (i) os << ',';
      value(pattern[b][i]);
    }
    os << '}';
  }
  os << '}';
  return os.str();
}

}  // namespace blockbench
