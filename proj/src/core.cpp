#include "blockbench/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "blockbench/errors.hpp"

namespace blockbench {

Sample::Sample(std::vector<Unit> units) : units_(std::move(units)) {
  if (units_.empty()) throw std::invalid_argument("sample must contain at least one unit");
  const std::size_t dim = units_.front().covariates.size();
  std::unordered_set<std::string> ids;
  for (const auto& u : units_) {
    if (u.covariates.size() != dim)
      throw std::invalid_argument("unit '" + u.id + "' has " +
                                  std::to_string(u.covariates.size()) +
                                  " covariates, expected " + std::to_string(dim));
    for (double v : u.covariates)
      if (!std::isfinite(v))
        throw std::invalid_argument("unit '" + u.id + "' has a non-finite covariate");
    if (!ids.insert(u.id).second) throw std::invalid_argument("duplicate unit id '" + u.id + "'");
  }
}

Sample Sample::from_rows(const std::vector<std::vector<double>>& rows) {
  std::vector<Unit> units;
  units.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    units.push_back(Unit{std::to_string(i + 1), rows[i]});
  return Sample(std::move(units));
}

Sample Sample::from_scalars(std::span<const double> x) {
  std::vector<Unit> units;
  units.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) units.push_back(Unit{std::to_string(i + 1), {x[i]}});
  return Sample(std::move(units));
}

std::vector<double> Sample::column(std::size_t k) const {
  std::vector<double> out;
  out.reserve(units_.size());
  for (const auto& u : units_) out.push_back(u.covariates.at(k));
  return out;
}

Block::Block(std::vector<UnitIndex> members) : members_(std::move(members)) {
  if (members_.empty()) throw std::invalid_argument("a block must be non-empty");
  std::sort(members_.begin(), members_.end());
}

Blocking::Blocking(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  std::sort(blocks_.begin(), blocks_.end());
}

Blocking::Blocking(const std::vector<std::vector<UnitIndex>>& blocks) {
  blocks_.reserve(blocks.size());
  for (const auto& b : blocks) blocks_.emplace_back(b);
  std::sort(blocks_.begin(), blocks_.end());
}

Blocking Blocking::from_labels(std::span<const std::uint32_t> labels) {
  std::vector<std::vector<UnitIndex>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= groups.size()) groups.resize(labels[i] + 1);
    groups[labels[i]].push_back(i);
  }
  std::vector<Block> blocks;
  blocks.reserve(groups.size());
  for (auto& g : groups)
    if (!g.empty()) blocks.emplace_back(std::move(g));
  return Blocking(std::move(blocks));
}

Blocking Blocking::single_block(std::size_t n) {
  std::vector<UnitIndex> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  return Blocking(std::vector<Block>{Block(std::move(all))});
}

std::size_t Blocking::unit_count() const noexcept {
  std::size_t total = 0;
  for (const auto& b : blocks_) total += b.size();
  return total;
}

double Blocking::mean_block_size() const noexcept {
  return blocks_.empty() ? 0.0
                         : static_cast<double>(unit_count()) / static_cast<double>(blocks_.size());
}

std::vector<std::size_t> Blocking::block_of(std::size_t n) const {
  std::vector<std::size_t> out(n, blocks_.size());
  for (std::size_t k = 0; k < blocks_.size(); ++k)
    for (UnitIndex i : blocks_[k])
      if (i < n) out[i] = k;
  return out;
}

ValidityReport validate_blocking(const Sample& sample, const Blocking& blocking,
                                 const std::optional<DesignSpec>& design) {
  return validate_blocking(sample.size(), blocking, design);
}

ValidityReport validate_blocking(std::size_t n, const Blocking& blocking,
                                 const std::optional<DesignSpec>& design) {
  ValidityReport report;
  std::vector<int> seen(n, 0);
  for (const auto& b : blocking) {
    // Block's constructor forbids empty blocks; kept for reports built from raw data.
    if (b.size() == 0) report.blocks_non_empty = false;
    for (UnitIndex i : b) {
      if (i >= n) {
        report.indices_in_range = false;
        report.messages.push_back("unit index " + std::to_string(i + 1) + " out of range");
        continue;
      }
      if (++seen[i] == 2) {
        report.pairwise_disjoint = false;
        report.duplicated.push_back(i);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (seen[i] == 0) report.uncovered.push_back(i);
  report.covers_all_units = report.uncovered.empty();
  if (!report.covers_all_units) {
    std::string msg = "uncovered units:";
    for (auto i : report.uncovered) msg += " " + std::to_string(i + 1);
    report.messages.push_back(msg);
  }
  if (!report.pairwise_disjoint) {
    std::string msg = "units in more than one block:";
    for (auto i : report.duplicated) msg += " " + std::to_string(i + 1);
    report.messages.push_back(msg);
  }

  if (design && design->method != Method::Complete) {
    bool ok = true;
    for (const auto& b : blocking) {
      const bool fits = design->method == Method::FixedSized ? b.size() == design->size
                                                             : b.size() >= design->size;
      if (!fits) {
        ok = false;
        report.messages.push_back("block starting at unit " + std::to_string(b.front() + 1) +
                                  " has size " + std::to_string(b.size()) +
                                  (design->method == Method::FixedSized ? " != " : " < ") +
                                  std::to_string(design->size));
      }
    }
    report.size_constraint = ok;
  } else if (design) {
    const bool ok = blocking.size() == 1;
    if (!ok) report.messages.push_back("complete randomization requires a single block");
    report.size_constraint = ok;
  }
  return report;
}

std::size_t Assignment::treated_count(const Block& block) const {
  std::size_t t = 0;
  for (UnitIndex i : block) t += treated_.at(i) != 0 ? 1 : 0;
  return t;
}

OutcomeModel OutcomeModel::with_constant_effect(CovariateFunction mu0, CovariateFunction sd,
                                                double delta) {
  OutcomeModel m;
  m.mu0 = mu0;
  m.mu1 = [mu0, delta](std::span<const double> x) { return mu0(x) + delta; };
  m.conditional_sd = std::move(sd);
  m.constant_effect = delta;
  return m;
}

double OutcomeModel::mean_treated(std::span<const double> x) const {
  if (constant_effect) return mu0(x) + *constant_effect;
  return mu1(x);
}

}  // namespace blockbench
