#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "blockbench/core.hpp"
#include "blockbench/simulator.hpp"

namespace blockbench {

inline constexpr const char* kSchema = "blockbench/1";

/// Header `id,x1[,x2,...]`, one unit per row, no blank cells.
/// Throws ParseError with the offending line number.
Sample read_sample_csv(std::istream& in);
Sample read_sample_csv(const std::string& path);

struct BlockingRecord {
  Blocking blocking;
  std::vector<std::string> ids;  // unit ids in sample order
};

struct BlockingMeta {
  std::string method;
  std::optional<std::size_t> size;
  std::string objective;
  std::string metric;
  double value = 0.0;
  std::string solver;
};

/// Blocks are written with 1-based unit positions plus the matching ids.
nlohmann::json blocking_to_json(const Blocking& blocking, const std::vector<std::string>& ids,
                                const std::optional<BlockingMeta>& meta = std::nullopt);
/// Throws ParseError on a wrong schema or malformed content.
BlockingRecord blocking_from_json(const nlohmann::json& j);

nlohmann::json assignment_to_json(const Blocking& blocking, const Assignment& assignment,
                                  const std::vector<std::string>& ids, std::uint64_t seed);

nlohmann::json simulation_to_json(const SimulationResult& result);

/// Left-aligned first column, right-aligned others, two spaces apart.
std::string format_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows);

/// Fixed notation with the given number of decimals; "n/a" for NaN.
std::string fmt(double v, int decimals = 4);

std::vector<std::string> unit_ids(const Sample& sample);

}  // namespace blockbench
