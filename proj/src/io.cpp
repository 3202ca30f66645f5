#include "blockbench/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

#include "blockbench/errors.hpp"

namespace blockbench {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

}  // namespace

Sample read_sample_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) {
      header = split_csv(line);
      break;
    }
  }
  if (header.empty()) throw ParseError("empty CSV input");
  if (header.size() < 2 || header[0] != "id")
    throw ParseError(at_line(lineno) + "header must be id,x1[,x2,...]");

  std::vector<Unit> units;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size())
      throw ParseError(at_line(lineno) + "expected " + std::to_string(header.size()) +
                       " cells, found " + std::to_string(cells.size()));
    Unit u;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (cells[k].empty())
        throw ParseError(at_line(lineno) + "blank cell in column '" + header[k] + "'");
    }
    u.id = cells[0];
    for (std::size_t k = 1; k < cells.size(); ++k) {
      const std::string& c = cells[k];
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (ec != std::errc() || ptr != c.data() + c.size() || !std::isfinite(v))
        throw ParseError(at_line(lineno) + "not a finite number in column '" + header[k] +
                         "': " + c);
      u.covariates.push_back(v);
    }
    units.push_back(std::move(u));
  }
  if (units.empty()) throw ParseError("CSV has a header but no units");
  try {
    return Sample(std::move(units));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

Sample read_sample_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_sample_csv(in);
}

std::vector<std::string> unit_ids(const Sample& sample) {
  std::vector<std::string> ids;
  for (const auto& u : sample.units()) ids.push_back(u.id);
  return ids;
}

nlohmann::json blocking_to_json(const Blocking& blocking, const std::vector<std::string>& ids,
                                const std::optional<BlockingMeta>& meta) {
  nlohmann::json j;
  j["schema"] = kSchema;
  j["kind"] = "blocking";
  j["n"] = ids.size();
  j["ids"] = ids;
  auto& blocks = j["blocks"] = nlohmann::json::array();
  auto& block_ids = j["block_ids"] = nlohmann::json::array();
  for (const auto& b : blocking) {
    nlohmann::json pos = nlohmann::json::array(), names = nlohmann::json::array();
    for (UnitIndex i : b) {
      pos.push_back(i + 1);
      names.push_back(i < ids.size() ? ids[i] : std::to_string(i + 1));
    }
    blocks.push_back(std::move(pos));
    block_ids.push_back(std::move(names));
  }
  if (meta) {
    j["design"] = {{"method", meta->method}};
    if (meta->size) j["design"]["size"] = *meta->size;
    j["objective"] = {{"kind", meta->objective}, {"metric", meta->metric}, {"value", meta->value}};
    j["solver"] = meta->solver;
  }
  return j;
}

BlockingRecord blocking_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object() || j.value("schema", "") != kSchema)
      throw ParseError(std::string("expected a JSON object with schema \"") + kSchema + "\"");
    if (j.value("kind", "") != "blocking") throw ParseError("JSON document is not a blocking");
    const auto ids = j.at("ids").get<std::vector<std::string>>();
    std::vector<std::vector<UnitIndex>> blocks;
    for (const auto& b : j.at("blocks")) {
      std::vector<UnitIndex> members;
      for (const auto& v : b) {
        const auto p = v.get<long long>();
        if (p < 1 || static_cast<std::size_t>(p) > ids.size())
          throw ParseError("unit position " + std::to_string(p) + " out of range");
        members.push_back(static_cast<UnitIndex>(p - 1));
      }
      if (members.empty()) throw ParseError("empty block in blocking file");
      blocks.push_back(std::move(members));
    }
    BlockingRecord rec{Blocking(blocks), ids};
    const auto report = validate_blocking(ids.size(), rec.blocking);
    if (!report.partition()) {
      std::string msg = "blocking is not a partition";
      for (const auto& m : report.messages) msg += "; " + m;
      throw ParseError(msg);
    }
    return rec;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed blocking JSON: ") + e.what());
  }
}

nlohmann::json assignment_to_json(const Blocking& blocking, const Assignment& assignment,
                                  const std::vector<std::string>& ids, std::uint64_t seed) {
  nlohmann::json j;
  j["schema"] = kSchema;
  j["kind"] = "assignment";
  j["seed"] = seed;
  auto& units = j["units"] = nlohmann::json::array();
  for (std::size_t i = 0; i < assignment.size(); ++i)
    units.push_back({{"position", i + 1},
                     {"id", i < ids.size() ? ids[i] : std::to_string(i + 1)},
                     {"treated", assignment.treated(i) ? 1 : 0}});
  auto& blocks = j["blocks"] = nlohmann::json::array();
  for (const auto& b : blocking) {
    nlohmann::json pos = nlohmann::json::array();
    for (UnitIndex i : b) pos.push_back(i + 1);
    blocks.push_back({{"units", pos}, {"size", b.size()}, {"treated", assignment.treated_count(b)}});
  }
  return j;
}

namespace {

nlohmann::json estimate_json(const MeanEstimate& e) {
  nlohmann::json j;
  j["mean"] = e.mean;
  j["se"] = std::isnan(e.se) ? nlohmann::json(nullptr) : nlohmann::json(e.se);
  return j;
}

}  // namespace

nlohmann::json simulation_to_json(const SimulationResult& r) {
  nlohmann::json j;
  j["schema"] = kSchema;
  j["kind"] = "simulation";
  const auto& c = r.config;
  j["config"] = {{"model", model_name(c.model)}, {"n", c.n},          {"size", c.size},
                 {"samples", c.num_samples},     {"reps", c.reps_per_sample}, {"seed", c.seed}};
  j["population_ate"] = r.population_ate;
  auto& designs = j["designs"] = nlohmann::json::array();
  for (const auto& d : r.designs)
    designs.push_back({{"method", method_name(d.method)},
                       {"objective", estimate_json(d.objective)},
                       {"pate_mse", estimate_json(d.pate)},
                       {"cate_mse", estimate_json(d.cate)},
                       {"sate_mse", estimate_json(d.sate)}});
  auto& ratios = j["ratios_to_threshold"] = nlohmann::json::array();
  for (const auto& q : r.ratios)
    ratios.push_back({{"method", method_name(q.method)},
                      {"objective", q.objective},
                      {"pate", q.pate},
                      {"cate", q.cate},
                      {"sate", q.sate}});
  return j;
}

std::string fmt(double v, int decimals) {
  if (std::isnan(v)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string format_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size(), 0);
  auto widen = [&](const std::vector<std::string>& r) {
    for (std::size_t k = 0; k < r.size() && k < width.size(); ++k)
      width[k] = std::max(width[k], r[k].size());
  };
  widen(header);
  for (const auto& r : rows) widen(r);
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t k = 0; k < width.size(); ++k) {
      const std::string cell = k < r.size() ? r[k] : "";
      const std::string pad(width[k] - cell.size(), ' ');
      if (k) os << "  ";
      os << (k == 0 ? cell + pad : pad + cell);
    }
    os << '\n';
  };
  line(header);
  std::size_t total = 0;
  for (auto w : width) total += w;
  os << std::string(total + 2 * (width.size() - 1), '-') << '\n';
  for (const auto& r : rows) line(r);
  return os.str();
}

}  // namespace blockbench
