#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "blockbench/cli.hpp"
#include "blockbench/errors.hpp"
#include "blockbench/experiment.hpp"
#include "blockbench/io.hpp"

using namespace blockbench;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "blockbench");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = "/tmp/blockbench_test_" + name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("CSV reading") {
  std::istringstream ok("id,x1,x2\na,1,2\nb,3.5,-1\n");
  const Sample s = read_sample_csv(ok);
  CHECK(s.size() == 2);
  CHECK(s[1].id == "b");
  CHECK(s[1].covariates == std::vector<double>{3.5, -1});

  std::istringstream blank("id,x1\na,1\nb,\n");
  try {
    read_sample_csv(blank);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  std::istringstream text("id,x1\na,abc\n");
  CHECK_THROWS_AS(read_sample_csv(text), ParseError);
  std::istringstream dup("id,x1\na,1\na,2\n");
  CHECK_THROWS_AS(read_sample_csv(dup), ParseError);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_sample_csv(empty), ParseError);
  CHECK_THROWS_AS(read_sample_csv(std::string("/nonexistent/file.csv")), ParseError);
}

TEST_CASE("blocking JSON round trip") {
  const Blocking b(std::vector<std::vector<UnitIndex>>{{0, 3}, {1, 2, 4}});
  const std::vector<std::string> ids{"a", "b", "c", "d", "e"};
  const auto j = blocking_to_json(b, ids, BlockingMeta{"threshold", 2, "weighted-average", "euclidean", 0.5, "exhaustive"});
  CHECK(j["schema"] == kSchema);
  CHECK(j["blocks"][0] == nlohmann::json::array({1, 4}));
  const auto rec = blocking_from_json(nlohmann::json::parse(j.dump()));
  CHECK(rec.blocking == b);
  CHECK(rec.ids == ids);

  auto broken = j;
  broken["blocks"] = nlohmann::json::array({nlohmann::json::array({1, 2})});
  CHECK_THROWS_AS(blocking_from_json(broken), ParseError);
  auto wrong = j;
  wrong["schema"] = "other";
  CHECK_THROWS_AS(blocking_from_json(wrong), ParseError);
}

TEST_CASE("assignment JSON lists treated units") {
  const Blocking b = Blocking::single_block(4);
  const Assignment a({1, 0, 0, 1});
  const auto j = assignment_to_json(b, a, {"a", "b", "c", "d"}, 5);
  CHECK(j["seed"] == 5);
  CHECK(j.dump().find("\"a\"") != std::string::npos);
}

TEST_CASE("formatting helpers") {
  CHECK(fmt(1.0 / 3.0, 3) == "0.333");
  CHECK(fmt(std::nan(""), 3) == "n/a");
  const auto t = format_table({"name", "v"}, {{"a", "1.0"}, {"bbb", "22.5"}});
  CHECK(t.find("bbb") != std::string::npos);
  CHECK(t.find("----") != std::string::npos);
}

TEST_CASE("block command") {
  const auto csv = write_temp("six.csv", "id,x\na,1\nb,1\nc,1\nd,0\ne,0\nf,0\n");
  const auto t = cli({"block", csv});
  CHECK(t.code == 0);
  CHECK(t.out.find("a b c") != std::string::npos);

  const auto j = cli({"block", csv, "--method", "fixed", "--format", "json"});
  REQUIRE(j.code == 0);
  const auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["blocks"].size() == 3);
  const auto saved = write_temp("six.json", j.out);
  const auto a = cli({"assign", saved, "--seed", "3"});
  CHECK(a.code == 0);
  CHECK(a.out == cli({"assign", saved, "--seed", "3"}).out);
}

TEST_CASE("block command exit codes") {
  const auto five = write_temp("five.csv", "id,x\na,1\nb,2\nc,3\nd,4\ne,5\n");
  const auto r = cli({"block", five, "--method", "fixed"});
  CHECK(r.code == 2);
  CHECK(r.err.find("not a multiple of 2") != std::string::npos);

  std::string big = "id,x,y\n";
  for (int i = 0; i < 12; ++i) big += "u" + std::to_string(i) + "," + std::to_string(i) + ",1\n";
  const auto twelve = write_temp("twelve.csv", big);
  CHECK(cli({"block", twelve}).code == 3);
  CHECK(cli({"block", twelve, "--max-blockings", "1000000"}).code == 0);

  CHECK(cli({"block", "/nonexistent.csv"}).code == 1);
  const auto bad = write_temp("bad.csv", "id,x\na,1\nb,\n");
  CHECK(cli({"block", bad}).code == 1);
  CHECK(cli({"block", five, "--method", "nonsense"}).code == 1);
  CHECK(cli({}).code == 1);
}

TEST_CASE("variance and simulate commands") {
  const auto t = cli({"variance", "--preset", "six-unit"});
  CHECK(t.code == 0);
  CHECK(t.out.find("1.185") != std::string::npos);
  const auto c = cli({"variance", "--preset", "pairing", "--delta2", "1"});
  CHECK(c.out.find("0.133333") != std::string::npos);
  CHECK(cli({"variance", "--preset", "closed-forms", "--n", "5"}).code == 2);
  CHECK(cli({"variance", "--preset", "decomposition", "--n", "8"}).code == 0);
  const auto s = cli({"simulate", "--n", "6", "--samples", "50", "--reps", "2", "--format", "json"});
  CHECK(s.code == 0);
  CHECK(nlohmann::json::parse(s.out).contains("designs"));
  CHECK(cli({"simulate", "--n", "7"}).code == 2);
}
