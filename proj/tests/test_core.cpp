#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "blockbench/core.hpp"

using namespace blockbench;

TEST_CASE("blocking canonical form ignores block and member order") {
  const Blocking a(std::vector<std::vector<UnitIndex>>{{3, 2}, {1, 0, 4}});
  const Blocking b(std::vector<std::vector<UnitIndex>>{{0, 4, 1}, {2, 3}});
  CHECK(a == b);
  CHECK(a[0].members() == std::vector<UnitIndex>{0, 1, 4});
  CHECK(a.size() == 2);
  CHECK(a.unit_count() == 5);
  CHECK(a.mean_block_size() == doctest::Approx(2.5));
}

TEST_CASE("from_labels groups units by label") {
  const std::vector<std::uint32_t> labels{0, 1, 0, 2, 1};
  const Blocking b = Blocking::from_labels(labels);
  CHECK(b == Blocking(std::vector<std::vector<UnitIndex>>{{0, 2}, {1, 4}, {3}}));
  const auto of = b.block_of(5);
  CHECK(of == std::vector<std::size_t>{0, 1, 0, 2, 1});
  CHECK(Blocking::single_block(3)[0].members() == std::vector<UnitIndex>{0, 1, 2});
}

TEST_CASE("empty block is rejected") {
  CHECK_THROWS_AS(Block(std::vector<UnitIndex>{}), std::invalid_argument);
}

TEST_CASE("sample validation") {
  CHECK_THROWS_AS(Sample(std::vector<Unit>{}), std::invalid_argument);
  CHECK_THROWS_AS(Sample({Unit{"a", {1.0}}, Unit{"a", {2.0}}}), std::invalid_argument);
  CHECK_THROWS_AS(Sample({Unit{"a", {1.0}}, Unit{"b", {2.0, 3.0}}}), std::invalid_argument);
  CHECK_THROWS_AS(Sample({Unit{"a", {std::numeric_limits<double>::quiet_NaN()}}}),
                  std::invalid_argument);
  const Sample s = Sample::from_rows({{1, 2}, {3, 4}});
  CHECK(s.size() == 2);
  CHECK(s.dimension() == 2);
  CHECK(s[1].id == "2");
  CHECK(s.column(1) == std::vector<double>{2, 4});
}

TEST_CASE("validate_blocking reports every violation") {
  SUBCASE("valid partition") {
    const Blocking b(std::vector<std::vector<UnitIndex>>{{0, 1}, {2, 3}});
    const auto r = validate_blocking(4, b, DesignSpec{Method::FixedSized, 2, {}, {}});
    CHECK(r.valid());
    CHECK(r.messages.empty());
  }
  SUBCASE("uncovered and duplicated units") {
    const Blocking b(std::vector<std::vector<UnitIndex>>{{0, 1}, {1, 2}});
    const auto r = validate_blocking(4, b);
    CHECK_FALSE(r.partition());
    CHECK(r.uncovered == std::vector<UnitIndex>{3});
    CHECK(r.duplicated == std::vector<UnitIndex>{1});
    CHECK(r.messages.size() == 2);
  }
  SUBCASE("out of range") {
    const Blocking b(std::vector<std::vector<UnitIndex>>{{0, 1, 5}});
    CHECK_FALSE(validate_blocking(2, b).indices_in_range);
  }
  SUBCASE("size constraints") {
    const Blocking b(std::vector<std::vector<UnitIndex>>{{0, 1, 2}, {3}});
    const auto t = validate_blocking(4, b, DesignSpec{Method::Threshold, 2, {}, {}});
    CHECK(t.partition());
    CHECK_FALSE(t.valid());
    CHECK(t.size_constraint == false);
    const auto c = validate_blocking(4, b, DesignSpec{Method::Complete, 2, {}, {}});
    CHECK_FALSE(c.valid());
    CHECK(validate_blocking(4, Blocking::single_block(4), DesignSpec{Method::Complete, 2, {}, {}})
              .valid());
  }
}

TEST_CASE("assignment counts treated per block") {
  const Assignment a({1, 0, 1, 1});
  CHECK(a.treated_count(Block({0, 1, 2})) == 2);
  CHECK(a.treated(3));
}

TEST_CASE("constant-effect outcome model") {
  const auto m = OutcomeModel::with_constant_effect(
      [](std::span<const double> x) { return 2 * x[0]; }, [](std::span<const double>) { return 3.0; },
      1.5);
  const std::vector<double> x{2.0};
  CHECK(m.mean_control(x) == 4.0);
  CHECK(m.mean_treated(x) == 5.5);
  CHECK(m.mu1(x) == 5.5);
  CHECK(m.variance(x) == 9.0);
}
