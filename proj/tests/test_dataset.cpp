#include <doctest.h>

#include "mbl/dataset.hpp"
#include "mbl/errors.hpp"
#include "mbl/simulate.hpp"

using namespace mbl;

TEST_CASE("subject grouping from rows") {
  SUBCASE("two rows, same duration, nondecreasing time: one subject") {
    const auto data = parse_dataset("1,0,3.5,0.5\n0,1,3.5,1.0\n");
    REQUIRE(data.n_subjects() == 1);
    CHECK(data.n_responses() == 2);
    CHECK(data.subjects()[0].times == std::vector<double>{0.5, 1.0});
    CHECK(data.subjects()[0].duration == 3.5);
  }
  SUBCASE("time reset starts a new subject") {
    const auto data = parse_dataset("1,0,3.5,0.5\n0,1,3.5,1.0\n1,1,3.5,0.5\n");
    REQUIRE(data.n_subjects() == 2);
    CHECK(data.subjects()[0].times.size() == 2);
    CHECK(data.subjects()[1].times.size() == 1);
  }
  SUBCASE("duration change starts a new subject") {
    const auto data = parse_dataset("1,0,2,0.5\n0,1,4,0.5\n");
    CHECK(data.n_subjects() == 2);
  }
  SUBCASE("whitespace-delimited rows and a header are accepted") {
    const auto data = parse_dataset("y1 y2 duration time\n1 0 2 0.5\n0 1 2 1.0\n");
    CHECK(data.n_subjects() == 1);
    CHECK(data.total_observations() == 2);
  }
}

TEST_CASE("parse errors carry the offending row") {
  SUBCASE("non-binary outcome") {
    try {
      parse_dataset("1,0,2,0.5\n2,0,2,0.6\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.row() == 2);
    }
  }
  SUBCASE("time outside [0,1]") {
    try {
      parse_dataset("1,0,2,0.5\n1,0,2,1.5\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.row() == 2);
    }
  }
  SUBCASE("non-positive duration") {
    CHECK_THROWS_AS(parse_dataset("1,0,0,0.5\n"), ParseError);
    CHECK_THROWS_AS(parse_dataset("1,0,-3,0.5\n"), ParseError);
  }
  SUBCASE("ragged rows") {
    try {
      parse_dataset("1,0,2,0.5\n1,0,2\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.row() == 2);
    }
  }
  SUBCASE("too few columns") {
    CHECK_THROWS_AS(parse_dataset("1,0\n"), ParseError);
  }
  SUBCASE("empty input") {
    CHECK_THROWS_AS(parse_dataset(""), ParseError);
    CHECK_THROWS_AS(parse_dataset("y1,duration,time\n"), ParseError);
  }
}

TEST_CASE("save/load round-trip is exact") {
  // durations and times exercise non-terminating binary fractions
  const auto data = simulate_section31(20240817);
  const std::string text = format_dataset(data);
  const auto back = parse_dataset(text);

  REQUIRE(back.n_subjects() == data.n_subjects());
  REQUIRE(back.n_responses() == data.n_responses());
  for (int i = 0; i < data.n_subjects(); ++i) {
    const auto& a = data.subjects()[static_cast<std::size_t>(i)];
    const auto& b = back.subjects()[static_cast<std::size_t>(i)];
    CHECK(a.duration == b.duration);
    CHECK(a.times == b.times);
    CHECK(a.outcomes == b.outcomes);
  }
  // and the serialized forms agree byte for byte
  CHECK(format_dataset(back) == text);
}

TEST_CASE("dataset invariants are enforced") {
  Subject s;
  s.duration = 1.0;
  s.times = {0.5, 0.25};  // decreasing
  s.outcomes = Eigen::MatrixXd::Zero(2, 1);
  CHECK_THROWS_AS(MblDataset({s}), std::invalid_argument);

  s.times = {0.25, 0.5};
  s.outcomes(1, 0) = 0.5;  // non-binary
  CHECK_THROWS_AS(MblDataset({s}), std::invalid_argument);

  s.outcomes(1, 0) = 1.0;
  CHECK_NOTHROW(MblDataset({s}));
}
