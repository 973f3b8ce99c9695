#include <doctest.h>

#include "ldpcq/base_graph.hpp"

using namespace ldpcq;

namespace {
const char* kToy =
    "2 4 2 4\n"
    "0 -1 0 0\n"
    "-1 1 0 -1\n";
}

TEST_CASE("toy asset parses to the expected matrix") {
  BaseGraph bg = parse_base_graph(kToy);
  CHECK(bg.rows == 2);
  CHECK(bg.cols == 4);
  CHECK(bg.info_cols == 2);
  CHECK(bg.at(0, 0) == 0);
  CHECK(bg.at(0, 1) == -1);
  CHECK(bg.at(1, 1) == 1);
  CHECK(bg.punctured_cols.empty());
  CHECK(bg.edge_count() == 5);
}

TEST_CASE("bundled base graph asset loads with 5G dimensions") {
  std::vector<std::string> warnings;
  BaseGraph bg = load_base_graph(std::string(LDPCQ_ASSET_DIR) + "/bg5g_46x68.txt", false,
                                 &warnings);
  CHECK(bg.rows == 46);
  CHECK(bg.cols == 68);
  CHECK(bg.info_cols == 22);
  CHECK(bg.z_max == 384);
  CHECK(bg.punctured_cols == std::vector<int>{0, 1});
  CHECK(warnings.empty());
}

TEST_CASE("out-of-range shift reduces modulo Z_max with a warning") {
  const char* asset =
      "2 4 2 4\n"
      "0 -1 0 4\n"
      "-1 1 0 -1\n";
  std::vector<std::string> warnings;
  BaseGraph bg = parse_base_graph(asset, false, &warnings);
  CHECK(bg.at(0, 3) == 0);  // 4 mod 4
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("reduced") != std::string::npos);
  CHECK_THROWS_AS(parse_base_graph(asset, true), ParseError);
}

TEST_CASE("malformed assets report row/col locations") {
  CHECK_THROWS_WITH_AS(parse_base_graph("2 4 2 4\n0 -1 0\n-1 1 0 -1\n"),
                       doctest::Contains("row 0"), ParseError);
  CHECK_THROWS_AS(parse_base_graph("2 4 2 4\n0 -1 0 0\n"), ParseError);
  CHECK_THROWS_AS(parse_base_graph(""), ParseError);
  CHECK_THROWS_AS(parse_base_graph("2 4 2 4\n0 -1 0 -2\n-1 1 0 -1\n"), ParseError);
}

TEST_CASE("rate adaptation keeps the documented row counts") {
  BaseGraph bg = load_base_graph(std::string(LDPCQ_ASSET_DIR) + "/bg5g_46x68.txt");
  SUBCASE("rate 1/3 keeps the full graph (transmitted length 66Z)") {
    BaseGraph r = rate_adapt(bg, {1, 3});
    CHECK(r.rows == 46);
    CHECK(r.cols == 68);
    CHECK(r.num_transmitted_cols() == 66);
  }
  SUBCASE("rate 2/3 keeps 13 rows: 22/(35-2)") {
    BaseGraph r = rate_adapt(bg, {2, 3});
    CHECK(r.rows == 13);
    CHECK(r.cols == 35);
  }
  SUBCASE("rate 11/12 keeps the 4 core rows") {
    BaseGraph r = rate_adapt(bg, {11, 12});
    CHECK(r.rows == 4);
    CHECK(r.cols == 26);
  }
  SUBCASE("unachievable rates report the range") {
    CHECK_THROWS_WITH_AS(rate_adapt(bg, {1, 10}), doctest::Contains("achievable range"),
                         ParseError);
    CHECK_THROWS_AS(rate_adapt(bg, {99, 100}), ParseError);
  }
  SUBCASE("rate arithmetic: transmitted length is (cols - punctured) * Z for every adaptation") {
    for (auto [num, den] : {std::pair{1L, 3L}, {1L, 2L}, {2L, 3L}, {5L, 6L}, {11L, 12L}}) {
      BaseGraph r = rate_adapt(bg, {num, den});
      CHECK(r.num_transmitted_cols() == r.cols - 2);
      double rt = 22.0 / r.num_transmitted_cols();
      CHECK(std::abs(rt - double(num) / den) < 0.05);
    }
  }
}

TEST_CASE("toy graph at its native rate is the identity adaptation") {
  BaseGraph bg = parse_base_graph(kToy);
  BaseGraph r = rate_adapt(bg, {1, 2});
  CHECK(r.rows == bg.rows);
  CHECK(r.cols == bg.cols);
  CHECK(r.shifts == bg.shifts);
}

TEST_CASE("code hash differs across Z and rate") {
  BaseGraph bg = parse_base_graph(kToy);
  CHECK(code_hash(bg, 4, {1, 2}) != code_hash(bg, 8, {1, 2}));
  CHECK(code_hash(bg, 4, {1, 2}) != code_hash(bg, 4, {1, 3}));
}
