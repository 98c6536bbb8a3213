#include <doctest.h>

#include "crisisflow/csv.hpp"

#include <random>
#include <sstream>

using namespace crisisflow;

TEST_CASE("split_fields keeps empty fields") {
  CHECK(split_fields("a,,b,") == std::vector<std::string>{"a", "", "b", ""});
  CHECK(split_fields("") == std::vector<std::string>{""});
}

TEST_CASE("reader skips comments and blank lines and strips CR") {
  std::istringstream in("# provenance\ncountry_code,year\r\n\nAFG,1990\r\n# note\nAFG,1991\n");
  CsvReader reader(in, {"country_code", "year"});
  auto a = reader.next();
  REQUIRE(a);
  CHECK(a->fields == std::vector<std::string>{"AFG", "1990"});
  CHECK(a->line == 4);
  auto b = reader.next();
  REQUIRE(b);
  CHECK(b->fields[1] == "1991");
  CHECK_FALSE(reader.next());
}

TEST_CASE("reader rejects a wrong header, an empty file and ragged rows") {
  std::istringstream wrong("country,year\n");
  CHECK_THROWS_AS(CsvReader(wrong, {"country_code", "year"}), DataError);
  std::istringstream empty("# only a comment\n");
  CHECK_THROWS_AS(CsvReader(empty, {"country_code", "year"}), DataError);
  std::istringstream ragged("a,b\n1,2,3\n");
  CsvReader reader(ragged, {"a", "b"});
  CHECK_THROWS_AS(reader.next(), DataError);
}

TEST_CASE("numeric parsing is strict") {
  CHECK(parse_int<int>("1990", 1, "year") == 1990);
  CHECK_THROWS_AS(parse_int<int>("19x0", 1, "year"), DataError);
  CHECK_THROWS_AS(parse_int<int>("", 1, "year"), DataError);
  CHECK(parse_double("0.25", 1, "r") == 0.25);
  CHECK(parse_double("1e-3", 1, "r") == 1e-3);
  CHECK_THROWS_AS(parse_double("abc", 1, "r"), DataError);
  CHECK_THROWS_AS(parse_double("0.1 ", 1, "r"), DataError);
}

TEST_CASE("format_double round-trips exactly") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-20, 5);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::pow(10.0, u(rng)) * (i % 2 ? -1 : 1);
    CHECK(parse_double(format_double(x), 1, "x") == x);
  }
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("format_sig uses significant digits") {
  CHECK(format_sig(0.123456789012345, 4) == "0.1235");
  CHECK(format_sig(1234567.0, 3) == "1.23e+06");
}

TEST_CASE("fnv1a matches the published offset basis and test vector") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("provenance line records version, hash and seed") {
  CHECK(provenance_line(0xabcULL, 42) == std::string("# crisisflow ") + kVersion + " config=0000000000000abc seed=42");
}
