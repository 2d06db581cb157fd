#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "monoreg/error.hpp"
#include "monoreg/grid_io.hpp"

using namespace monoreg;
namespace fs = std::filesystem;

namespace {

GridFile parse(const std::string& csv, const std::string& sidecar) {
  std::istringstream in(csv);
  return parse_grid(in, sidecar);
}

const std::string kSidecar1d = grid_sidecar(dyadic_grid(Box::unit(1), 2), Signature({1}));

}  // namespace

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("csv and sidecar round-trip") {
  const GridSpec g(Box({0, -1}, {2, 1}), {{0, 0.5, 2}, {-1, 0, 0.25, 1}});
  const GridFunction v(g, {0.1, -2, 3e-17, 1.0 / 3.0, 5, 6});
  const GridFunction w(g, {1, 2, 3, 4, 5, 6});
  const GridFile back = parse(grid_csv(v, &w), grid_sidecar(g, Signature({1, -1})));
  CHECK(back.values.grid == g);
  CHECK(back.values.values == v.values);
  REQUIRE(back.weights.has_value());
  CHECK(back.weights->values == w.values);
  CHECK(back.signature == Signature({1, -1}));
}

TEST_CASE("rows may arrive in any order") {
  const GridFile f = parse("i1,value\n2,3\n0,1\n3,4\n1,2\n", kSidecar1d);
  CHECK(f.values.values == std::vector<double>{1, 2, 3, 4});
  CHECK_FALSE(f.weights.has_value());
}

TEST_CASE("malformed files carry line numbers") {
  auto line_of = [](const std::string& csv, const std::string& sidecar) -> std::size_t {
    try {
      parse(csv, sidecar);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 9999;
  };
  CHECK(line_of("i1,value\n0,1\n1,2\n3,4\n", kSidecar1d) == 5);           // missing index 2, reported at EOF
  CHECK(line_of("i1,value\n0,1\n1,x\n2,3\n3,4\n", kSidecar1d) == 3);      // bad number
  CHECK(line_of("i1,value\n0,1\n0,2\n2,3\n3,4\n", kSidecar1d) == 3);      // duplicate
  CHECK(line_of("i1,value\n0,1\n1,2\n2,3\n7,4\n", kSidecar1d) == 5);      // out of range
  CHECK(line_of("i1,value\n0,1\n1,2,5\n2,3\n3,4\n", kSidecar1d) == 3);    // extra column
  CHECK(line_of("i2,value\n0,1\n1,2\n2,3\n3,4\n", kSidecar1d) == 1);      // bad header
  CHECK(line_of("i1,value,weight\n0,1,1\n1,2,0\n2,3,1\n3,4,1\n", kSidecar1d) == 3);  // weight <= 0
  CHECK_THROWS_AS(parse("i1,value\n0,1\n", "{not json"), ParseError);
}

TEST_CASE("files are written through a temporary and read back") {
  const fs::path dir = fs::temp_directory_path() / "monoreg_io_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const GridSpec g = dyadic_grid(Box::unit(2), 1);
  const GridFunction v(g, {4, 3, 2, 1});
  write_grid(dir / "a.csv", v, nullptr, Signature({1, 0}));
  CHECK(fs::exists(dir / "a.json"));
  CHECK(sidecar_path(dir / "a.csv") == dir / "a.json");
  const GridFile back = read_grid(dir / "a.csv");
  CHECK(back.values.values == v.values);
  CHECK(back.signature == Signature({1, 0}));
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
  CHECK(entries == 2);
  fs::remove_all(dir);
}
