#include <doctest.h>

#include <random>

#include "monoreg/error.hpp"
#include "monoreg/order.hpp"

using namespace monoreg;

TEST_CASE("leq_sigma examples") {
  CHECK(leq_sigma(std::vector<double>{1, 5}, std::vector<double>{2, 5}, Signature({1, 0})));
  CHECK_FALSE(leq_sigma(std::vector<double>{1, 5}, std::vector<double>{2, 6}, Signature({1, 0})));
  CHECK(leq_sigma(std::vector<double>{3, 1}, std::vector<double>{1, 4}, Signature({-1, 1})));
  CHECK_THROWS_AS(leq_sigma(std::vector<double>{1}, std::vector<double>{1, 2}, Signature({1, 1})),
                  DimensionError);
}

TEST_CASE("partial order axioms on random triples") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coord(0, 2), dir(-1, 1);
  for (int t = 0; t < 2000; ++t) {
    const Signature sig({dir(rng), dir(rng), dir(rng)});
    std::vector<double> x(3), y(3), z(3);
    for (int i = 0; i < 3; ++i) {
      x[i] = coord(rng);
      y[i] = coord(rng);
      z[i] = coord(rng);
    }
    CHECK(leq_sigma(x, x, sig));
    if (leq_sigma(x, y, sig) && leq_sigma(y, x, sig)) CHECK(x == y);
    if (leq_sigma(x, y, sig) && leq_sigma(y, z, sig)) CHECK(leq_sigma(x, z, sig));
  }
}

TEST_CASE("signature parsing") {
  CHECK(Signature::parse("+1,0,-1").dirs() == std::vector<int>{1, 0, -1});
  CHECK(Signature::parse("+,-").dirs() == std::vector<int>{1, -1});
  CHECK(Signature::parse("+1,0,-1").to_string() == "+1,0,-1");
  CHECK_THROWS(Signature::parse("2"));
  CHECK_THROWS(Signature::parse(""));
  CHECK_THROWS(Signature(std::vector<int>{}));
  const Signature s = Signature::parse("0,-1,1");
  CHECK(s.active_axes() == std::vector<std::size_t>{1, 2});
  CHECK(s.free_axes() == std::vector<std::size_t>{0});
  CHECK(s.restricted_to_active().dirs() == std::vector<int>{-1, 1});
  CHECK(s.negated().dirs() == std::vector<int>{0, 1, -1});
}

TEST_CASE("is_monotone examples") {
  CHECK(is_monotone(std::vector<double>{1, 2, 3}, Lattice({3}), Signature({1})));
  CHECK_FALSE(is_monotone(std::vector<double>{1, 3, 2}, Lattice({3}), Signature({1})));
  CHECK_FALSE(is_monotone(std::vector<double>{0, 1, 1, 0}, Lattice({2, 2}), Signature({1, 1})));
}

TEST_CASE("covering pairs examples") {
  using P = std::vector<CoveringPair>;
  CHECK(covering_pairs(Lattice({3}), Signature({1})) == P{{0, 1}, {1, 2}});
  const P both = covering_pairs(Lattice({2, 2}), Signature({1, 1}));
  CHECK(both.size() == 4);
  for (const auto& [lo, hi] : both) CHECK((hi == lo + 1 || hi == lo + 2));
  const P first = covering_pairs(Lattice({2, 2}), Signature({1, 0}));
  CHECK(first == P{{0, 2}, {1, 3}});
  CHECK(covering_pairs(Lattice({3}), Signature({-1})) == P{{1, 0}, {2, 1}});
}

TEST_CASE("covering pairs generate the order") {
  const Lattice lat({3, 2, 2});
  for (const Signature& sig : {Signature({1, -1, 0}), Signature({-1, 1, 1}), Signature({0, 0, 1})}) {
    const std::size_t n = lat.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) reach[i][i] = true;
    for (const auto& [lo, hi] : covering_pairs(lat, sig)) reach[lo][hi] = true;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (reach[i][k] && reach[k][j]) reach[i][j] = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) CHECK(reach[i][j] == leq_sigma(lat.multi(i), lat.multi(j), sig));
  }
}

namespace {

// All closed subsets by brute force over every subset.
std::size_t brute_force_upper_count(const Lattice& lat, const Signature& sig) {
  const std::size_t n = lat.size();
  std::size_t count = 0;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    IndexSet s{IndexSet::Kind::Upper, std::vector<bool>(n)};
    for (std::size_t i = 0; i < n; ++i) s.mask[i] = (m >> i) & 1;
    if (s.is_closed(lat, sig)) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("upper set enumeration examples") {
  const auto two = enumerate_upper_sets(Lattice({2}), Signature({1}));
  CHECK(two.size() == 3);
  CHECK(brute_force_upper_count(Lattice({2, 2}), Signature({1, 1})) == 6);
  CHECK(enumerate_upper_sets(Lattice({2, 2}), Signature({1, 1})).size() == 6);
  for (std::size_t n = 1; n <= 10; ++n) CHECK(enumerate_upper_masks(Lattice({n}), Signature({1})).size() == n + 1);
}

TEST_CASE("enumeration matches brute force and is duplicate free") {
  const std::vector<std::pair<Lattice, Signature>> cases = {
      {Lattice({3, 3}), Signature({1, 1})},   {Lattice({2, 2, 2}), Signature({1, -1, 1})},
      {Lattice({4, 3}), Signature({-1, 0})},  {Lattice({2, 3, 2}), Signature({0, 1, -1})},
      {Lattice({5}), Signature({0})},
  };
  for (const auto& [lat, sig] : cases) {
    auto masks = enumerate_upper_masks(lat, sig);
    const std::size_t count = masks.size();
    std::sort(masks.begin(), masks.end());
    CHECK(std::unique(masks.begin(), masks.end()) == masks.end());
    CHECK(count == brute_force_upper_count(lat, sig));
  }
}

TEST_CASE("lower sets are complements of upper sets") {
  const Lattice lat({3, 2});
  const Signature sig({1, -1});
  const auto lowers = enumerate_lower_sets(lat, sig);
  const auto uppers = enumerate_upper_sets(lat, sig);
  CHECK(lowers.size() == uppers.size());
  for (const auto& l : lowers) {
    CHECK(l.kind == IndexSet::Kind::Lower);
    CHECK(l.is_closed(lat, sig));
    const IndexSet u = l.complement();
    CHECK(u.kind == IndexSet::Kind::Upper);
    CHECK(u.is_closed(lat, sig));
  }
}

TEST_CASE("enumeration cap") {
  CHECK(enumeration_point_limit(kDefaultEnumerationCap) == 20);
  CHECK_THROWS_AS(enumerate_upper_masks(Lattice({21}), Signature({1})), EnumerationLimitError);
  CHECK_NOTHROW(enumerate_upper_masks(Lattice({20}), Signature({1})));
  CHECK_THROWS_AS(enumerate_upper_masks(Lattice({4, 4}), Signature({1, 1}), 1 << 10), EnumerationLimitError);
}

TEST_CASE("monotonicity dualities") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> dir(-1, 1);
  const Lattice lat({3, 2, 2});
  for (int t = 0; t < 500; ++t) {
    const Signature sig({dir(rng), dir(rng), dir(rng)});
    std::vector<double> g(lat.size());
    // Mostly monotone candidates: sorted by a random linear order plus noise.
    for (std::size_t p = 0; p < g.size(); ++p) {
      const auto idx = lat.multi(p);
      g[p] = sig[0] * double(idx[0]) + sig[1] * double(idx[1]) + sig[2] * double(idx[2]) + (u(rng) < 0.3 ? u(rng) : 0.0);
    }
    std::vector<double> neg(g.size());
    for (std::size_t p = 0; p < g.size(); ++p) neg[p] = -g[p];
    const bool mono = is_monotone(g, lat, sig);
    CHECK(mono == is_monotone(neg, lat, sig.negated()));

    // Slices along free axes.
    bool slices = true;
    for (const auto& [lo, hi] : covering_pairs(lat, sig)) slices = slices && g[lo] <= g[hi];
    CHECK(mono == slices);
  }
}

TEST_CASE("topological order is a linear extension") {
  const Lattice lat({3, 4});
  for (const Signature& sig : {Signature({1, -1}), Signature({-1, -1}), Signature({0, 1})}) {
    const auto order = topological_order(lat, sig);
    std::vector<std::size_t> pos(lat.size());
    for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;
    for (const auto& [lo, hi] : covering_pairs(lat, sig)) CHECK(pos[lo] < pos[hi]);
  }
}
