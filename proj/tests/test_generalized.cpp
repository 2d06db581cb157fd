#include <doctest.h>

#include <cmath>
#include <random>

#include "monoreg/error.hpp"
#include "monoreg/generalized.hpp"
#include "monoreg/isotonic.hpp"

using namespace monoreg;

TEST_CASE("bregman examples") {
  CHECK(bregman(bregman_spec("square"), 3, 1) == doctest::Approx(4));
  CHECK(bregman(bregman_spec("entropy"), 1, std::exp(1.0)) == doctest::Approx(std::exp(1.0) - 2));
  for (const auto& name : bregman_names()) CHECK(bregman(bregman_spec(name), 0.7, 0.7) == 0);
  CHECK_THROWS_AS(bregman(bregman_spec("entropy"), -1, 1), DomainError);
  CHECK_THROWS_AS(bregman(bregman_spec("neglog"), 1, 0), DomainError);
  CHECK_THROWS(bregman_spec("huber"));
}

TEST_CASE("bregman nonnegativity and three-point identity") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.05, 4);
  for (const auto& name : bregman_names()) {
    const BregmanSpec s = bregman_spec(name);
    for (int t = 0; t < 500; ++t) {
      const double r = u(rng), a = u(rng), b = u(rng);
      CHECK(bregman(s, r, a) >= 0);
      if (r != a) CHECK(bregman(s, r, a) > 0);
      const double lhs = bregman(s, r, b);
      const double rhs = bregman(s, r, a) + bregman(s, a, b) + (r - a) * (s.dphi_fn(a) - s.dphi_fn(b));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)) * 64);
    }
  }
}

TEST_CASE("objective examples") {
  const GridSpec one = dyadic_grid(Box::unit(1), 0);
  const BregmanSpec sq = bregman_spec("square");
  CHECK(objective(sq, GridFunction(one, {1}), GridFunction(one, {0}), GridFunction(one, {1})) == 1);
  const GridSpec g = dyadic_grid(Box::unit(1), 1);
  const BregmanSpec en = bregman_spec("entropy");
  const GridFunction f(g, {1, 2}), c(g, {1.5, 1.5}), w = GridFunction::constant(g, 1);
  CHECK(objective(en, f, f, w) == 0);
  CHECK(objective(en, f, c, w) == doctest::Approx(0.5 * (bregman(en, 1, 1.5) + bregman(en, 2, 1.5))));
}

TEST_CASE("verify_minimizer examples") {
  const GridSpec g = GridSpec::equidistant(Box::unit(1), {3});
  const GridFunction w = GridFunction::constant(g, 1);
  const VerifyReport sq = verify_minimizer(bregman_spec("square"), GridFunction(g, {3, 1, 2}), w, Signature({1}));
  CHECK(sq.passed());
  const VerifyReport en = verify_minimizer(bregman_spec("entropy"), GridFunction(g, {3, 1, 2}), w, Signature({1}));
  CHECK(en.passed());
  CHECK(en.trials == 200);
  CHECK(en.min_gap >= 0);
  // Near-optimal samples cluster around f*. A gap of 1e-14 allows distances of order 1e-7 here.
  VerifyOptions tight;
  tight.near_tol = 1e-14;
  const VerifyReport uq = verify_minimizer(bregman_spec("entropy"), GridFunction(g, {3, 1, 2}), w, Signature({1}), tight);
  CHECK(uq.near_optimal > 0);
  CHECK(uq.uniqueness_ok);
  CHECK_THROWS_AS(verify_minimizer(bregman_spec("entropy"), GridFunction(g, {3, -1, 2}), w, Signature({1})),
                  DomainError);
}

TEST_CASE("sampler draws monotone functions in range") {
  const GridSpec g = GridSpec::equidistant(Box::unit(2), {4, 3});
  const Signature sig({1, -1});
  MonotoneSampler s(g, sig, 0.5, 2.0, 3);
  const GridFunction anchor(g, std::vector<double>(g.size(), 1.0));
  for (int t = 0; t < 60; ++t) {
    const GridFunction h = s.next(&anchor);
    CHECK(is_monotone(h.values, g.lattice(), sig));
    for (double v : h.values) CHECK((v >= 0.5 && v <= 2.0));
  }
  MonotoneSampler a(g, sig, 0, 1, 9), b(g, sig, 0, 1, 9);
  CHECK(a.next().values == b.next().values);
}

TEST_CASE("orthogonality and level sets") {
  const GridSpec g = GridSpec::equidistant(Box::unit(2), {2, 2});
  const GridFunction f(g, {0, 1, 1, 0}), w = GridFunction::constant(g, 1);
  const Signature sig({1, 1});
  CHECK(orthogonality_check(f, w, sig, [](double u) { return u; }) <= 1e-12);
  CHECK(orthogonality_check(f, w, sig, [](double) { return 1.0; }) <= 1e-12);
  CHECK(orthogonality_check(f, w, sig, step_at(2.0 / 3.0)) <= 1e-12);
  CHECK(orthogonality_check(f, w, sig, clipped_ramp(0.1, 0.9)) <= 1e-12);
  // The raw data is not an orthogonal fit.
  GridFunction off = f;
  for (double& v : off.values) v += 0.25;
  CHECK(orthogonality_residual(f, w, off, [](double u) { return u; }) > 0.1);

  const LevelSetReport rep = level_set_report(f, w, sig);
  REQUIRE(rep.levels.size() == 2);
  CHECK(rep.levels[1].count == 3);
  CHECK(rep.levels[1].mean == doctest::Approx(2.0 / 3.0));
  CHECK(rep.worst_rel_err <= 1e-12);
  CHECK(rep.worst_lower <= 1e-12);
  CHECK(rep.worst_upper <= 1e-12);

  const GridSpec line = GridSpec::equidistant(Box::unit(1), {3});
  const LevelSetReport pooled = level_set_report(GridFunction(line, {3, 1, 2}), GridFunction::constant(line, 1),
                                                 Signature({1}));
  REQUIRE(pooled.levels.size() == 1);
  CHECK(pooled.levels[0].value == 2);
  CHECK(pooled.levels[0].mean == 2);
}
