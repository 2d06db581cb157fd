#include <doctest.h>

#include <cmath>

#include "monoreg/builtins.hpp"
#include "monoreg/error.hpp"
#include "monoreg/projection.hpp"

using namespace monoreg;

TEST_CASE("error_bounds examples") {
  CHECK(error_bounds(1, 1, 0.1, NormKind::L2) == doctest::Approx(0.1));
  CHECK(error_bounds(1, 4, 0.1, NormKind::L2) == doctest::Approx(0.2));
  CHECK(error_bounds(0.5, 9, 0.3, NormKind::Sup) == 0.3);
  CHECK_THROWS(error_bounds(0, 1, 0.1, NormKind::L2));
  CHECK_THROWS(error_bounds(2, 1, 0.1, NormKind::L2));
  CHECK_THROWS(error_bounds(1, 1, -0.1, NormKind::Sup));
}

TEST_CASE("norm names") {
  CHECK(parse_norm("l2") == NormKind::L2);
  CHECK(parse_norm("sup") == NormKind::Sup);
  CHECK(to_string(NormKind::Sup) == "sup");
  CHECK_THROWS(parse_norm("l1"));
}

TEST_CASE("project_grid_constant examples") {
  const GridSpec g = dyadic_grid(Box::unit(1), 1);
  const auto p = project_grid_constant(GridFunction(g, {3, 1}), GridFunction::constant(g, 1), Signature({1}));
  for (double x : {0.0, 0.3, 0.5, 1.0}) CHECK(p.field(std::span<const double>(&x, 1)) == 2);

  const GridFunction mono(g, {1, 4});
  CHECK(project_grid_constant(mono, GridFunction::constant(g, 1), Signature({1})).cells.values == mono.values);

  const GridSpec g2 = dyadic_grid(Box::unit(2), 1);
  const auto q = project_grid_constant(GridFunction(g2, {0, 1, 1, 0}), GridFunction::constant(g2, 1),
                                       Signature({1, 1}));
  const std::vector<double> probe = {0.8, 0.8};
  CHECK(q.field(probe) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));

  const GridSpec uneven(Box::unit(1), {{0, 0.3, 1}});
  CHECK_THROWS_AS(project_grid_constant(GridFunction(uneven, {1, 0}), GridFunction::constant(uneven, 1),
                                        Signature({1})),
                  DomainError);
}

TEST_CASE("paraboloid converges to the analytic limit") {
  const Builtin b = builtin("paraboloid1d");
  ProjectionOptions opt;
  opt.norm = NormKind::Sup;
  opt.max_level = 8;
  const ConvergenceReport rep = approximate_projection(b.f, constant_field(1), b.sig, b.box, opt);
  REQUIRE(rep.levels.size() == 9);
  REQUIRE(rep.final.has_value());
  CHECK(std::count(rep.warnings.begin(), rep.warnings.end(), "target_unreached") == 1);
  double err = 0.0;
  for (std::size_t p = 0; p < rep.final->size(); ++p) {
    const auto x = rep.final->grid.point(p);
    err = std::max(err, std::abs(rep.final->values[p] - (*b.exact)(x)));
  }
  CHECK(err <= 2e-3);
  for (const LevelRecord& r : rep.levels) {
    CHECK(r.bound_certified);
    CHECK(r.certificate_passed);
    CHECK(r.bound == r.disc_err);
  }
  for (std::size_t i = 1; i < rep.levels.size(); ++i) CHECK(rep.levels[i].disc_err < rep.levels[i - 1].disc_err);
}

TEST_CASE("monotone input has zero objective at every level") {
  const Builtin b = builtin("monotone-plane");
  ProjectionOptions opt;
  opt.max_level = 4;
  const ConvergenceReport rep = approximate_projection(b.f, constant_field(1), b.sig, b.box, opt);
  for (const LevelRecord& r : rep.levels) CHECK(r.objective == 0);
}

TEST_CASE("antitone input pools to its mean") {
  const Builtin b = builtin("neg-line");
  ProjectionOptions opt;
  opt.max_level = 6;
  const ConvergenceReport rep = approximate_projection(b.f, constant_field(1), b.sig, b.box, opt);
  for (double v : rep.final->values) CHECK(v == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("target stops refinement") {
  const Builtin b = builtin("paraboloid1d");
  ProjectionOptions opt;
  opt.norm = NormKind::Sup;
  opt.max_level = 12;
  opt.target = 0.01;
  const ConvergenceReport rep = approximate_projection(b.f, constant_field(1), b.sig, b.box, opt);
  CHECK(rep.target_reached);
  CHECK(rep.levels.back().bound <= 0.01);
  CHECK(rep.levels[rep.levels.size() - 2].bound > 0.01);
  CHECK(rep.warnings.empty());
}

TEST_CASE("grid-constant input is reproduced at finer levels") {
  const GridSpec g = dyadic_grid(Box::unit(2), 2);
  std::vector<double> v(g.size());
  for (std::size_t p = 0; p < v.size(); ++p) v[p] = std::sin(3.0 * double(p));
  const GridFunction f(g, v);
  const GridFunction w = GridFunction::constant(g, 1);
  const auto exact = project_grid_constant(f, w, Signature({1, -1}));
  ProjectionOptions opt;
  opt.min_level = 2;
  opt.max_level = 5;
  opt.weight_level = 0;
  const ConvergenceReport rep = approximate_projection(lift(f), constant_field(1), Signature({1, -1}), g.box(), opt);
  for (std::size_t p = 0; p < rep.final->size(); ++p) {
    const auto x = rep.final->grid.point(p);
    CHECK(std::abs(rep.final->values[p] - exact.field(x)) <= 1e-9);
  }
}

TEST_CASE("weighted L2 bound carries the weight ratio") {
  const Builtin b = builtin("paraboloid-plane");
  const ScalarField w{[](std::span<const double> x) { return 1.0 + x[0]; }, Regularity::Continuous,
                      WeightBounds{1.0, 2.0}};
  ProjectionOptions opt;
  opt.max_level = 3;
  const ConvergenceReport rep = approximate_projection(b.f, w, b.sig, b.box, opt);
  for (const LevelRecord& r : rep.levels) {
    CHECK(r.c_lo == 1.0);
    CHECK(r.c_hi == 2.0);
    CHECK(r.bound == doctest::Approx(std::sqrt(2.0) * r.disc_err));
    CHECK_FALSE(r.bound_certified);
  }
}

TEST_CASE("field_distance") {
  const GridSpec g = dyadic_grid(Box::unit(1), 0);
  const ScalarField id{[](std::span<const double> x) { return x[0]; }, Regularity::Continuous, std::nullopt};
  // |x - 1/2| on [0,1]: L2 = 1/sqrt(12), sup = 1/2.
  CHECK(field_distance(GridFunction(g, {0.5}), id, NormKind::L2) == doctest::Approx(1 / std::sqrt(12.0)));
  CHECK(field_distance(GridFunction(g, {0.5}), id, NormKind::Sup) == doctest::Approx(0.5));
}
