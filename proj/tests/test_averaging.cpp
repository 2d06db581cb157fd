#include <doctest.h>

#include <cmath>
#include <random>

#include "monoreg/averaging.hpp"
#include "monoreg/builtins.hpp"
#include "monoreg/error.hpp"
#include "monoreg/projection.hpp"

using namespace monoreg;

namespace {

IndexSet full(std::size_t n) { return IndexSet{IndexSet::Kind::Upper, std::vector<bool>(n, true)}; }

ScalarField field(std::function<double(std::span<const double>)> fn) {
  return ScalarField{std::move(fn), Regularity::Continuous, std::nullopt};
}

}  // namespace

TEST_CASE("av examples") {
  const GridSpec g = dyadic_grid(Box::unit(1), 1);
  CHECK(av(GridFunction::constant(g, 7), GridFunction(g, {1, 5}), full(2)) == doctest::Approx(7));
  CHECK(av(GridFunction(g, {3, 1}), GridFunction::constant(g, 1), full(2)) == 2);
  CHECK(av(GridFunction(g, {3, 1}), GridFunction(g, {1, 3}), full(2)) == 1.5);
  CHECK_THROWS_AS(av(GridFunction(g, {3, 1}), GridFunction::constant(g, 1), IndexSet{IndexSet::Kind::Upper, {false, false}}),
                  DomainError);
  // Field version: mean of x over [0.5, 1].
  const IndexSet right{IndexSet::Kind::Upper, {false, true}};
  CHECK(av(field([](auto x) { return x[0]; }), constant_field(1), g, right) == doctest::Approx(0.75));
}

TEST_CASE("a_grid examples") {
  const GridSpec g = dyadic_grid(Box::unit(1), 1);
  const GridFunction f(g, {3, 1}), w = GridFunction::constant(g, 1);
  for (double x : {0.25, 0.75}) {
    CHECK(a_grid(f, w, Signature({1}), std::span<const double>(&x, 1)) == 2);
    CHECK(a_grid(f, w, Signature({1}), std::span<const double>(&x, 1), MinMaxVariant::SupInf) == 2);
  }
  const GridFunction mono(dyadic_grid(Box::unit(1), 2), {0, 1, 1, 3});
  for (double x : {0.1, 0.3, 0.6, 0.9})
    CHECK(a_grid(mono, GridFunction::constant(mono.grid, 1), Signature({1}), std::span<const double>(&x, 1)) ==
          doctest::Approx(mono.values[mono.grid.cell_linear(std::span<const double>(&x, 1))]));
}

TEST_CASE("a_grid variants agree with the projection and with minus-sigma") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1, 1), wt(0.5, 2);
  std::uniform_int_distribution<int> dir(-1, 1);
  for (int t = 0; t < 40; ++t) {
    const GridSpec g = GridSpec::equidistant(Box::unit(2), {3, 3});
    std::vector<double> f(g.size()), w(g.size()), nf(g.size());
    for (std::size_t p = 0; p < f.size(); ++p) {
      f[p] = u(rng);
      nf[p] = -f[p];
      w[p] = wt(rng);
    }
    const Signature sig({dir(rng), dir(rng)});
    const GridFunction fg(g, f), wg(g, w), nfg(g, nf);
    const auto proj = project_grid_constant(fg, wg, sig);
    for (std::size_t p = 0; p < g.size(); ++p) {
      const auto x = g.point(p);
      const double is = a_grid(fg, wg, sig, x, MinMaxVariant::InfSup);
      const double si = a_grid(fg, wg, sig, x, MinMaxVariant::SupInf);
      CHECK(std::abs(is - si) <= 1e-9);
      CHECK(std::abs(is - proj.field(x)) <= 1e-9);
      CHECK(std::abs(si + a_grid(nfg, wg, sig.negated(), x, MinMaxVariant::InfSup)) <= 1e-9);
    }
  }
}

TEST_CASE("a_grid preconditions") {
  const GridSpec uneven(Box::unit(1), {{0, 0.3, 1}});
  const double x = 0.5;
  CHECK_THROWS_AS(a_grid(GridFunction(uneven, {1, 0}), GridFunction::constant(uneven, 1), Signature({1}),
                         std::span<const double>(&x, 1)),
                  DomainError);
  const GridSpec big = dyadic_grid(Box::unit(1), 5);
  CHECK_THROWS_AS(a_grid(GridFunction::constant(big, 1), GridFunction::constant(big, 1), Signature({1}),
                         std::span<const double>(&x, 1)),
                  EnumerationLimitError);
}

TEST_CASE("univariate closed form") {
  const Box b = Box::unit(1);
  const auto para = field([](auto x) { return (x[0] - 0.5) * (x[0] - 0.5); });
  CHECK(univariate_closed_form(para, constant_field(1), b, 0.5).value == doctest::Approx(0.0625).epsilon(1e-6));
  const auto rising = field([](auto x) { return std::exp(x[0]); });
  for (double x : {0.2, 0.5, 0.8})
    CHECK(univariate_closed_form(rising, constant_field(1), b, x).value == doctest::Approx(std::exp(x)).epsilon(1e-6));
  const auto neg = field([](auto x) { return -x[0]; });
  CHECK(univariate_closed_form(neg, constant_field(1), b, 0.5).value == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK_THROWS_AS(univariate_closed_form(neg, constant_field(1), b, 0.0), DomainError);
  CHECK_THROWS_AS(univariate_closed_form(neg, constant_field(1), Box::unit(2), 0.5), DimensionError);
}

TEST_CASE("pointwise values") {
  const Builtin b = builtin("paraboloid1d");
  const std::vector<double> x0 = {0.9};
  const PointResult r = pointwise_value(b.f, constant_field(1), b.sig, b.box, x0, 1e-4);
  CHECK(r.value == doctest::Approx(0.16).epsilon(1e-3));
  CHECK(r.last_diff <= 1e-4);
  CHECK(r.levels_used == static_cast<int>(r.history.size()));
  for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i].points > r.history[i - 1].points);

  // Monotone field: the value is f(x0).
  // Two unrelated prime grids can agree by chance (here k = 7 and 8), so ask
  // for two consecutive confirmations.
  const auto rising = field([](auto x) { return std::exp(x[0]); });
  const std::vector<double> p = {0.3};
  PointOptions twice;
  twice.confirmations = 2;
  CHECK(std::abs(pointwise_value(rising, constant_field(1), Signature({1}), Box::unit(1), p, 1e-4, twice).value -
                 std::exp(0.3)) <= 1e-4);
  const auto plane = field([](auto x) { return x[0] + 2 * x[1]; });
  const std::vector<double> q2 = {0.3, 0.6};
  CHECK(std::abs(pointwise_value(plane, constant_field(1), Signature({1, 1}), Box::unit(2), q2, 2e-2).value - 1.5) <=
        2e-2);

  // A free axis reduces to the univariate slice.
  const auto g = field([](auto x) { return (x[0] - 0.5) * (x[0] - 0.5) * (1 + x[1]); });
  const std::vector<double> q = {0.9, 0.4};
  const double slice = pointwise_value(g, constant_field(1), Signature({1, 0}), Box::unit(2), q, 1e-4).value;
  CHECK(slice == doctest::Approx(0.16 * 1.4).epsilon(1e-3));
}

TEST_CASE("pointwise failure carries the last values") {
  const Builtin b = builtin("paraboloid1d");
  const std::vector<double> x0 = {0.6};
  PointOptions opt;
  opt.budget = 4;
  try {
    pointwise_value(b.f, constant_field(1), b.sig, b.box, x0, 1e-12, opt);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(std::isfinite(e.previous()));
    CHECK(std::isfinite(e.last()));
  }
  const std::vector<double> outside = {1.5};
  CHECK_THROWS_AS(pointwise_value(b.f, constant_field(1), b.sig, b.box, outside, 1e-3), DomainError);
}
