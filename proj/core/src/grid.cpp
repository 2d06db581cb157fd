#include "monoreg/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

#include "monoreg/error.hpp"

namespace monoreg {

Box::Box(std::vector<double> lo, std::vector<double> hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.empty()) throw DimensionError("box must have at least one axis");
  if (lo_.size() != hi_.size()) throw DimensionError("box lo/hi dimensions differ");
  for (std::size_t i = 0; i < lo_.size(); ++i) {
    if (!std::isfinite(lo_[i]) || !std::isfinite(hi_[i]) || !(lo_[i] < hi_[i]))
      throw DomainError("box requires finite lo < hi on every axis");
  }
}

Box Box::unit(std::size_t dim) { return Box(std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)); }

double Box::max_edge() const {
  double m = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) m = std::max(m, edge(i));
  return m;
}

bool Box::contains(std::span<const double> x) const {
  if (x.size() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i)
    if (!(x[i] >= lo_[i] && x[i] <= hi_[i])) return false;
  return true;
}

Box Box::restricted(const std::vector<std::size_t>& axes) const {
  std::vector<double> lo, hi;
  for (std::size_t a : axes) {
    lo.push_back(lo_.at(a));
    hi.push_back(hi_.at(a));
  }
  return Box(std::move(lo), std::move(hi));
}

namespace {

std::vector<double> equidistant_axis(double a, double b, std::size_t m) {
  std::vector<double> t(m + 1);
  for (std::size_t k = 0; k < m; ++k)
    t[k] = a + (b - a) * (static_cast<double>(k) / static_cast<double>(m));
  t[m] = b;
  return t;
}

bool axis_is_equidistant(const std::vector<double>& t) {
  const std::size_t m = t.size() - 1;
  const double h = (t.back() - t.front()) / static_cast<double>(m);
  const double slack = 1e-12 * (t.back() - t.front());
  for (std::size_t k = 1; k <= m; ++k)
    if (std::abs((t[k] - t[k - 1]) - h) > slack) return false;
  return true;
}

std::vector<std::size_t> extents_of(const std::vector<std::vector<double>>& bps) {
  std::vector<std::size_t> ext;
  for (const auto& t : bps) ext.push_back(t.size() - 1);
  return ext;
}

}  // namespace

GridSpec::GridSpec(Box box, std::vector<std::vector<double>> breakpoints)
    : box_(std::move(box)), breakpoints_(std::move(breakpoints)) {
  if (breakpoints_.size() != box_.dim())
    throw DimensionError("grid needs one breakpoint list per box axis");
  for (std::size_t i = 0; i < box_.dim(); ++i) {
    const auto& t = breakpoints_[i];
    if (t.size() < 2) throw DomainError("each axis needs at least one cell");
    if (t.front() != box_.lo(i) || t.back() != box_.hi(i))
      throw DomainError("breakpoints must start at lo and end at hi");
    for (std::size_t k = 1; k < t.size(); ++k)
      if (!(t[k] > t[k - 1])) throw DomainError("breakpoints must be strictly increasing");
  }
  lattice_ = Lattice(extents_of(breakpoints_));
  equidistant_ = std::all_of(breakpoints_.begin(), breakpoints_.end(), axis_is_equidistant);
  if (equidistant_) {
    const std::size_t m = cells(0);
    const bool same = std::all_of(breakpoints_.begin(), breakpoints_.end(),
                                  [m](const auto& t) { return t.size() - 1 == m; });
    if (same && std::has_single_bit(m)) dyadic_level_ = std::bit_width(m) - 1;
  }
}

GridSpec GridSpec::equidistant(Box box, std::vector<std::size_t> cells_per_axis) {
  if (cells_per_axis.size() != box.dim()) throw DimensionError("cell counts do not match box");
  std::vector<std::vector<double>> bps;
  for (std::size_t i = 0; i < box.dim(); ++i) {
    if (cells_per_axis[i] == 0) throw DomainError("cell count must be positive");
    bps.push_back(equidistant_axis(box.lo(i), box.hi(i), cells_per_axis[i]));
  }
  return GridSpec(std::move(box), std::move(bps));
}

GridSpec GridSpec::dyadic(Box box, int level) {
  if (level < 0 || level > 30) throw DomainError("dyadic level must be in [0, 30]");
  const std::size_t d = box.dim();
  return equidistant(std::move(box), std::vector<std::size_t>(d, std::size_t{1} << level));
}

double GridSpec::midpoint(std::size_t axis, std::size_t k) const {
  const auto& t = breakpoints_.at(axis);
  return 0.5 * (t.at(k) + t.at(k + 1));
}

std::vector<double> GridSpec::point(const MultiIndex& idx) const {
  std::vector<double> x(dim());
  for (std::size_t i = 0; i < dim(); ++i) x[i] = midpoint(i, idx.at(i));
  return x;
}

std::vector<double> GridSpec::point(std::size_t linear) const { return point(lattice_.multi(linear)); }

double GridSpec::cell_volume(std::size_t linear) const {
  const MultiIndex idx = lattice_.multi(linear);
  double v = 1.0;
  for (std::size_t i = 0; i < dim(); ++i) v *= cell_hi(i, idx[i]) - cell_lo(i, idx[i]);
  return v;
}

double GridSpec::len() const {
  double m = 0.0;
  for (const auto& t : breakpoints_)
    for (std::size_t k = 1; k < t.size(); ++k) m = std::max(m, t[k] - t[k - 1]);
  return m;
}

double GridSpec::vol() const {
  if (!equidistant_) throw DomainError("vol() requires an equidistant grid");
  double v = 1.0;
  for (std::size_t i = 0; i < dim(); ++i) v *= box_.edge(i) / static_cast<double>(cells(i));
  return v;
}

MultiIndex GridSpec::cell_of(std::span<const double> x) const {
  if (x.size() != dim()) throw DimensionError("cell_of: point dimension does not match grid");
  if (!box_.contains(x)) throw DomainError("cell_of: point lies outside the box");
  MultiIndex idx(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    const auto& t = breakpoints_[i];
    const auto it = std::upper_bound(t.begin(), t.end(), x[i]);
    std::size_t k = static_cast<std::size_t>(it - t.begin()) - 1;
    idx[i] = std::min(k, cells(i) - 1);
  }
  return idx;
}

std::size_t GridSpec::cell_linear(std::span<const double> x) const { return lattice_.linear(cell_of(x)); }

GridFunction::GridFunction(GridSpec grid_, std::vector<double> values_,
                           std::optional<WeightBounds> weight_bounds_)
    : grid(std::move(grid_)), values(std::move(values_)), weight_bounds(weight_bounds_) {
  if (values.size() != grid.size())
    throw DimensionError("grid function has " + std::to_string(values.size()) +
                         " values for a grid of " + std::to_string(grid.size()) + " points");
  if (weight_bounds && !(weight_bounds->lo > 0.0 && weight_bounds->lo <= weight_bounds->hi &&
                         std::isfinite(weight_bounds->hi)))
    throw DomainError("weight bounds must satisfy 0 < lo <= hi < inf");
}

GridFunction GridFunction::constant(GridSpec grid, double value) {
  const std::size_t n = grid.size();
  return GridFunction(std::move(grid), std::vector<double>(n, value));
}

void check_weight(const GridFunction& w) {
  for (double v : w.values) {
    if (!std::isfinite(v) || !(v > 0.0)) throw DomainError("weights must be finite and positive");
    if (w.weight_bounds && (v < w.weight_bounds->lo || v > w.weight_bounds->hi))
      throw DomainError("weight value outside its declared bounds");
  }
}

WeightBounds value_range(const GridFunction& g) {
  const auto [lo, hi] = std::minmax_element(g.values.begin(), g.values.end());
  return {*lo, *hi};
}

ScalarField constant_field(double value) {
  return ScalarField{[value](std::span<const double>) { return value; }, Regularity::Continuous,
                     WeightBounds{value, value}};
}

GridSpec dyadic_grid(const Box& box, int level) { return GridSpec::dyadic(box, level); }

GridSpec common_refinement(const GridSpec& a, const GridSpec& b) {
  if (!(a.box() == b.box())) throw DomainError("common_refinement: boxes differ");
  if (!a.dyadic_level() || !b.dyadic_level())
    throw DomainError("common_refinement: both grids must be dyadic");
  return *a.dyadic_level() >= *b.dyadic_level() ? a : b;
}

GridFunction sample_midpoints(const ScalarField& f, const GridSpec& grid) {
  std::vector<double> v(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) v[p] = f(grid.point(p));
  return GridFunction(grid, std::move(v));
}

QuadratureRule gauss_legendre(int order) {
  if (order < 1) throw DomainError("quadrature order must be >= 1");
  const auto n = static_cast<std::size_t>(order);
  QuadratureRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  if (n == 1) {
    rule.weights[0] = 2.0;
    return rule;
  }
  // Legendre P_n and its derivative at x by the three-term recurrence.
  auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double kd = static_cast<double>(k);
      const double pk = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
      p0 = p1;
      p1 = pk;
    }
    const double dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    return std::pair{p1, dp};
  };
  for (std::size_t i = 0; i < n / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    for (int it = 0; it < 100; ++it) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    const double wgt = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = wgt;
    rule.weights[n - 1 - i] = wgt;
  }
  if (n % 2 == 1) rule.weights[n / 2] = 2.0 / (legendre(0.0).second * legendre(0.0).second);
  return rule;
}

double integrate_cell(const ScalarField& f, const GridSpec& grid, std::size_t linear,
                      const QuadratureRule& rule) {
  const std::size_t d = grid.dim();
  const MultiIndex cell = grid.lattice().multi(linear);
  const std::size_t q = rule.nodes.size();
  std::vector<double> half(d), mid(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double a = grid.cell_lo(i, cell[i]);
    const double b = grid.cell_hi(i, cell[i]);
    half[i] = 0.5 * (b - a);
    mid[i] = 0.5 * (a + b);
  }
  std::vector<std::size_t> counter(d, 0);
  std::vector<double> x(d);
  double total = 0.0;
  while (true) {
    double wt = 1.0;
    for (std::size_t i = 0; i < d; ++i) {
      x[i] = mid[i] + half[i] * rule.nodes[counter[i]];
      wt *= rule.weights[counter[i]] * half[i];
    }
    total += wt * f(x);
    std::size_t axis = d;
    while (axis-- > 0) {
      if (++counter[axis] < q) break;
      counter[axis] = 0;
    }
    if (axis == static_cast<std::size_t>(-1)) break;
  }
  return total;
}

GridFunction cell_average(const ScalarField& f, const GridSpec& grid, int order) {
  const QuadratureRule rule = gauss_legendre(order);
  std::vector<double> v(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p)
    v[p] = integrate_cell(f, grid, p, rule) / grid.cell_volume(p);
  return GridFunction(grid, std::move(v));
}

ScalarField lift(const GridFunction& values) {
  return ScalarField{[g = values](std::span<const double> x) { return g.values[g.grid.cell_linear(x)]; },
                     Regularity::Bounded, std::nullopt};
}

std::size_t next_prime(std::size_t n) {
  auto is_prime = [](std::size_t k) {
    if (k < 2) return false;
    if (k % 2 == 0) return k == 2;
    for (std::size_t q = 3; q * q <= k; q += 2)
      if (k % q == 0) return false;
    return true;
  };
  while (!is_prime(n)) ++n;
  return n;
}

std::optional<std::size_t> rational_denominator(double r, std::size_t max_den) {
  if (!std::isfinite(r) || r < 0.0 || r > 1.0) return std::nullopt;
  // Continued-fraction convergents; accept one that reproduces r to a few ulps.
  const double tol = 8.0 * std::numeric_limits<double>::epsilon() * std::max(r, 1e-300);
  long double h_prev = 1, h = std::floor(static_cast<long double>(r));
  long double k_prev = 0, k = 1;
  long double frac = static_cast<long double>(r) - h;
  for (int it = 0; it < 64; ++it) {
    if (std::abs(static_cast<double>(h / k) - r) <= tol) return static_cast<std::size_t>(k);
    if (frac == 0) break;
    const long double inv = 1.0L / frac;
    const long double a = std::floor(inv);
    frac = inv - a;
    const long double h_next = a * h + h_prev;
    const long double k_next = a * k + k_prev;
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
    if (k > static_cast<long double>(max_den)) break;
  }
  return std::nullopt;
}

GridSpec grid_around_point(const Box& box, std::span<const double> x0, double eps) {
  if (x0.size() != box.dim()) throw DimensionError("grid_around_point: point dimension mismatch");
  if (!box.contains(x0)) throw DomainError("grid_around_point: point lies outside the box");
  if (!(eps > 0.0)) throw DomainError("grid_around_point: eps must be positive");
  std::vector<std::size_t> counts(box.dim());
  for (std::size_t i = 0; i < box.dim(); ++i) {
    const double edge = box.edge(i);
    const std::size_t pmin = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(edge / eps)));
    const double r = (x0[i] - box.lo(i)) / edge;
    std::size_t p = pmin;
    const auto den = rational_denominator(r);
    if (den) p = next_prime(std::max(pmin, *den + 1));
    // Guard against floating coincidences with an interior hyperplane.
    auto on_hyperplane = [&](std::size_t m) {
      const auto t = equidistant_axis(box.lo(i), box.hi(i), m);
      for (std::size_t k = 1; k < m; ++k)
        if (std::abs(t[k] - x0[i]) <= 1e-12 * edge) return true;
      return false;
    };
    while (on_hyperplane(p)) p = den ? next_prime(p + 1) : p + 1;
    counts[i] = p;
  }
  return GridSpec::equidistant(box, std::move(counts));
}

GridFunction refine_to(const GridFunction& g, const GridSpec& finer) {
  if (g.grid == finer) return g;
  if (!(g.grid.box() == finer.box())) throw DomainError("refine_to: boxes differ");
  std::vector<double> v(finer.size());
  for (std::size_t p = 0; p < finer.size(); ++p) v[p] = g.values[g.grid.cell_linear(finer.point(p))];
  return GridFunction(finer, std::move(v), g.weight_bounds);
}

Norms norms(const GridFunction& g1, const GridFunction& g2, const GridFunction* w) {
  if (!(g1.grid.box() == g2.grid.box())) throw DomainError("norms: incompatible boxes");
  const GridSpec fine = g1.grid == g2.grid ? g1.grid : common_refinement(g1.grid, g2.grid);
  const GridFunction a = refine_to(g1, fine);
  const GridFunction b = refine_to(g2, fine);
  std::optional<GridFunction> wf;
  if (w) {
    if (!(w->grid.box() == fine.box())) throw DomainError("norms: weight on a different box");
    const GridSpec wfine = w->grid == fine ? fine : common_refinement(w->grid, fine);
    if (!(wfine == fine)) throw DomainError("norms: weight grid is finer than the compared functions");
    wf = refine_to(*w, fine);
  }
  double sum = 0.0, sup = 0.0;
  for (std::size_t p = 0; p < fine.size(); ++p) {
    const double diff = std::abs(a.values[p] - b.values[p]);
    sup = std::max(sup, diff);
    sum += diff * diff * (wf ? wf->values[p] : 1.0) * fine.cell_volume(p);
  }
  return {std::sqrt(sum), sup};
}

}  // namespace monoreg
