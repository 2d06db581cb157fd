#include "monoreg/projection.hpp"

#include <algorithm>
#include <cmath>

#include "monoreg/error.hpp"

namespace monoreg {

std::string to_string(NormKind kind) { return kind == NormKind::L2 ? "l2" : "sup"; }

NormKind parse_norm(const std::string& text) {
  if (text == "l2" || text == "L2") return NormKind::L2;
  if (text == "sup" || text == "inf" || text == "linf") return NormKind::Sup;
  throw Error("unknown norm '" + text + "' (expected l2 or sup)");
}

GridConstantProjection project_grid_constant(const GridFunction& f, const GridFunction& w,
                                             const Signature& sig) {
  if (!f.grid.is_equidistant())
    throw DomainError("project_grid_constant: grid must be equidistant");
  SolveOptions opt;
  opt.certify = false;
  SolveResult res = solve(f, w, sig, opt);
  ScalarField field = lift(res.fitted);
  return {std::move(res.fitted), std::move(field)};
}

double error_bounds(double c_lo, double c_hi, double disc_err, NormKind norm) {
  if (!(c_lo > 0.0) || !(c_hi >= c_lo) || !std::isfinite(c_hi))
    throw DomainError("error_bounds: need 0 < c_lo <= c_hi < inf");
  if (!(disc_err >= 0.0)) throw DomainError("error_bounds: negative discretization error");
  return norm == NormKind::L2 ? std::sqrt(c_hi / c_lo) * disc_err : disc_err;
}

double field_distance(const GridFunction& g, const ScalarField& f, NormKind norm,
                      int quadrature_order, int oversample) {
  const GridSpec& grid = g.grid;
  const std::size_t d = grid.dim();
  if (norm == NormKind::L2) {
    const QuadratureRule rule = gauss_legendre(quadrature_order);
    double current = 0.0;
    const ScalarField sq{[&](std::span<const double> x) {
                           const double e = f(x) - current;
                           return e * e;
                         },
                         Regularity::Bounded, std::nullopt};
    long double total = 0;
    for (std::size_t p = 0; p < grid.size(); ++p) {
      current = g.values[p];
      total += integrate_cell(sq, grid, p, rule);
    }
    return std::sqrt(static_cast<double>(total));
  }

  // Sample s+1 points per axis on each closed cell, s = 2^oversample; the
  // closed cell catches one-sided limits at cell faces.
  const std::size_t s = std::size_t{1} << std::max(0, oversample);
  std::vector<std::size_t> counter(d);
  std::vector<double> x(d);
  double worst = 0.0;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const MultiIndex cell = grid.lattice().multi(p);
    std::fill(counter.begin(), counter.end(), 0);
    while (true) {
      for (std::size_t i = 0; i < d; ++i) {
        const double a = grid.cell_lo(i, cell[i]);
        const double b = grid.cell_hi(i, cell[i]);
        x[i] = counter[i] == s ? b : a + (b - a) * static_cast<double>(counter[i]) / static_cast<double>(s);
      }
      worst = std::max(worst, std::abs(f(x) - g.values[p]));
      std::size_t axis = d;
      while (axis-- > 0) {
        if (++counter[axis] <= s) break;
        counter[axis] = 0;
      }
      if (axis == static_cast<std::size_t>(-1)) break;
    }
  }
  return worst;
}

namespace {

GridFunction discretize(const ScalarField& f, const GridSpec& grid, Discretization mode, int order) {
  return mode == Discretization::Midpoint ? sample_midpoints(f, grid) : cell_average(f, grid, order);
}

}  // namespace

ConvergenceReport approximate_projection(const ScalarField& f, const ScalarField& w,
                                         const Signature& sig, const Box& box,
                                         const ProjectionOptions& options) {
  const std::size_t d = box.dim();
  if (sig.dim() != d) throw DimensionError("approximate_projection: signature does not match box");
  const int max_level = options.max_level.value_or(static_cast<int>(20 / d));
  if (options.min_level < 0 || max_level < options.min_level)
    throw Error("approximate_projection: invalid level range");
  if (!(options.target >= 0.0)) throw Error("approximate_projection: target must be >= 0");
  const Discretization mode = options.discretization.value_or(
      f.regularity == Regularity::Continuous ? Discretization::Midpoint : Discretization::CellAverage);

  std::optional<int> weight_level = options.weight_level;
  if (!weight_level && w.declared_bounds && w.declared_bounds->lo == w.declared_bounds->hi)
    weight_level = 0;

  ConvergenceReport report;
  report.norm = options.norm;
  if (options.norm == NormKind::Sup && f.regularity != Regularity::Continuous)
    report.warnings.push_back(
        "sup-norm errors of a non-continuous field are sampled and may not converge");
  if (!weight_level)
    report.warnings.push_back("weight is not grid-constant; bounds are reported but not certified");

  std::optional<GridFunction> previous;
  for (int n = options.min_level; n <= max_level; ++n) {
    const GridSpec grid = dyadic_grid(box, n);
    const GridFunction fn = discretize(f, grid, mode, options.quadrature_order);
    GridFunction wn = discretize(w, grid, mode, options.quadrature_order);
    check_weight(wn);

    SolveOptions so;
    so.certify = options.certify;
    const SolveResult res = solve(fn, wn, sig, so);

    LevelRecord rec;
    rec.level = n;
    rec.len = grid.len();
    rec.blocks = res.blocks.size();
    rec.certificate_passed = !options.certify || res.certificate.passed();

    const WeightBounds range = value_range(wn);
    rec.c_lo = range.lo;
    rec.c_hi = range.hi;
    if (w.declared_bounds) {
      rec.c_lo = std::min(rec.c_lo, w.declared_bounds->lo);
      rec.c_hi = std::max(rec.c_hi, w.declared_bounds->hi);
    }

    int oversample = options.sup_oversample;
    while (oversample > 0 &&
           static_cast<double>(grid.size()) * std::pow(std::ldexp(1.0, oversample) + 1.0, d) >
               static_cast<double>(options.max_sup_samples))
      --oversample;
    rec.disc_err = field_distance(fn, f, options.norm, options.quadrature_order, oversample);
    rec.bound = error_bounds(rec.c_lo, rec.c_hi, rec.disc_err, options.norm);
    rec.bound_certified = weight_level && n >= *weight_level;

    long double obj = 0;
    for (std::size_t p = 0; p < grid.size(); ++p) {
      const long double e = static_cast<long double>(fn.values[p]) - res.fitted.values[p];
      obj += wn.values[p] * e * e * grid.cell_volume(p);
    }
    rec.objective = static_cast<double>(obj);

    if (previous) {
      const Norms nd = norms(res.fitted, *previous);
      rec.successive_diff = options.norm == NormKind::L2 ? nd.l2_weighted : nd.sup;
    }
    previous = res.fitted;
    report.levels.push_back(rec);

    if (options.target > 0.0 && rec.bound_certified && rec.bound <= options.target) {
      report.target_reached = true;
      break;
    }
  }
  report.final = std::move(previous);
  if (!report.target_reached) report.warnings.push_back("target_unreached");
  return report;
}

}  // namespace monoreg
