#include "monoreg/averaging.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <optional>

#include "monoreg/error.hpp"

namespace monoreg {

double av(const GridFunction& f, const GridFunction& w, const IndexSet& region) {
  if (!(f.grid == w.grid)) throw DimensionError("av: data and weights on different grids");
  if (region.mask.size() != f.size()) throw DimensionError("av: region does not match grid");
  long double num = 0, den = 0;
  for (std::size_t p = 0; p < f.size(); ++p)
    if (region.mask[p]) {
      const long double wv = static_cast<long double>(w.values[p]) * f.grid.cell_volume(p);
      num += wv * f.values[p];
      den += wv;
    }
  if (den == 0) throw DomainError("av: empty region");
  return static_cast<double>(num / den);
}

double av(const ScalarField& f, const ScalarField& w, const GridSpec& grid, const IndexSet& region,
          int quadrature_order) {
  if (region.mask.size() != grid.size()) throw DimensionError("av: region does not match grid");
  const QuadratureRule rule = gauss_legendre(quadrature_order);
  const ScalarField fw{[&](std::span<const double> x) { return f(x) * w(x); }, Regularity::Bounded,
                       std::nullopt};
  long double num = 0, den = 0;
  bool any = false;
  for (std::size_t p = 0; p < grid.size(); ++p)
    if (region.mask[p]) {
      any = true;
      num += integrate_cell(fw, grid, p, rule);
      den += integrate_cell(w, grid, p, rule);
    }
  if (!any || den == 0) throw DomainError("av: empty region");
  return static_cast<double>(num / den);
}

double a_grid(const GridFunction& f, const GridFunction& w, const Signature& sig,
              std::span<const double> x, MinMaxVariant variant, std::uint64_t cap) {
  if (!(f.grid == w.grid)) throw DimensionError("a_grid: data and weights on different grids");
  if (!f.grid.is_equidistant()) throw DomainError("a_grid: grid must be equidistant");
  if (sig.dim() != f.grid.dim()) throw DimensionError("a_grid: signature does not match grid");
  const Lattice& lat = f.grid.lattice();
  const std::size_t n = lat.size();
  const std::vector<std::uint64_t> uppers = enumerate_upper_masks(lat, sig, cap);
  const std::size_t cell = f.grid.cell_linear(x);
  const std::uint64_t bit = std::uint64_t{1} << cell;
  const std::uint64_t full = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;

  std::vector<std::uint64_t> ups, lows;
  for (std::uint64_t u : uppers) {
    if (u & bit)
      ups.push_back(u);
    else
      lows.push_back(full & ~u);
  }
  auto mean = [&](std::uint64_t m) {
    long double num = 0, den = 0;
    for (; m; m &= m - 1) {
      const std::size_t p = static_cast<std::size_t>(std::countr_zero(m));
      const long double wv = static_cast<long double>(w.values[p]) * f.grid.cell_volume(p);
      num += wv * f.values[p];
      den += wv;
    }
    return static_cast<double>(num / den);
  };

  const double inf = std::numeric_limits<double>::infinity();
  if (variant == MinMaxVariant::InfSup) {
    double best = inf;
    for (std::uint64_t l : lows) {
      double inner = -inf;
      for (std::uint64_t u : ups) {
        inner = std::max(inner, mean(l & u));
        if (inner >= best) break;
      }
      best = std::min(best, inner);
    }
    return best;
  }
  double best = -inf;
  for (std::uint64_t u : ups) {
    double inner = inf;
    for (std::uint64_t l : lows) {
      inner = std::min(inner, mean(l & u));
      if (inner <= best) break;
    }
    best = std::max(best, inner);
  }
  return best;
}

namespace {

double closed_form_on_mesh(const ScalarField& f, const ScalarField& w, double a, double b, double x,
                           std::size_t mesh) {
  const double frac = (x - a) / (b - a);
  const std::size_t nl = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(frac * mesh)));
  const std::size_t nr = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround((1 - frac) * mesh)));
  const std::size_t total = nl + nr;
  std::vector<double> t(total + 1), F(total + 1, 0.0), W(total + 1, 0.0);
  for (std::size_t i = 0; i <= nl; ++i) t[i] = a + (x - a) * static_cast<double>(i) / static_cast<double>(nl);
  for (std::size_t j = 1; j <= nr; ++j) t[nl + j] = x + (b - x) * static_cast<double>(j) / static_cast<double>(nr);
  t[nl] = x;
  t[total] = b;
  double prev_t = t[0];
  double prev_w = w(std::span<const double>(&prev_t, 1));
  double prev_fw = f(std::span<const double>(&prev_t, 1)) * prev_w;
  long double cf = 0, cw = 0;
  for (std::size_t k = 1; k <= total; ++k) {
    const double tk = t[k];
    const double wk = w(std::span<const double>(&tk, 1));
    const double fwk = f(std::span<const double>(&tk, 1)) * wk;
    const double h = tk - t[k - 1];
    cf += 0.5 * h * (fwk + prev_fw);
    cw += 0.5 * h * (wk + prev_w);
    F[k] = static_cast<double>(cf);
    W[k] = static_cast<double>(cw);
    prev_w = wk;
    prev_fw = fwk;
  }
  const double inf = std::numeric_limits<double>::infinity();
  double best = inf;
  for (std::size_t j = nl + 1; j <= total; ++j) {
    double inner = -inf;
    for (std::size_t i = 0; i < nl; ++i) {
      inner = std::max(inner, (F[j] - F[i]) / (W[j] - W[i]));
      if (inner >= best) break;
    }
    best = std::min(best, inner);
  }
  return best;
}

}  // namespace

UnivariateResult univariate_closed_form(const ScalarField& f, const ScalarField& w, const Box& box,
                                        double x, std::size_t mesh) {
  if (box.dim() != 1) throw DimensionError("univariate_closed_form: box must be one-dimensional");
  const double a = box.lo(0), b = box.hi(0);
  if (!(x > a && x < b)) throw DomainError("univariate_closed_form: x must be interior");
  if (mesh < 4) throw Error("univariate_closed_form: mesh must be >= 4");
  const double fine = closed_form_on_mesh(f, w, a, b, x, mesh);
  const double coarse = closed_form_on_mesh(f, w, a, b, x, mesh / 2);
  return {fine, std::abs(fine - coarse)};
}

PointResult pointwise_value(const ScalarField& f, const ScalarField& w, const Signature& sig,
                            const Box& box, std::span<const double> x0, double tol,
                            const PointOptions& options) {
  const std::size_t d = box.dim();
  if (sig.dim() != d || x0.size() != d) throw DimensionError("pointwise_value: dimension mismatch");
  if (!box.contains(x0)) throw DomainError("pointwise_value: x0 outside the box");
  if (!(tol > 0.0)) throw Error("pointwise_value: tol must be positive");

  PointResult out;
  out.x0.assign(x0.begin(), x0.end());
  const std::vector<std::size_t> active = sig.active_axes();
  if (active.empty()) {
    out.value = f(x0);
    return out;
  }

  // Slice through x0 along the free axes.
  const Box sub = box.restricted(active);
  const Signature sub_sig = sig.restricted_to_active();
  std::vector<double> xa(active.size());
  for (std::size_t i = 0; i < active.size(); ++i) xa[i] = x0[active[i]];
  auto slice = [&](const ScalarField& g) {
    return ScalarField{[&g, &active, full = out.x0](std::span<const double> y) mutable {
                         for (std::size_t i = 0; i < active.size(); ++i) full[active[i]] = y[i];
                         return g(full);
                       },
                       g.regularity, g.declared_bounds};
  };
  const ScalarField fs = slice(f);
  const ScalarField ws = slice(w);

  const double edge = sub.max_edge();
  SolveOptions so;
  so.certify = false;
  int confirmed = 0;
  std::optional<GridSpec> previous_grid;
  for (int k = options.first_k; k <= options.budget; ++k) {
    const double eps = std::ldexp(edge, -k);
    const GridSpec grid = grid_around_point(sub, xa, eps);
    if (grid.size() > options.max_points) break;
    // Coarse eps can yield the same prime grid twice; that is no new evidence.
    if (previous_grid && *previous_grid == grid) continue;
    previous_grid = grid;
    const GridFunction fn = sample_midpoints(fs, grid);
    const GridFunction wn = sample_midpoints(ws, grid);
    const SolveResult res = solve(fn, wn, sub_sig, so);
    const double v = res.fitted.values[grid.cell_linear(xa)];
    out.history.push_back({k, eps, grid.size(), v});
    out.value = v;
    out.levels_used = static_cast<int>(out.history.size());
    if (out.history.size() >= 2) {
      out.last_diff = std::abs(v - out.history[out.history.size() - 2].value);
      confirmed = out.last_diff <= tol ? confirmed + 1 : 0;
      if (confirmed >= options.confirmations) return out;
    }
  }
  const double last = out.history.empty() ? std::nan("") : out.history.back().value;
  const double previous = out.history.size() < 2 ? std::nan("") : out.history[out.history.size() - 2].value;
  throw ConvergenceError("pointwise_value: no convergence within the level budget", previous, last);
}

}  // namespace monoreg
