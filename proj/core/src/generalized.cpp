#include "monoreg/generalized.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "monoreg/error.hpp"
#include "monoreg/isotonic.hpp"

namespace monoreg {

bool BregmanSpec::contains(double u) const {
  if (!std::isfinite(u)) return false;
  const bool above = lo_open ? u > lo : u >= lo;
  const bool below = hi_open ? u < hi : u <= hi;
  return above && below;
}

BregmanSpec bregman_spec(const std::string& name) {
  BregmanSpec s;
  s.name = name;
  if (name == "square") {
    s.phi_fn = [](double u) { return u * u; };
    s.dphi_fn = [](double u) { return 2.0 * u; };
  } else if (name == "entropy") {
    s.phi_fn = [](double u) { return u * std::log(u); };
    s.dphi_fn = [](double u) { return std::log(u) + 1.0; };
    s.lo = 0.0;
  } else if (name == "exp") {
    s.phi_fn = [](double u) { return std::exp(u); };
    s.dphi_fn = [](double u) { return std::exp(u); };
  } else if (name == "neglog") {
    s.phi_fn = [](double u) { return -std::log(u); };
    s.dphi_fn = [](double u) { return -1.0 / u; };
    s.lo = 0.0;
  } else {
    throw Error("unknown Bregman spec '" + name + "' (expected square, entropy, exp or neglog)");
  }
  return s;
}

std::vector<std::string> bregman_names() { return {"square", "entropy", "exp", "neglog"}; }

double bregman(const BregmanSpec& spec, double u, double v) {
  if (!spec.contains(u) || !spec.contains(v))
    throw DomainError("bregman: argument outside the domain of " + spec.name);
  if (u == v) return 0.0;
  return spec.phi_fn(u) - spec.phi_fn(v) - spec.dphi_fn(v) * (u - v);
}

namespace {

void require_same_grid(const GridFunction& a, const GridFunction& b, const char* what) {
  if (!(a.grid == b.grid)) throw DimensionError(std::string(what) + ": functions on different grids");
}

long double objective_ld(const BregmanSpec& spec, const GridFunction& f, const GridFunction& g,
                         const GridFunction& w) {
  long double total = 0;
  for (std::size_t p = 0; p < f.size(); ++p)
    total += static_cast<long double>(bregman(spec, f.values[p], g.values[p])) * w.values[p] *
             f.grid.cell_volume(p);
  return total;
}

}  // namespace

double objective(const BregmanSpec& spec, const GridFunction& f, const GridFunction& g,
                 const GridFunction& w) {
  require_same_grid(f, g, "objective");
  require_same_grid(f, w, "objective");
  return static_cast<double>(objective_ld(spec, f, g, w));
}

MonotoneSampler::MonotoneSampler(GridSpec grid, Signature sig, double lo, double hi, std::uint64_t seed)
    : grid_(std::move(grid)), sig_(std::move(sig)), lo_(lo), hi_(hi), rng_(seed) {
  if (sig_.dim() != grid_.dim()) throw DimensionError("MonotoneSampler: signature does not match grid");
  if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw DomainError("MonotoneSampler: need finite lo <= hi");
}

GridFunction MonotoneSampler::next(const GridFunction* anchor) {
  const Lattice& lat = grid_.lattice();
  const std::size_t n = lat.size();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t kind = count_++ % (anchor ? 3 : 2);

  std::vector<double> g(n);
  if (kind == 0) {
    for (double& v : g) v = lo_ + (hi_ - lo_) * unit(rng_);
    g = solve_values(g, std::vector<double>(n, 1.0), lat, sig_);
  } else {
    // Sum of monotone per-axis staircases plus an arbitrary term per free slice.
    std::vector<std::vector<double>> stairs(lat.dim());
    for (std::size_t a = 0; a < lat.dim(); ++a) {
      stairs[a].resize(lat.extent(a));
      double acc = 0.0;
      for (double& s : stairs[a]) {
        if (sig_[a] == 0)
          s = unit(rng_);
        else {
          if (unit(rng_) < 0.5) acc += unit(rng_);
          s = sig_[a] * acc;
        }
      }
    }
    for (std::size_t p = 0; p < n; ++p) {
      const MultiIndex idx = lat.multi(p);
      double v = 0.0;
      for (std::size_t a = 0; a < lat.dim(); ++a) v += stairs[a][idx[a]];
      g[p] = v;
    }
    const auto [mn, mx] = std::minmax_element(g.begin(), g.end());
    const double gmin = *mn, gmax = *mx;
    for (double& v : g)
      v = gmax > gmin ? lo_ + (hi_ - lo_) * (v - gmin) / (gmax - gmin) : 0.5 * (lo_ + hi_);
    if (kind == 2) {
      // Convex mixture with the anchor, at a random scale down to 1e-8.
      const double t = std::pow(10.0, -8.0 * unit(rng_));
      for (std::size_t p = 0; p < n; ++p) g[p] = (1.0 - t) * anchor->values[p] + t * g[p];
    }
  }
  for (double& v : g) v = std::clamp(v, lo_, hi_);
  return GridFunction(grid_, std::move(g));
}

VerifyReport verify_minimizer(const BregmanSpec& spec, const GridFunction& f, const GridFunction& w,
                              const Signature& sig, const VerifyOptions& options) {
  require_same_grid(f, w, "verify_minimizer");
  for (double v : f.values)
    if (!spec.contains(v)) throw DomainError("verify_minimizer: data outside the domain of " + spec.name);
  SolveOptions so;
  so.certify = false;
  const GridFunction fstar = solve(f, w, sig, so).fitted;

  VerifyReport rep;
  rep.spec = spec.name;
  rep.trials = options.trials;
  const long double jstar = objective_ld(spec, f, fstar, w);
  rep.j_star = static_cast<double>(jstar);
  rep.min_gap = std::numeric_limits<double>::infinity();
  rep.worst_decomposition = -std::numeric_limits<double>::infinity();

  const WeightBounds range = value_range(f);
  MonotoneSampler sampler(f.grid, sig, range.lo, range.hi, options.seed);
  for (std::size_t t = 0; t < options.trials; ++t) {
    const GridFunction g = sampler.next(&fstar);
    const long double jg = objective_ld(spec, f, g, w);
    const long double jsg = objective_ld(spec, fstar, g, w);
    rep.min_gap = std::min(rep.min_gap, static_cast<double>(jg - jstar));
    rep.worst_decomposition = std::max(rep.worst_decomposition, static_cast<double>(jstar + jsg - jg));
    if (jg <= jstar + options.near_tol) {
      ++rep.near_optimal;
      double dist = 0.0;
      for (std::size_t p = 0; p < g.size(); ++p) dist = std::max(dist, std::abs(g.values[p] - fstar.values[p]));
      rep.near_optimal_distance = std::max(rep.near_optimal_distance, dist);
    }
  }
  if (options.trials == 0) rep.min_gap = rep.worst_decomposition = 0.0;
  rep.minimizer_ok = rep.min_gap >= -options.tol;
  rep.decomposition_ok = rep.worst_decomposition <= options.tol;
  rep.uniqueness_ok = !spec.strictly_convex || rep.near_optimal_distance <= options.uniqueness_radius;
  return rep;
}

double orthogonality_residual(const GridFunction& f, const GridFunction& w, const GridFunction& fitted,
                              const std::function<double(double)>& phi) {
  require_same_grid(f, w, "orthogonality_residual");
  require_same_grid(f, fitted, "orthogonality_residual");
  long double total = 0;
  for (std::size_t p = 0; p < f.size(); ++p)
    total += (static_cast<long double>(f.values[p]) - fitted.values[p]) * w.values[p] *
             f.grid.cell_volume(p) * phi(fitted.values[p]);
  return std::abs(static_cast<double>(total));
}

double orthogonality_check(const GridFunction& f, const GridFunction& w, const Signature& sig,
                           const std::function<double(double)>& phi) {
  SolveOptions so;
  so.certify = false;
  return orthogonality_residual(f, w, solve(f, w, sig, so).fitted, phi);
}

std::function<double(double)> step_at(double c) {
  return [c](double u) { return u >= c ? 1.0 : 0.0; };
}

std::function<double(double)> point_mass(double c) {
  return [c](double u) { return u == c ? 1.0 : 0.0; };
}

std::function<double(double)> clipped_ramp(double a, double b) {
  return [a, b](double u) { return std::clamp((u - a) / (b - a), 0.0, 1.0); };
}

LevelSetReport level_set_report(const GridFunction& f, const GridFunction& w, const Signature& sig,
                                std::size_t samples, std::uint64_t seed) {
  require_same_grid(f, w, "level_set_report");
  SolveOptions so;
  so.certify = false;
  const GridFunction fstar = solve(f, w, sig, so).fitted;
  const std::size_t n = f.size();
  std::vector<long double> wv(n);
  for (std::size_t p = 0; p < n; ++p) wv[p] = static_cast<long double>(w.values[p]) * f.grid.cell_volume(p);

  double scale = 0.0;
  for (double v : f.values) scale = std::max(scale, std::abs(v));
  scale *= std::numeric_limits<double>::epsilon();

  LevelSetReport rep;
  std::map<double, std::pair<long double, long double>> sums;  // value -> (sum w f, sum w)
  std::map<double, std::size_t> counts;
  for (std::size_t p = 0; p < n; ++p) {
    auto& s = sums[fstar.values[p]];
    s.first += wv[p] * f.values[p];
    s.second += wv[p];
    ++counts[fstar.values[p]];
  }
  for (const auto& [c, s] : sums) {
    LevelSetEntry e;
    e.value = c;
    e.count = counts[c];
    e.mean = static_cast<double>(s.first / s.second);
    // Relative to |c|, or to the data scale for values near zero.
    const double denom = std::max(std::abs(c), scale);
    e.rel_err = denom > 0.0 ? std::abs(e.mean - c) / denom : 0.0;
    rep.worst_rel_err = std::max(rep.worst_rel_err, e.rel_err);
    rep.levels.push_back(e);
  }

  // Sampled sets: sublevel and superlevel sets of random monotone functions.
  MonotoneSampler sampler(f.grid, sig, 0.0, 1.0, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  rep.worst_lower = rep.worst_upper = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    const GridFunction g = sampler.next();
    const double t = g.values[pick(rng)];
    for (const auto& entry : rep.levels) {
      const double c = entry.value;
      long double lnum = 0, lden = 0, unum = 0, uden = 0;
      for (std::size_t p = 0; p < n; ++p) {
        if (g.values[p] <= t && fstar.values[p] >= c) {
          lnum += wv[p] * f.values[p];
          lden += wv[p];
        }
        if (g.values[p] >= t && fstar.values[p] <= c) {
          unum += wv[p] * f.values[p];
          uden += wv[p];
        }
      }
      if (lden > 0) rep.worst_lower = std::max(rep.worst_lower, static_cast<double>(c - lnum / lden));
      if (uden > 0) rep.worst_upper = std::max(rep.worst_upper, static_cast<double>(unum / uden - c));
    }
    rep.sets_sampled += 2;
  }
  return rep;
}

}  // namespace monoreg
