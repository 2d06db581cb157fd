#include "monoreg/isotonic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

#include "closure.hpp"
#include "monoreg/error.hpp"

namespace monoreg {

namespace {

struct Pool {
  long double sum_wf = 0;
  long double sum_w = 0;
  std::size_t count = 0;
  double single = 0.0;  // the value when count == 1

  double mean() const {
    return count == 1 ? single : static_cast<double>(sum_wf / sum_w);
  }
};

Pool pool_of(double f, double w) { return Pool{static_cast<long double>(w) * f, w, 1, f}; }

void absorb(Pool& into, const Pool& other) {
  into.sum_wf += other.sum_wf;
  into.sum_w += other.sum_w;
  into.count += other.count;
}

/// Stack-based PAVA over an already ordered chain.
std::vector<double> pava_chain(std::span<const double> f, std::span<const double> w) {
  std::vector<Pool> pools;
  std::vector<std::size_t> lengths;
  for (std::size_t i = 0; i < f.size(); ++i) {
    pools.push_back(pool_of(f[i], w[i]));
    lengths.push_back(1);
    while (pools.size() > 1 && pools[pools.size() - 2].mean() > pools.back().mean()) {
      absorb(pools[pools.size() - 2], pools.back());
      lengths[lengths.size() - 2] += lengths.back();
      pools.pop_back();
      lengths.pop_back();
    }
  }
  std::vector<double> out;
  out.reserve(f.size());
  for (std::size_t b = 0; b < pools.size(); ++b) out.insert(out.end(), lengths[b], pools[b].mean());
  return out;
}

/// Disjoint-set forest over pooled blocks.
struct BlockForest {
  std::vector<std::size_t> parent;
  std::vector<Pool> pool;

  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (pool[a].count < pool[b].count) std::swap(a, b);
    parent[b] = a;
    absorb(pool[a], pool[b]);
  }
};

/// Exact isotonic regression on one slice given its local DAG.
///
/// Recursive partitioning: for a block with weighted mean m, the set
/// {f* > m} is the minimal maximum-weight closure for weights w (f - m). A
/// block whose best closure gains nothing is a level set of f*.
std::vector<double> partition_solve(std::span<const double> f, std::span<const double> w,
                                    std::span<const CoveringPair> arcs) {
  const std::size_t n = f.size();
  std::vector<std::vector<std::size_t>> out_arcs(n);
  for (const auto& [lo, hi] : arcs) out_arcs[lo].push_back(hi);

  std::vector<std::size_t> label(n, 0);  // current block id per node
  std::vector<std::size_t> local(n, 0);
  std::vector<double> fitted(n, 0.0);
  std::vector<std::size_t> final_label(n, 0);
  std::size_t next_label = 1, final_count = 0;

  std::vector<std::vector<std::size_t>> work;
  work.emplace_back(n);
  std::iota(work.back().begin(), work.back().end(), std::size_t{0});

  std::vector<double> resid;
  std::vector<CoveringPair> block_arcs;
  while (!work.empty()) {
    std::vector<std::size_t> block = std::move(work.back());
    work.pop_back();
    const std::size_t id = next_label++;
    for (std::size_t k = 0; k < block.size(); ++k) {
      label[block[k]] = id;
      local[block[k]] = k;
    }
    block_arcs.clear();
    bool feasible = true;
    for (std::size_t u : block)
      for (std::size_t v : out_arcs[u])
        if (label[v] == id) {
          block_arcs.emplace_back(local[u], local[v]);
          if (f[u] > f[v]) feasible = false;
        }
    if (feasible) {
      // Unconstrained optimum already satisfies every internal constraint.
      for (std::size_t u : block) {
        fitted[u] = f[u];
        final_label[u] = final_count++;
      }
      continue;
    }
    Pool p;
    for (std::size_t u : block) {
      p.sum_wf += static_cast<long double>(w[u]) * f[u];
      p.sum_w += w[u];
    }
    p.count = block.size();
    const double m = static_cast<double>(p.sum_wf / p.sum_w);
    resid.resize(block.size());
    double total_abs = 0.0;
    for (std::size_t k = 0; k < block.size(); ++k) {
      resid[k] = w[block[k]] * (f[block[k]] - m);
      total_abs += std::abs(resid[k]);
    }
    const detail::ClosureResult cl = detail::max_weight_closure(resid, block_arcs);
    const std::size_t upper_size =
        static_cast<std::size_t>(std::count(cl.in_set.begin(), cl.in_set.end(), true));
    if (cl.weight > 1e-13 * total_abs && upper_size > 0 && upper_size < block.size()) {
      std::vector<std::size_t> upper, lower;
      for (std::size_t k = 0; k < block.size(); ++k) (cl.in_set[k] ? upper : lower).push_back(block[k]);
      work.push_back(std::move(lower));
      work.push_back(std::move(upper));
      continue;
    }
    for (std::size_t u : block) {
      fitted[u] = m;
      final_label[u] = final_count;
    }
    ++final_count;
  }

  // Fixed-point pass: pool any violated covering pair left by rounding.
  BlockForest forest;
  forest.parent.resize(final_count);
  std::iota(forest.parent.begin(), forest.parent.end(), std::size_t{0});
  forest.pool.assign(final_count, Pool{});
  for (std::size_t u = 0; u < n; ++u) {
    Pool& q = forest.pool[final_label[u]];
    q.sum_wf += static_cast<long double>(w[u]) * f[u];
    q.sum_w += w[u];
    q.single = fitted[u];
    ++q.count;
  }
  // Singleton pools report f exactly; multi-point pools report the partition value.
  std::vector<double> value(final_count);
  for (std::size_t u = 0; u < n; ++u) value[final_label[u]] = fitted[u];
  bool changed = true;
  bool merged_any = false;
  while (changed) {
    changed = false;
    for (const auto& [lo, hi] : arcs) {
      const std::size_t a = forest.find(final_label[lo]);
      const std::size_t b = forest.find(final_label[hi]);
      if (a != b && value[a] > value[b]) {
        forest.unite(a, b);
        const std::size_t r = forest.find(a);
        value[r] = forest.pool[r].mean();
        changed = merged_any = true;
      }
    }
  }
  if (merged_any)
    for (std::size_t u = 0; u < n; ++u) fitted[u] = value[forest.find(final_label[u])];
  return fitted;
}

struct SliceLayout {
  Lattice local;                     // over active axes
  Signature local_sig{std::vector<int>{1}};
  std::vector<std::size_t> active, free;
  Lattice free_lattice;
};

SliceLayout make_layout(const Lattice& lattice, const Signature& sig) {
  SliceLayout L;
  L.active = sig.active_axes();
  L.free = sig.free_axes();
  std::vector<std::size_t> ext_a, ext_f;
  for (std::size_t a : L.active) ext_a.push_back(lattice.extent(a));
  for (std::size_t a : L.free) ext_f.push_back(lattice.extent(a));
  L.local = Lattice(ext_a);
  L.local_sig = sig.restricted_to_active();
  L.free_lattice = ext_f.empty() ? Lattice({1}) : Lattice(ext_f);
  return L;
}

/// Solves with the first active direction positive; callers canonicalise.
std::vector<double> solve_canonical(std::span<const double> f, std::span<const double> w,
                                    const Lattice& lattice, const Signature& sig, Engine engine) {
  std::vector<double> out(f.begin(), f.end());
  if (sig.all_free() || is_monotone(f, lattice, sig)) return out;

  if (engine == Engine::Dykstra) return dykstra_values(f, w, lattice, sig, 1e-10, 1000000);

  const SliceLayout L = make_layout(lattice, sig);
  const auto local_arcs = covering_pairs(L.local, L.local_sig);
  std::vector<std::size_t> global(L.local.size());
  std::vector<double> fs(L.local.size()), ws(L.local.size());
  MultiIndex full(lattice.dim());
  for (std::size_t s = 0; s < L.free_lattice.size(); ++s) {
    const MultiIndex free_idx = L.free.empty() ? MultiIndex{} : L.free_lattice.multi(s);
    for (std::size_t k = 0; k < L.free.size(); ++k) full[L.free[k]] = free_idx[k];
    for (std::size_t l = 0; l < L.local.size(); ++l) {
      const MultiIndex loc = L.local.multi(l);
      for (std::size_t k = 0; k < L.active.size(); ++k) full[L.active[k]] = loc[k];
      global[l] = lattice.linear(full);
      fs[l] = f[global[l]];
      ws[l] = w[global[l]];
    }
    std::vector<double> fit;
    if (L.active.size() == 1) {
      if (L.local_sig[0] < 0) {
        std::reverse(fs.begin(), fs.end());
        std::reverse(ws.begin(), ws.end());
      }
      fit = pava_chain(fs, ws);
      if (L.local_sig[0] < 0) std::reverse(fit.begin(), fit.end());
    } else {
      if (is_monotone(fs, L.local, L.local_sig)) {
        fit = fs;
      } else {
        fit = partition_solve(fs, ws, local_arcs);
      }
    }
    for (std::size_t l = 0; l < L.local.size(); ++l) out[global[l]] = fit[l];
  }
  return out;
}

void check_inputs(std::span<const double> f, std::span<const double> w, const Lattice& lattice,
                  const Signature& sig) {
  if (lattice.dim() != sig.dim()) throw DimensionError("signature length does not match grid dimension");
  if (f.size() != lattice.size() || w.size() != lattice.size())
    throw DimensionError("data and weights must match the grid size");
  for (double v : f)
    if (!std::isfinite(v)) throw DomainError("data values must be finite");
  for (double v : w)
    if (!std::isfinite(v) || !(v > 0.0)) throw DomainError("weights must be finite and positive");
}

int pow2_exponent(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  if (m == 0.0) return 0;
  int e = 0;
  std::frexp(m, &e);  // m = frac * 2^e, frac in [0.5, 1)
  return e;
}

}  // namespace

std::vector<double> pava_1d(std::span<const double> f, std::span<const double> w) {
  if (f.empty()) throw DimensionError("pava_1d: empty input");
  if (f.size() != w.size()) throw DimensionError("pava_1d: data and weights differ in length");
  for (double v : w)
    if (!std::isfinite(v) || !(v > 0.0)) throw DomainError("pava_1d: weights must be positive");
  return pava_chain(f, w);
}

std::vector<double> solve_values(std::span<const double> f, std::span<const double> w,
                                 const Lattice& lattice, const Signature& sig, Engine engine) {
  check_inputs(f, w, lattice, sig);
  const auto active = sig.active_axes();
  // p_sigma(f) = -p_{-sigma}(-f): map both members of the pair onto one computation.
  if (!active.empty() && sig[active.front()] < 0) {
    std::vector<double> neg(f.size());
    std::transform(f.begin(), f.end(), neg.begin(), [](double v) { return -v; });
    std::vector<double> out = solve_canonical(neg, w, lattice, sig.negated(), engine);
    for (double& v : out) v = -v;
    return out;
  }
  return solve_canonical(f, w, lattice, sig, engine);
}

std::vector<std::vector<std::size_t>> level_blocks(std::span<const double> values,
                                                   const Lattice& lattice, const Signature& sig) {
  const std::size_t n = lattice.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& [lo, hi] : covering_pairs(lattice, sig))
    if (values[lo] == values[hi]) parent[find(lo)] = find(hi);
  std::vector<std::vector<std::size_t>> groups(n);
  for (std::size_t p = 0; p < n; ++p) groups[find(p)].push_back(p);
  std::vector<std::vector<std::size_t>> out;
  for (auto& g : groups)
    if (!g.empty()) out.push_back(std::move(g));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

SolveResult solve(const GridFunction& f, const GridFunction& w, const Signature& sig,
                  const SolveOptions& options) {
  if (!(f.grid == w.grid)) throw DimensionError("solve: data and weights live on different grids");
  check_weight(w);
  const Lattice& lat = f.grid.lattice();
  std::vector<double> fit = solve_values(f.values, w.values, lat, sig, options.engine);

  SolveResult res{GridFunction(f.grid, std::move(fit)), {}, 0.0, {}};
  res.blocks = level_blocks(res.fitted.values, lat, sig);
  long double obj = 0;
  for (std::size_t p = 0; p < lat.size(); ++p) {
    const long double d = static_cast<long double>(f.values[p]) - res.fitted.values[p];
    obj += w.values[p] * d * d;
  }
  res.objective = static_cast<double>(obj);
  if (options.certify)
    res.certificate = certify(f, w, res.fitted, sig, options.certificate_tol, options.enumeration_cap);
  return res;
}

GridFunction minmax_oracle(const GridFunction& f, const GridFunction& w, const Signature& sig,
                           MinMaxVariant variant, std::uint64_t cap) {
  if (!(f.grid == w.grid)) throw DimensionError("minmax_oracle: data and weights on different grids");
  const Lattice& lat = f.grid.lattice();
  check_inputs(f.values, w.values, lat, sig);
  const std::size_t n = lat.size();
  const std::vector<std::uint64_t> uppers = enumerate_upper_masks(lat, sig, cap);
  if (n > 24) throw EnumerationLimitError("minmax_oracle: subset-sum table limited to 24 points");
  const std::uint64_t full = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;

  // Subset sums of w*f and w over every mask.
  const std::size_t table = std::size_t{1} << n;
  std::vector<double> swf(table, 0.0), sw(table, 0.0);
  for (std::size_t m = 1; m < table; ++m) {
    const std::size_t low = static_cast<std::size_t>(std::countr_zero(m));
    const std::size_t rest = m & (m - 1);
    swf[m] = swf[rest] + w.values[low] * f.values[low];
    sw[m] = sw[rest] + w.values[low];
  }

  std::vector<double> out(n);
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < n; ++x) {
    const std::uint64_t bit = std::uint64_t{1} << x;
    std::vector<std::uint64_t> ups, lows;
    for (std::uint64_t u : uppers) {
      if (u & bit) ups.push_back(u);
      if (!(u & bit)) lows.push_back(full & ~u);  // complement of an upper set missing x
    }
    auto av = [&](std::uint64_t l, std::uint64_t u) {
      const std::uint64_t m = l & u;
      return swf[m] / sw[m];
    };
    if (variant == MinMaxVariant::InfSup) {
      double best = inf;
      for (std::uint64_t l : lows) {
        double inner = -inf;
        for (std::uint64_t u : ups) {
          inner = std::max(inner, av(l, u));
          if (inner >= best) break;
        }
        best = std::min(best, inner);
      }
      out[x] = best;
    } else {
      double best = -inf;
      for (std::uint64_t u : ups) {
        double inner = inf;
        for (std::uint64_t l : lows) {
          inner = std::min(inner, av(l, u));
          if (inner <= best) break;
        }
        best = std::max(best, inner);
      }
      out[x] = best;
    }
  }
  return GridFunction(f.grid, std::move(out));
}

Certificate certify(const GridFunction& f, const GridFunction& w, const GridFunction& fitted,
                    const Signature& sig, double tol, std::uint64_t cap) {
  if (!(f.grid == w.grid) || !(f.grid == fitted.grid))
    throw DimensionError("certify: data, weights and fit must share one grid");
  const Lattice& lat = f.grid.lattice();
  if (lat.dim() != sig.dim()) throw DimensionError("certify: signature does not match grid");
  const std::size_t n = lat.size();
  const int ef = pow2_exponent(f.values);
  const int ew = pow2_exponent(w.values);

  Certificate c;
  c.tol = tol;
  c.monotone = is_monotone(fitted.values, lat, sig);
  c.max_violation = std::ldexp(max_violation(fitted.values, lat, sig), -ef);

  std::vector<double> r(n);
  long double orth = 0, integral = 0;
  for (std::size_t p = 0; p < n; ++p) {
    const double fs = std::ldexp(f.values[p], -ef);
    const double gs = std::ldexp(fitted.values[p], -ef);
    r[p] = std::ldexp(w.values[p], -ew) * (fs - gs);
    orth += static_cast<long double>(r[p]) * gs;
    integral += r[p];
  }
  c.orthogonality = std::abs(static_cast<double>(orth));
  c.integral = std::abs(static_cast<double>(integral));

  if (n <= enumeration_point_limit(cap) && n <= 63) {
    const auto uppers = enumerate_upper_masks(lat, sig, cap);
    double worst_u = 0.0, worst_l = 0.0;
    for (std::uint64_t u : uppers) {
      long double s = 0;
      for (std::uint64_t m = u; m; m &= m - 1) s += r[static_cast<std::size_t>(std::countr_zero(m))];
      worst_u = std::max(worst_u, static_cast<double>(s));
      // Lower set = complement of u: -<r, chi_L> = <r, chi_U> - <r, 1>.
      worst_l = std::max(worst_l, static_cast<double>(s - integral));
    }
    c.worst_upper = worst_u;
    c.worst_lower = worst_l;
    c.exhaustive = true;
    c.sets_checked = uppers.size();
  } else {
    // Any upper set meets each level block in a set closed under the block's
    // internal arcs, so summing per-block closures bounds the global maximum.
    const auto arcs = covering_pairs(lat, sig);
    std::vector<std::vector<std::size_t>> inner(n);
    for (const auto& [lo, hi] : arcs) inner[lo].push_back(hi);
    const auto blocks = level_blocks(fitted.values, lat, sig);
    std::vector<std::size_t> local(n);
    std::vector<double> rb, nb;
    std::vector<CoveringPair> up, down;
    long double worst_u = 0, worst_l = 0;
    for (const auto& b : blocks) {
      if (b.size() == 1) {
        worst_u += std::max(0.0, r[b[0]]);
        worst_l += std::max(0.0, -r[b[0]]);
        continue;
      }
      for (std::size_t k = 0; k < b.size(); ++k) local[b[k]] = k;
      rb.resize(b.size());
      nb.resize(b.size());
      up.clear();
      down.clear();
      for (std::size_t k = 0; k < b.size(); ++k) {
        rb[k] = r[b[k]];
        nb[k] = -r[b[k]];
        for (std::size_t v : inner[b[k]])
          if (fitted.values[v] == fitted.values[b[k]]) {
            up.emplace_back(k, local[v]);
            down.emplace_back(local[v], k);
          }
      }
      worst_u += std::max(0.0, detail::max_weight_closure(rb, up).weight);
      worst_l += std::max(0.0, detail::max_weight_closure(nb, down).weight);
    }
    c.worst_upper = static_cast<double>(worst_u);
    c.worst_lower = static_cast<double>(worst_l);
    c.exhaustive = false;
    c.sets_checked = 2 * blocks.size();
  }
  return c;
}

Certificate certify(const GridFunction& f, const GridFunction& w, const SolveResult& result,
                    const Signature& sig, double tol, std::uint64_t cap) {
  return certify(f, w, result.fitted, sig, tol, cap);
}

}  // namespace monoreg
