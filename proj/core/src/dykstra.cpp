#include <algorithm>
#include <cmath>

#include "monoreg/error.hpp"
#include "monoreg/isotonic.hpp"

namespace monoreg {

namespace {

/// Smallest monotone majorant: propagate maxima along a linear extension.
std::vector<double> monotone_majorant(std::span<const double> g, const Lattice& lattice,
                                      const Signature& sig,
                                      const std::vector<std::vector<std::size_t>>& preds) {
  std::vector<double> out(g.begin(), g.end());
  for (std::size_t v : topological_order(lattice, sig))
    for (std::size_t u : preds[v]) out[v] = std::max(out[v], out[u]);
  return out;
}

}  // namespace

std::vector<double> dykstra_values(std::span<const double> f, std::span<const double> w,
                                   const Lattice& lattice, const Signature& sig, double gap_tol,
                                   std::size_t max_sweeps, DykstraStats* stats) {
  if (f.size() != lattice.size() || w.size() != lattice.size())
    throw DimensionError("dykstra: data and weights must match the grid size");
  const std::size_t n = f.size();
  const auto arcs = covering_pairs(lattice, sig);
  std::vector<std::vector<std::size_t>> preds(n);
  for (const auto& [lo, hi] : arcs) preds[hi].push_back(lo);

  // Dual variables lambda_e >= 0 for g(lo) - g(hi) <= 0; g = f - W^{-1} A^T lambda.
  std::vector<double> lambda(arcs.size(), 0.0);
  std::vector<double> g(f.begin(), f.end());
  long double fnorm2 = 0;
  for (std::size_t p = 0; p < n; ++p) fnorm2 += static_cast<long double>(w[p]) * f[p] * f[p];
  const double threshold = gap_tol * std::max(static_cast<double>(fnorm2), 1e-300);

  DykstraStats st;
  std::vector<double> feasible = monotone_majorant(g, lattice, sig, preds);
  const std::size_t check_every = 16;
  for (std::size_t sweep = 1; sweep <= max_sweeps; ++sweep) {
    for (std::size_t e = 0; e < arcs.size(); ++e) {
      const auto [lo, hi] = arcs[e];
      const double ilo = 1.0 / w[lo], ihi = 1.0 / w[hi];
      const double step = std::max(-lambda[e], (g[lo] - g[hi]) / (ilo + ihi));
      lambda[e] += step;
      g[lo] -= step * ilo;
      g[hi] += step * ihi;
    }
    st.sweeps = sweep;
    if (sweep % check_every != 0 && sweep != max_sweeps) continue;

    // Duality gap between the projected primal point and the dual value.
    feasible = monotone_majorant(g, lattice, sig, preds);
    long double primal = 0, dual = 0;
    std::vector<long double> at(n, 0);
    for (std::size_t e = 0; e < arcs.size(); ++e) {
      at[arcs[e].first] += lambda[e];
      at[arcs[e].second] -= lambda[e];
      dual += static_cast<long double>(lambda[e]) * (f[arcs[e].first] - f[arcs[e].second]);
    }
    for (std::size_t p = 0; p < n; ++p) {
      const long double d = static_cast<long double>(f[p]) - feasible[p];
      primal += 0.5L * w[p] * d * d;
      dual -= 0.5L * at[p] * at[p] / w[p];
    }
    st.gap = static_cast<double>(primal - dual);
    if (st.gap <= threshold) {
      st.converged = true;
      break;
    }
  }
  if (stats) *stats = st;
  return feasible;
}

}  // namespace monoreg
