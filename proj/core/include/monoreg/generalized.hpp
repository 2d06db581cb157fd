#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "monoreg/grid.hpp"
#include "monoreg/order.hpp"

namespace monoreg {

/// Convex Phi on an interval I with a subgradient selection phi.
struct BregmanSpec {
  std::string name;
  std::function<double(double)> phi_fn;
  std::function<double(double)> dphi_fn;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_open = true;
  bool hi_open = true;
  bool strictly_convex = true;

  bool contains(double u) const;
};

/// Shipped specs: "square" (u^2), "entropy" (u log u on (0, inf)),
/// "exp" (e^u), "neglog" (-log u on (0, inf)).
BregmanSpec bregman_spec(const std::string& name);
std::vector<std::string> bregman_names();

/// Phi(u) - Phi(v) - phi(v) (u - v). Throws DomainError outside I.
double bregman(const BregmanSpec& spec, double u, double v);

/// sum over cells of bregman(f, g) * w * cell volume.
double objective(const BregmanSpec& spec, const GridFunction& f, const GridFunction& g,
                 const GridFunction& w);

struct VerifyOptions {
  std::size_t trials = 200;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  /// Any sampled g this close to J(f*) must be within uniqueness_radius of f*.
  double near_tol = 1e-12;
  double uniqueness_radius = 1e-6;
};

struct VerifyReport {
  std::string spec;
  std::size_t trials = 0;
  double j_star = 0.0;
  /// min over samples of J(g) - J(f*); >= -tol on success.
  double min_gap = 0.0;
  /// max over samples of J(f, f*) + J(f*, g) - J(f, g); <= tol on success.
  double worst_decomposition = 0.0;
  std::size_t near_optimal = 0;
  /// max sup distance to f* among near-optimal samples.
  double near_optimal_distance = 0.0;
  bool minimizer_ok = false;
  bool decomposition_ok = false;
  bool uniqueness_ok = false;
  /// Minimality and the decomposition inequality. Uniqueness is reported
  /// separately: J grows quadratically near f*, so a fixed gap threshold
  /// admits samples at distance ~ sqrt(near_tol / curvature).
  bool passed() const noexcept { return minimizer_ok && decomposition_ok; }
};

/// Checks that the least-squares fit f* also minimizes J^Phi over sampled
/// sigma-monotone g with values in I.
VerifyReport verify_minimizer(const BregmanSpec& spec, const GridFunction& f, const GridFunction& w,
                              const Signature& sig, const VerifyOptions& options = {});

/// Random sigma-monotone grid functions with values in [lo, hi]. Alternates
/// between projected i.i.d. samples, sums of per-axis monotone steps, and
/// mixtures with `anchor` (if given).
class MonotoneSampler {
 public:
  MonotoneSampler(GridSpec grid, Signature sig, double lo, double hi, std::uint64_t seed);
  GridFunction next(const GridFunction* anchor = nullptr);

 private:
  GridSpec grid_;
  Signature sig_;
  double lo_, hi_;
  std::mt19937_64 rng_;
  std::size_t count_ = 0;
};

/// |<f - f*, phi o f*>_w| with cell volumes, for the solver's f*.
double orthogonality_check(const GridFunction& f, const GridFunction& w, const Signature& sig,
                           const std::function<double(double)>& phi);
/// Same with a given fit.
double orthogonality_residual(const GridFunction& f, const GridFunction& w,
                              const GridFunction& fitted, const std::function<double(double)>& phi);

/// Test functions of bounded variation.
std::function<double(double)> step_at(double c);
std::function<double(double)> point_mass(double c);
std::function<double(double)> clipped_ramp(double a, double b);

struct LevelSetEntry {
  double value = 0.0;
  std::size_t count = 0;
  double mean = 0.0;
  double rel_err = 0.0;
};

struct LevelSetReport {
  std::vector<LevelSetEntry> levels;
  double worst_rel_err = 0.0;
  /// max over sampled L and levels c of c - Av(L ∩ {f* >= c}).
  double worst_lower = 0.0;
  /// max over sampled U and levels c of Av({f* <= c} ∩ U) - c.
  double worst_upper = 0.0;
  std::size_t sets_sampled = 0;
};

/// Weighted means of f over each level set {f* = c}, plus the one-sided
/// inequalities on sampled lower and upper sets.
LevelSetReport level_set_report(const GridFunction& f, const GridFunction& w, const Signature& sig,
                                std::size_t samples = 32, std::uint64_t seed = 1);

}  // namespace monoreg
