#pragma once

#include <optional>
#include <string>
#include <vector>

#include "monoreg/grid.hpp"
#include "monoreg/isotonic.hpp"
#include "monoreg/order.hpp"

namespace monoreg {

enum class NormKind { L2, Sup };

std::string to_string(NormKind kind);
NormKind parse_norm(const std::string& text);

/// How a field is reduced to a grid-constant function.
enum class Discretization { Midpoint, CellAverage };

struct GridConstantProjection {
  GridFunction cells;  ///< fitted value per cell
  ScalarField field;   ///< the same values lifted to the box
};

/// Projection of a grid-constant f under a grid-constant weight: the discrete
/// fit on the grid points, lifted back to cells. Requires an equidistant grid.
GridConstantProjection project_grid_constant(const GridFunction& f, const GridFunction& w,
                                             const Signature& sig);

/// sqrt(c_hi / c_lo) * disc_err for L2, disc_err for Sup.
double error_bounds(double c_lo, double c_hi, double disc_err, NormKind norm);

struct ProjectionOptions {
  NormKind norm = NormKind::L2;
  int min_level = 0;
  /// Defaults to floor(20 / d), so grids stay within 2^20 points.
  std::optional<int> max_level;
  /// Stop at the first level whose certified bound is <= target. A target
  /// of 0 never stops early.
  double target = 0.0;
  /// Defaults to Midpoint for continuous f and CellAverage for bounded f.
  std::optional<Discretization> discretization;
  /// Dyadic level on which w is known to be constant. A constant weight
  /// (declared bounds lo == hi) counts as level 0.
  std::optional<int> weight_level;
  int quadrature_order = 4;
  /// Sup errors are sampled on 2^(n + sup_oversample) points per axis.
  int sup_oversample = 3;
  /// Cap on sup-error samples; the oversampling shrinks to respect it.
  std::size_t max_sup_samples = std::size_t{1} << 24;
  bool certify = true;
};

struct LevelRecord {
  int level = 0;
  double len = 0.0;
  /// ||f_n - f|| in the requested norm (quadrature or sampled surrogate).
  double disc_err = 0.0;
  /// integral of w_n (f_n - p(f_n))^2
  double objective = 0.0;
  /// error_bounds(c_lo, c_hi, disc_err)
  double bound = 0.0;
  /// ||p_n - p_{n-1}|| in the requested norm; absent on the first level.
  std::optional<double> successive_diff;
  double c_lo = 0.0;
  double c_hi = 0.0;
  /// The bound is rigorous (w constant on this level's cells).
  bool bound_certified = false;
  std::size_t blocks = 0;
  bool certificate_passed = true;
};

struct ConvergenceReport {
  NormKind norm = NormKind::L2;
  std::vector<LevelRecord> levels;
  std::optional<GridFunction> final;
  bool target_reached = false;
  std::vector<std::string> warnings;
};

/// Discretizes f and w on dyadic grids of increasing level, projects each
/// level exactly, and reports per-level error bounds.
ConvergenceReport approximate_projection(const ScalarField& f, const ScalarField& w,
                                         const Signature& sig, const Box& box,
                                         const ProjectionOptions& options = {});

/// ||g - f|| for a grid-constant g and a field f: tensor Gauss quadrature of
/// |g - f|^2 per cell (L2) or the max over a sampled subgrid of each closed
/// cell (Sup).
double field_distance(const GridFunction& g, const ScalarField& f, NormKind norm,
                      int quadrature_order = 4, int oversample = 3);

}  // namespace monoreg
