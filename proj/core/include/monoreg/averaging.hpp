#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "monoreg/grid.hpp"
#include "monoreg/isotonic.hpp"
#include "monoreg/order.hpp"

namespace monoreg {

/// Weighted mean of a grid-constant f over a union of cells (exact sums with
/// cell volumes). Throws DomainError for an empty region.
double av(const GridFunction& f, const GridFunction& w, const IndexSet& region);

/// Weighted mean of a field over the union of the region's cells of `grid`,
/// by tensor Gauss-Legendre quadrature.
double av(const ScalarField& f, const ScalarField& w, const GridSpec& grid, const IndexSet& region,
          int quadrature_order = 4);

/// Averaging formula on cell unions: inf over lower cell unions L containing
/// the cell of x of sup over upper cell unions U containing it of av over L ∩ U
/// (or the sup-inf variant). Needs an equidistant grid small enough to enumerate.
double a_grid(const GridFunction& f, const GridFunction& w, const Signature& sig,
              std::span<const double> x, MinMaxVariant variant = MinMaxVariant::InfSup,
              std::uint64_t cap = kDefaultEnumerationCap);

struct UnivariateResult {
  double value = 0.0;
  /// |value - value on a mesh of half the resolution|.
  double refinement_diff = 0.0;
};

/// inf over v in (x, b] of sup over u in [a, x) of int_u^v f w / int_u^v w, on
/// uniform meshes of [a, x] and [x, b] with about `mesh` cells in total, using
/// trapezoid cumulative integrals. The coarse mesh has half the cells.
UnivariateResult univariate_closed_form(const ScalarField& f, const ScalarField& w, const Box& box,
                                        double x, std::size_t mesh = 4000);

struct PointOptions {
  int first_k = 2;
  /// eps_k = max active edge / 2^k for k = first_k .. budget.
  int budget = 14;
  /// Levels whose grid would exceed this many points are not attempted.
  std::size_t max_points = std::size_t{1} << 20;
  /// A level is accepted once |v_k - v_{k-1}| <= tol holds on this many
  /// consecutive levels.
  int confirmations = 1;
};

struct PointLevel {
  int k = 0;
  double eps = 0.0;
  std::size_t points = 0;
  double value = 0.0;
};

struct PointResult {
  std::vector<double> x0;
  double value = 0.0;
  int levels_used = 0;
  double last_diff = 0.0;
  std::vector<PointLevel> history;
};

/// Value at x0 of the continuous monotone representative of the projection
/// of f. Free coordinates are fixed at x0's values; on the active sub-box the
/// fit is computed on grids with x0 interior to its cell at shrinking eps.
/// Throws ConvergenceError (carrying the last two values) if successive
/// values never get within tol.
PointResult pointwise_value(const ScalarField& f, const ScalarField& w, const Signature& sig,
                            const Box& box, std::span<const double> x0, double tol,
                            const PointOptions& options = {});

}  // namespace monoreg
