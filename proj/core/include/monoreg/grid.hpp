#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "monoreg/order.hpp"

namespace monoreg {

/// Compact box [lo_1, hi_1] x ... x [lo_d, hi_d] with lo_i < hi_i.
class Box {
 public:
  Box(std::vector<double> lo, std::vector<double> hi);
  static Box unit(std::size_t dim);

  std::size_t dim() const noexcept { return lo_.size(); }
  double lo(std::size_t axis) const { return lo_.at(axis); }
  double hi(std::size_t axis) const { return hi_.at(axis); }
  double edge(std::size_t axis) const { return hi_.at(axis) - lo_.at(axis); }
  double max_edge() const;
  const std::vector<double>& lo() const noexcept { return lo_; }
  const std::vector<double>& hi() const noexcept { return hi_; }

  bool contains(std::span<const double> x) const;

  /// Sub-box spanned by the given axes, in the given order.
  Box restricted(const std::vector<std::size_t>& axes) const;

  friend bool operator==(const Box&, const Box&) = default;

 private:
  std::vector<double> lo_;
  std::vector<double> hi_;
};

/// Rectangular partition of a box. Grid points are cell midpoints. Cells are
/// lower semiclosed and upper semiopen, except the last cell per axis, which
/// is closed at hi.
class GridSpec {
 public:
  /// General (possibly non-equidistant) partition; breakpoints per axis must
  /// be strictly increasing and start/end at the box bounds.
  GridSpec(Box box, std::vector<std::vector<double>> breakpoints);

  static GridSpec equidistant(Box box, std::vector<std::size_t> cells_per_axis);
  static GridSpec dyadic(Box box, int level);

  const Box& box() const noexcept { return box_; }
  std::size_t dim() const noexcept { return box_.dim(); }
  const Lattice& lattice() const noexcept { return lattice_; }
  std::size_t size() const noexcept { return lattice_.size(); }
  std::size_t cells(std::size_t axis) const { return lattice_.extent(axis); }
  const std::vector<double>& breakpoints(std::size_t axis) const { return breakpoints_.at(axis); }
  const std::vector<std::vector<double>>& breakpoints() const noexcept { return breakpoints_; }

  bool is_equidistant() const noexcept { return equidistant_; }
  std::optional<int> dyadic_level() const noexcept { return dyadic_level_; }

  double midpoint(std::size_t axis, std::size_t k) const;
  std::vector<double> point(std::size_t linear) const;
  std::vector<double> point(const MultiIndex& idx) const;

  double cell_lo(std::size_t axis, std::size_t k) const { return breakpoints_.at(axis).at(k); }
  double cell_hi(std::size_t axis, std::size_t k) const { return breakpoints_.at(axis).at(k + 1); }
  double cell_volume(std::size_t linear) const;

  /// Largest cell edge length.
  double len() const;
  /// Common cell volume; throws for non-equidistant grids.
  double vol() const;

  /// Cell containing x. Throws DomainError if x lies outside the box.
  MultiIndex cell_of(std::span<const double> x) const;
  std::size_t cell_linear(std::span<const double> x) const;

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.box_ == b.box_ && a.breakpoints_ == b.breakpoints_;
  }

 private:
  Box box_;
  std::vector<std::vector<double>> breakpoints_;
  Lattice lattice_;
  bool equidistant_ = false;
  std::optional<int> dyadic_level_;
};

struct WeightBounds {
  double lo;
  double hi;
};

/// A function constant on the cells of a grid, stored by grid point.
struct GridFunction {
  GridFunction(GridSpec grid, std::vector<double> values,
               std::optional<WeightBounds> weight_bounds = std::nullopt);

  static GridFunction constant(GridSpec grid, double value);

  GridSpec grid;
  std::vector<double> values;
  /// Declared bounds when the function serves as a weight.
  std::optional<WeightBounds> weight_bounds;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  double at(const MultiIndex& idx) const { return values.at(grid.lattice().linear(idx)); }
};

/// Throws DomainError unless all values are finite, positive and inside the
/// declared bounds (if any).
void check_weight(const GridFunction& w);

/// Smallest/largest value.
WeightBounds value_range(const GridFunction& g);

enum class Regularity { Bounded, Continuous };

/// Pointwise-evaluable function on a box.
struct ScalarField {
  std::function<double(std::span<const double>)> fn;
  Regularity regularity = Regularity::Continuous;
  /// Optional a-priori bounds (used as c_lo/c_hi when the field is a weight).
  std::optional<WeightBounds> declared_bounds;

  double operator()(std::span<const double> x) const { return fn(x); }
};

ScalarField constant_field(double value);

/// 2^level equal cells per axis.
GridSpec dyadic_grid(const Box& box, int level);

/// The finer of two dyadic grids on the same box.
GridSpec common_refinement(const GridSpec& a, const GridSpec& b);

GridFunction sample_midpoints(const ScalarField& f, const GridSpec& grid);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(int order);

/// Tensor Gauss-Legendre integral of f over one cell.
double integrate_cell(const ScalarField& f, const GridSpec& grid, std::size_t linear,
                      const QuadratureRule& rule);

/// Cell means of f by tensor Gauss-Legendre quadrature of the given order per axis.
GridFunction cell_average(const ScalarField& f, const GridSpec& grid, int order = 4);

/// Grid-constant field x -> values[cell_of(x)].
ScalarField lift(const GridFunction& values);

/// Equidistant grid with len <= eps whose hyperplanes avoid x0, so x0 lies in
/// the relative interior of its cell. Per axis the cell count p satisfies
/// p >= edge/eps; if the relative coordinate of x0 is a fraction m/n, p is the
/// smallest prime with p >= n + 1 as well.
GridSpec grid_around_point(const Box& box, std::span<const double> x0, double eps);

/// Smallest prime >= n.
std::size_t next_prime(std::size_t n);

/// Reduced denominator of r in [0, 1] if r is (numerically) a fraction with
/// denominator <= max_den, else nullopt.
std::optional<std::size_t> rational_denominator(double r, std::size_t max_den = 1000000);

struct Norms {
  double l2_weighted;
  double sup;
};

/// Weighted L2 and sup norms of g1 - g2 with exact cell volumes. The grids
/// must coincide or both be dyadic on the same box (compared on the finer one).
Norms norms(const GridFunction& g1, const GridFunction& g2,
            const GridFunction* w = nullptr);

/// `g` re-expressed on a finer grid that refines it (grid-constant lift).
GridFunction refine_to(const GridFunction& g, const GridSpec& finer);

}  // namespace monoreg
