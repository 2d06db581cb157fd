#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "monoreg/grid.hpp"
#include "monoreg/order.hpp"

namespace monoreg {

/// Optimality certificate of a candidate fit f* for data (f, w).
///
/// All inner products are discrete (sum over grid points, weighted by w) and
/// evaluated on data rescaled by powers of two so that max|f| <= 1 and
/// max w <= 1; the tolerance is absolute in those units.
struct Certificate {
  bool monotone = false;
  double max_violation = 0.0;  ///< max f*(lo) - f*(hi) over covering pairs
  double orthogonality = 0.0;  ///< |<f - f*, f*>_w|
  double integral = 0.0;       ///< |<f - f*, 1>_w|
  double worst_upper = 0.0;    ///< max over upper sets U of <f - f*, chi_U>_w
  double worst_lower = 0.0;    ///< max over lower sets L of -<f - f*, chi_L>_w
  bool exhaustive = false;     ///< true if all upper sets were enumerated
  std::size_t sets_checked = 0;
  double tol = 1e-9;

  bool passed() const noexcept {
    return monotone && orthogonality <= tol && integral <= tol && worst_upper <= tol &&
           worst_lower <= tol;
  }
};

struct SolveResult {
  GridFunction fitted;
  /// Maximal level blocks (linear indices, ascending); each block is
  /// connected through covering pairs and carries one fitted value.
  std::vector<std::vector<std::size_t>> blocks;
  /// sum w (f - f*)^2 over grid points
  double objective = 0.0;
  Certificate certificate;
};

enum class Engine {
  /// Exact: PAVA on chains, recursive threshold partitioning by max-weight
  /// closure otherwise, followed by a pooling fixed-point pass.
  Partition,
  /// Hildreth/Dykstra cyclic projection over covering-pair half-spaces,
  /// stopped on a duality gap.
  Dykstra,
};

struct SolveOptions {
  Engine engine = Engine::Partition;
  bool certify = true;
  double certificate_tol = 1e-9;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
  /// Dykstra only: stop once gap <= gap_tol * ||f||_w^2.
  double gap_tol = 1e-10;
  std::size_t max_sweeps = 1000000;
};

/// Weighted least-squares nondecreasing fit of a sequence.
std::vector<double> pava_1d(std::span<const double> f, std::span<const double> w);

/// Exact weighted isotonic regression of f w.r.t. <=_sigma on f's grid.
SolveResult solve(const GridFunction& f, const GridFunction& w, const Signature& sig,
                  const SolveOptions& options = {});

/// Raw-vector form of `solve` (fitted values only, no certificate).
std::vector<double> solve_values(std::span<const double> f, std::span<const double> w,
                                 const Lattice& lattice, const Signature& sig,
                                 Engine engine = Engine::Partition);

struct DykstraStats {
  std::size_t sweeps = 0;
  double gap = 0.0;
  bool converged = false;
};

/// Dykstra engine on raw vectors. The returned vector is exactly monotone (the
/// smallest monotone majorant of the last iterate).
std::vector<double> dykstra_values(std::span<const double> f, std::span<const double> w,
                                   const Lattice& lattice, const Signature& sig, double gap_tol,
                                   std::size_t max_sweeps, DykstraStats* stats = nullptr);

enum class MinMaxVariant { InfSup, SupInf };

/// Discrete averaging formula: at x0, min over lower sets L containing x0 of
/// max over upper sets U containing x0 of the weighted mean of f over L ∩ U
/// (or the max-min variant). Enumerates every lower and upper set.
GridFunction minmax_oracle(const GridFunction& f, const GridFunction& w, const Signature& sig,
                           MinMaxVariant variant = MinMaxVariant::InfSup,
                           std::uint64_t cap = kDefaultEnumerationCap);

Certificate certify(const GridFunction& f, const GridFunction& w, const GridFunction& fitted,
                    const Signature& sig, double tol = 1e-9,
                    std::uint64_t cap = kDefaultEnumerationCap);

Certificate certify(const GridFunction& f, const GridFunction& w, const SolveResult& result,
                    const Signature& sig, double tol = 1e-9,
                    std::uint64_t cap = kDefaultEnumerationCap);

/// Maximal blocks of equal value, connected through covering pairs.
std::vector<std::vector<std::size_t>> level_blocks(std::span<const double> values,
                                                   const Lattice& lattice, const Signature& sig);

}  // namespace monoreg
