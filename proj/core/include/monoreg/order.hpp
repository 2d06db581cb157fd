#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace monoreg {

using MultiIndex = std::vector<std::size_t>;

/// Per-axis monotonicity directions: +1 isotone, -1 antitone, 0 unconstrained.
///
/// Axes with a nonzero entry are "active"; axes with entry 0 are "free". Two
/// points are comparable only if they agree on every free coordinate.
class Signature {
 public:
  explicit Signature(std::vector<int> dirs);

  /// Parses a comma separated list such as "+1,0,-1" (also accepts "+", "-", "0").
  static Signature parse(std::string_view text);

  std::size_t dim() const noexcept { return dirs_.size(); }
  int operator[](std::size_t axis) const { return dirs_.at(axis); }
  const std::vector<int>& dirs() const noexcept { return dirs_; }

  std::vector<std::size_t> active_axes() const;
  std::vector<std::size_t> free_axes() const;
  bool all_free() const noexcept;

  /// Signature restricted to the active axes (in increasing axis order).
  Signature restricted_to_active() const;

  Signature negated() const;

  std::string to_string() const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  std::vector<int> dirs_;
};

/// x <=_sigma y: sigma_i x_i <= sigma_i y_i on active axes, x_i == y_i on free axes.
bool leq_sigma(std::span<const double> x, std::span<const double> y, const Signature& sig);

/// Same relation on grid multi-indices (midpoints are increasing in the index).
bool leq_sigma(const MultiIndex& x, const MultiIndex& y, const Signature& sig);

/// Row-major index space of a product grid (last axis varies fastest).
class Lattice {
 public:
  Lattice() = default;
  explicit Lattice(std::vector<std::size_t> extents);

  std::size_t dim() const noexcept { return extents_.size(); }
  std::size_t size() const noexcept { return size_; }
  std::size_t extent(std::size_t axis) const { return extents_.at(axis); }
  const std::vector<std::size_t>& extents() const noexcept { return extents_; }
  std::size_t stride(std::size_t axis) const { return strides_.at(axis); }

  std::size_t linear(const MultiIndex& idx) const;
  MultiIndex multi(std::size_t linear) const;

  friend bool operator==(const Lattice& a, const Lattice& b) { return a.extents_ == b.extents_; }

 private:
  std::vector<std::size_t> extents_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

/// Covering pair (lo, hi) of linear indices: hi is one step from lo along an
/// active axis in that axis' direction, so monotonicity requires g(lo) <= g(hi).
using CoveringPair = std::pair<std::size_t, std::size_t>;

/// Hasse diagram of <=_sigma on the lattice.
std::vector<CoveringPair> covering_pairs(const Lattice& lattice, const Signature& sig);

/// g(lo) <= g(hi) for every covering pair.
bool is_monotone(std::span<const double> values, const Lattice& lattice, const Signature& sig);

/// Largest g(lo) - g(hi) over covering pairs (<= 0 iff monotone; 0 if there are no pairs).
double max_violation(std::span<const double> values, const Lattice& lattice, const Signature& sig);

/// A subset of grid points that is closed downward (Lower) or upward (Upper).
struct IndexSet {
  enum class Kind { Lower, Upper };

  Kind kind = Kind::Upper;
  std::vector<bool> mask;

  std::size_t count() const;
  bool contains(std::size_t i) const { return mask.at(i); }

  /// The complement, with the dual kind.
  IndexSet complement() const;

  /// Checks the closure property of `kind` under <=_sigma.
  bool is_closed(const Lattice& lattice, const Signature& sig) const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;
};

/// Enumeration refuses grids whose subset count 2^N exceeds this bound.
inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 20;

/// Largest grid size (number of points) admitted by a candidate-subset cap.
std::size_t enumeration_point_limit(std::uint64_t cap);

/// Every upper set as a bitmask over linear indices (bit i <=> point i), each
/// exactly once, including the empty set and the full grid. Throws
/// EnumerationLimitError when 2^N > cap.
std::vector<std::uint64_t> enumerate_upper_masks(const Lattice& lattice, const Signature& sig,
                                                 std::uint64_t cap = kDefaultEnumerationCap);

std::vector<IndexSet> enumerate_upper_sets(const Lattice& lattice, const Signature& sig,
                                           std::uint64_t cap = kDefaultEnumerationCap);

std::vector<IndexSet> enumerate_lower_sets(const Lattice& lattice, const Signature& sig,
                                           std::uint64_t cap = kDefaultEnumerationCap);

/// A linear extension of <=_sigma: every covering pair (lo, hi) has lo before hi.
std::vector<std::size_t> topological_order(const Lattice& lattice, const Signature& sig);

}  // namespace monoreg
