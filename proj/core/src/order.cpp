#include "monoreg/order.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "monoreg/error.hpp"

namespace monoreg {

Signature::Signature(std::vector<int> dirs) : dirs_(std::move(dirs)) {
  if (dirs_.empty()) throw DimensionError("signature must have at least one axis");
  for (int s : dirs_) {
    if (s < -1 || s > 1) throw DomainError("signature entries must be -1, 0 or +1");
  }
}

Signature Signature::parse(std::string_view text) {
  std::vector<int> dirs;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view tok = text.substr(pos, comma - pos);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    if (tok == "+" || tok == "+1" || tok == "1") {
      dirs.push_back(1);
    } else if (tok == "-" || tok == "-1") {
      dirs.push_back(-1);
    } else if (tok == "0" || tok == "+0" || tok == "-0") {
      dirs.push_back(0);
    } else {
      throw DomainError("invalid signature entry '" + std::string(tok) + "'");
    }
    pos = comma + 1;
  }
  return Signature(std::move(dirs));
}

std::vector<std::size_t> Signature::active_axes() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dirs_.size(); ++i)
    if (dirs_[i] != 0) out.push_back(i);
  return out;
}

std::vector<std::size_t> Signature::free_axes() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dirs_.size(); ++i)
    if (dirs_[i] == 0) out.push_back(i);
  return out;
}

bool Signature::all_free() const noexcept {
  return std::all_of(dirs_.begin(), dirs_.end(), [](int s) { return s == 0; });
}

Signature Signature::restricted_to_active() const {
  std::vector<int> out;
  for (int s : dirs_)
    if (s != 0) out.push_back(s);
  if (out.empty()) throw DimensionError("signature has no active axis");
  return Signature(std::move(out));
}

Signature Signature::negated() const {
  std::vector<int> out(dirs_.size());
  std::transform(dirs_.begin(), dirs_.end(), out.begin(), [](int s) { return -s; });
  return Signature(std::move(out));
}

std::string Signature::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < dirs_.size(); ++i) {
    if (i) out += ',';
    out += dirs_[i] > 0 ? "+1" : dirs_[i] < 0 ? "-1" : "0";
  }
  return out;
}

bool leq_sigma(std::span<const double> x, std::span<const double> y, const Signature& sig) {
  if (x.size() != sig.dim() || y.size() != sig.dim())
    throw DimensionError("leq_sigma: point dimension does not match signature");
  for (std::size_t i = 0; i < sig.dim(); ++i) {
    const int s = sig[i];
    if (s == 0) {
      if (x[i] != y[i]) return false;
    } else if (s * x[i] > s * y[i]) {
      return false;
    }
  }
  return true;
}

bool leq_sigma(const MultiIndex& x, const MultiIndex& y, const Signature& sig) {
  if (x.size() != sig.dim() || y.size() != sig.dim())
    throw DimensionError("leq_sigma: index dimension does not match signature");
  for (std::size_t i = 0; i < sig.dim(); ++i) {
    const int s = sig[i];
    if (s == 0) {
      if (x[i] != y[i]) return false;
    } else if (s > 0 ? x[i] > y[i] : x[i] < y[i]) {
      return false;
    }
  }
  return true;
}

Lattice::Lattice(std::vector<std::size_t> extents) : extents_(std::move(extents)) {
  if (extents_.empty()) throw DimensionError("lattice must have at least one axis");
  strides_.assign(extents_.size(), 1);
  size_ = 1;
  for (std::size_t i = extents_.size(); i-- > 0;) {
    if (extents_[i] == 0) throw DimensionError("lattice extents must be positive");
    strides_[i] = size_;
    size_ *= extents_[i];
  }
}

std::size_t Lattice::linear(const MultiIndex& idx) const {
  if (idx.size() != extents_.size()) throw DimensionError("multi-index has wrong dimension");
  std::size_t out = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= extents_[i]) throw DomainError("multi-index out of range");
    out += idx[i] * strides_[i];
  }
  return out;
}

MultiIndex Lattice::multi(std::size_t linear) const {
  MultiIndex out(extents_.size());
  for (std::size_t i = 0; i < extents_.size(); ++i) {
    out[i] = linear / strides_[i];
    linear %= strides_[i];
  }
  return out;
}

std::vector<CoveringPair> covering_pairs(const Lattice& lattice, const Signature& sig) {
  if (lattice.dim() != sig.dim())
    throw DimensionError("covering_pairs: lattice and signature dimensions differ");
  std::vector<CoveringPair> pairs;
  for (std::size_t p = 0; p < lattice.size(); ++p) {
    const MultiIndex idx = lattice.multi(p);
    for (std::size_t axis = 0; axis < sig.dim(); ++axis) {
      const int s = sig[axis];
      if (s > 0 && idx[axis] + 1 < lattice.extent(axis)) {
        pairs.emplace_back(p, p + lattice.stride(axis));
      } else if (s < 0 && idx[axis] > 0) {
        pairs.emplace_back(p, p - lattice.stride(axis));
      }
    }
  }
  return pairs;
}

double max_violation(std::span<const double> values, const Lattice& lattice, const Signature& sig) {
  if (values.size() != lattice.size())
    throw DimensionError("value count does not match lattice size");
  double worst = 0.0;
  bool any = false;
  for (const auto& [lo, hi] : covering_pairs(lattice, sig)) {
    const double v = values[lo] - values[hi];
    worst = any ? std::max(worst, v) : v;
    any = true;
  }
  return any ? worst : 0.0;
}

bool is_monotone(std::span<const double> values, const Lattice& lattice, const Signature& sig) {
  if (values.size() != lattice.size())
    throw DimensionError("value count does not match lattice size");
  for (const auto& [lo, hi] : covering_pairs(lattice, sig))
    if (!(values[lo] <= values[hi])) return false;
  return true;
}

std::size_t IndexSet::count() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
}

IndexSet IndexSet::complement() const {
  IndexSet out;
  out.kind = kind == Kind::Lower ? Kind::Upper : Kind::Lower;
  out.mask.resize(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) out.mask[i] = !mask[i];
  return out;
}

bool IndexSet::is_closed(const Lattice& lattice, const Signature& sig) const {
  if (mask.size() != lattice.size()) throw DimensionError("index set size does not match lattice");
  for (const auto& [lo, hi] : covering_pairs(lattice, sig)) {
    if (kind == Kind::Upper && mask[lo] && !mask[hi]) return false;
    if (kind == Kind::Lower && mask[hi] && !mask[lo]) return false;
  }
  return true;
}

std::size_t enumeration_point_limit(std::uint64_t cap) {
  if (cap == 0) return 0;
  return static_cast<std::size_t>(std::bit_width(cap) - 1);
}

std::vector<std::size_t> topological_order(const Lattice& lattice, const Signature& sig) {
  if (lattice.dim() != sig.dim())
    throw DimensionError("topological_order: lattice and signature dimensions differ");
  std::vector<std::size_t> rank(lattice.size(), 0);
  for (std::size_t p = 0; p < lattice.size(); ++p) {
    const MultiIndex idx = lattice.multi(p);
    for (std::size_t axis = 0; axis < sig.dim(); ++axis) {
      if (sig[axis] > 0) rank[p] += idx[axis];
      if (sig[axis] < 0) rank[p] += lattice.extent(axis) - 1 - idx[axis];
    }
  }
  std::vector<std::size_t> order(lattice.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return rank[a] < rank[b]; });
  return order;
}

std::vector<std::uint64_t> enumerate_upper_masks(const Lattice& lattice, const Signature& sig,
                                                 std::uint64_t cap) {
  const std::size_t n = lattice.size();
  if (n > enumeration_point_limit(cap) || n > 63)
    throw EnumerationLimitError("upper-set enumeration refused: grid has " + std::to_string(n) +
                                " points, cap admits " +
                                std::to_string(enumeration_point_limit(cap)));

  // Decide points from the top of the order downward; a point may join the
  // set only once all of its upper covers are in, so every leaf is closed.
  std::vector<std::size_t> order = topological_order(lattice, sig);
  std::reverse(order.begin(), order.end());
  std::vector<std::uint64_t> up_mask(n, 0);
  for (const auto& [lo, hi] : covering_pairs(lattice, sig)) up_mask[lo] |= std::uint64_t{1} << hi;

  std::vector<std::uint64_t> out;
  struct Frame {
    std::size_t depth;
    std::uint64_t set;
  };
  std::vector<Frame> stack{{0, 0}};
  while (!stack.empty()) {
    const Frame fr = stack.back();
    stack.pop_back();
    if (fr.depth == n) {
      out.push_back(fr.set);
      continue;
    }
    const std::size_t p = order[fr.depth];
    stack.push_back({fr.depth + 1, fr.set});
    if ((fr.set & up_mask[p]) == up_mask[p])
      stack.push_back({fr.depth + 1, fr.set | (std::uint64_t{1} << p)});
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

IndexSet mask_to_set(std::uint64_t m, std::size_t n, IndexSet::Kind kind) {
  IndexSet s;
  s.kind = kind;
  s.mask.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.mask[i] = (m >> i) & 1u;
  return s;
}

}  // namespace

std::vector<IndexSet> enumerate_upper_sets(const Lattice& lattice, const Signature& sig,
                                           std::uint64_t cap) {
  std::vector<IndexSet> out;
  for (std::uint64_t m : enumerate_upper_masks(lattice, sig, cap))
    out.push_back(mask_to_set(m, lattice.size(), IndexSet::Kind::Upper));
  return out;
}

std::vector<IndexSet> enumerate_lower_sets(const Lattice& lattice, const Signature& sig,
                                           std::uint64_t cap) {
  std::vector<IndexSet> out;
  for (const IndexSet& u : enumerate_upper_sets(lattice, sig, cap)) out.push_back(u.complement());
  return out;
}

}  // namespace monoreg
