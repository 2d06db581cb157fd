#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace monoreg::detail {

/// Maximum-weight closure on a DAG: choose S maximising sum_{i in S} weight[i]
/// subject to (u in S => v in S) for every arc (u, v). Solved as a min s-t
/// cut. Returns the inclusion-minimal optimal S and its weight.
struct ClosureResult {
  std::vector<bool> in_set;
  double weight = 0.0;
};

ClosureResult max_weight_closure(std::span<const double> weight,
                                 std::span<const std::pair<std::size_t, std::size_t>> arcs);

}  // namespace monoreg::detail
