#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "monoreg/grid.hpp"
#include "monoreg/order.hpp"

namespace monoreg {

/// Named analytic test field with its natural box and signature.
struct Builtin {
  std::string name;
  std::string description;
  Box box;
  Signature sig;
  ScalarField f;
  /// Closed-form projection under w = 1, where known.
  std::optional<std::function<double(std::span<const double>)>> exact;
};

/// paraboloid1d, monotone-plane, saddle, step-mixture, paraboloid-plane, neg-line.
Builtin builtin(const std::string& name);
std::vector<std::string> builtin_names();

}  // namespace monoreg
