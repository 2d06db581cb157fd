#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace monoreg::detail {

using ordered_json = nlohmann::ordered_json;

/// Pretty-prints with insertion key order and every floating value at 17
/// significant digits; non-finite floats become null.
std::string dump_json(const ordered_json& j, int indent = 2);

/// NaN -> null, otherwise the number.
ordered_json number_or_null(double v);

}  // namespace monoreg::detail
