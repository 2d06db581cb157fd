#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "monoreg/grid.hpp"
#include "monoreg/order.hpp"

namespace monoreg {

/// Contents of a grid-function file pair: `<name>.csv` with header
/// `i1,...,id,value[,weight]` (0-based multi-indices) and a `<name>.json`
/// sidecar carrying box, breakpoints and (optionally) the signature.
struct GridFile {
  GridFunction values;
  std::optional<GridFunction> weights;
  std::optional<Signature> signature;
};

/// Shortest decimal that is still written with 17 significant digits
/// (`%.17g`); parses back to the identical double.
std::string format_double(double v);

/// `foo/bar.csv` -> `foo/bar.json`.
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

GridFile parse_grid(std::istream& csv, const std::string& sidecar_json);
GridFile read_grid(const std::filesystem::path& csv);

std::string grid_csv(const GridFunction& values, const GridFunction* weights = nullptr);
std::string grid_sidecar(const GridSpec& grid, const std::optional<Signature>& sig);

/// Writes the CSV and its sidecar, each through a temporary file and rename.
void write_grid(const std::filesystem::path& csv, const GridFunction& values,
                const GridFunction* weights = nullptr,
                const std::optional<Signature>& sig = std::nullopt);

void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace monoreg
