#include "monoreg/grid_io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

#include "json_util.hpp"
#include "monoreg/error.hpp"

namespace monoreg {

namespace detail {

ordered_json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

namespace {

void dump_into(const ordered_json& j, int indent, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += ordered_json(it.key()).dump();
        out += ": ";
        dump_into(it.value(), indent, depth + 1, out);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const auto& e) { return e.is_primitive(); });
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += pad;
        dump_into(e, indent, depth + 1, out);
      }
      out += flat ? "]" : "\n" + close_pad + "]";
      return;
    }
    case ordered_json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_double(v) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const ordered_json& j, int indent) {
  std::string out;
  dump_into(j, indent, 0, out);
  out += "\n";
  return out;
}

}  // namespace detail

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Keep floats recognisable as floats in JSON and CSV.
  if (std::isfinite(v) && s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  p.replace_extension(".json");
  return p;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  for (auto& s : out) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
  return out;
}

double parse_number(const std::string& tok, std::size_t line, const char* what) {
  if (tok.empty()) throw ParseError(std::string("empty ") + what, line);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || errno == ERANGE || !std::isfinite(v))
    throw ParseError(std::string("invalid ") + what + " '" + tok + "'", line);
  return v;
}

std::size_t parse_index(const std::string& tok, std::size_t line) {
  if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError("invalid index '" + tok + "'", line);
  return static_cast<std::size_t>(std::stoull(tok));
}

std::vector<double> json_doubles(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string("sidecar: '") + what + "' must be an array", 0);
  std::vector<double> v;
  for (const auto& e : j) {
    if (!e.is_number()) throw ParseError(std::string("sidecar: '") + what + "' must hold numbers", 0);
    v.push_back(e.get<double>());
  }
  return v;
}

}  // namespace

GridFile parse_grid(std::istream& csv, const std::string& sidecar_json) {
  nlohmann::json side;
  try {
    side = nlohmann::json::parse(sidecar_json);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("sidecar: ") + e.what(), 0);
  }
  if (!side.is_object() || !side.contains("box") || !side.contains("breakpoints"))
    throw ParseError("sidecar: expected object with 'box' and 'breakpoints'", 0);
  const auto& jb = side["box"];
  if (!jb.is_object() || !jb.contains("lo") || !jb.contains("hi"))
    throw ParseError("sidecar: 'box' needs 'lo' and 'hi'", 0);

  std::optional<GridSpec> grid;
  std::optional<Signature> sig;
  try {
    Box box(json_doubles(jb["lo"], "box.lo"), json_doubles(jb["hi"], "box.hi"));
    std::vector<std::vector<double>> bps;
    if (!side["breakpoints"].is_array()) throw ParseError("sidecar: 'breakpoints' must be an array", 0);
    for (const auto& axis : side["breakpoints"]) bps.push_back(json_doubles(axis, "breakpoints"));
    grid.emplace(std::move(box), std::move(bps));
    if (side.contains("signature") && !side["signature"].is_null()) {
      if (!side["signature"].is_string()) throw ParseError("sidecar: 'signature' must be a string", 0);
      sig = Signature::parse(side["signature"].get<std::string>());
      if (sig->dim() != grid->dim()) throw ParseError("sidecar: signature length does not match grid", 0);
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("sidecar: ") + e.what(), 0);
  }

  const std::size_t d = grid->dim();
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(csv, line)) throw ParseError("empty CSV", 1);
  ++lineno;
  const auto header = split_csv_line(line);
  if (header.size() != d + 1 && header.size() != d + 2)
    throw ParseError("header must be i1,...,i" + std::to_string(d) + ",value[,weight]", 1);
  for (std::size_t i = 0; i < d; ++i)
    if (header[i] != "i" + std::to_string(i + 1))
      throw ParseError("header column " + std::to_string(i + 1) + " must be 'i" +
                           std::to_string(i + 1) + "'", 1);
  if (header[d] != "value") throw ParseError("header must contain 'value' after the indices", 1);
  const bool has_weight = header.size() == d + 2;
  if (has_weight && header[d + 1] != "weight") throw ParseError("last header column must be 'weight'", 1);

  const Lattice& lat = grid->lattice();
  std::vector<double> values(lat.size(), 0.0), weights(has_weight ? lat.size() : 0, 0.0);
  std::vector<std::size_t> seen(lat.size(), 0);
  while (std::getline(csv, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cols = split_csv_line(line);
    if (cols.size() != header.size())
      throw ParseError("expected " + std::to_string(header.size()) + " columns, got " +
                           std::to_string(cols.size()), lineno);
    MultiIndex idx(d);
    for (std::size_t i = 0; i < d; ++i) {
      idx[i] = parse_index(cols[i], lineno);
      if (idx[i] >= lat.extent(i))
        throw ParseError("index i" + std::to_string(i + 1) + "=" + cols[i] + " out of range", lineno);
    }
    const std::size_t p = lat.linear(idx);
    if (seen[p]) throw ParseError("duplicate index (first seen on line " + std::to_string(seen[p]) + ")", lineno);
    seen[p] = lineno;
    values[p] = parse_number(cols[d], lineno, "value");
    if (has_weight) {
      weights[p] = parse_number(cols[d + 1], lineno, "weight");
      if (!(weights[p] > 0.0) || !std::isfinite(weights[p])) throw ParseError("weight must be positive", lineno);
    }
  }
  for (std::size_t p = 0; p < lat.size(); ++p) {
    if (!seen[p]) {
      std::string s;
      for (std::size_t v : lat.multi(p)) s += (s.empty() ? "" : ",") + std::to_string(v);
      throw ParseError("missing index (" + s + ")", lineno + 1);
    }
  }
  GridFile out{GridFunction(*grid, std::move(values)), std::nullopt, sig};
  if (has_weight) out.weights.emplace(*grid, std::move(weights));
  return out;
}

GridFile read_grid(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  if (!in) throw ParseError("cannot open " + csv.string(), 0);
  const auto side = sidecar_path(csv);
  std::ifstream sin(side);
  if (!sin) throw ParseError("cannot open sidecar " + side.string(), 0);
  std::stringstream ss;
  ss << sin.rdbuf();
  return parse_grid(in, ss.str());
}

std::string grid_csv(const GridFunction& values, const GridFunction* weights) {
  if (weights && !(weights->grid == values.grid)) throw DimensionError("weights live on a different grid");
  const Lattice& lat = values.grid.lattice();
  std::string out;
  for (std::size_t i = 0; i < lat.dim(); ++i) out += "i" + std::to_string(i + 1) + ",";
  out += weights ? "value,weight\n" : "value\n";
  for (std::size_t p = 0; p < lat.size(); ++p) {
    for (std::size_t k : lat.multi(p)) out += std::to_string(k) + ",";
    out += format_double(values.values[p]);
    if (weights) out += "," + format_double(weights->values[p]);
    out += "\n";
  }
  return out;
}

std::string grid_sidecar(const GridSpec& grid, const std::optional<Signature>& sig) {
  detail::ordered_json j;
  j["box"]["lo"] = grid.box().lo();
  j["box"]["hi"] = grid.box().hi();
  j["breakpoints"] = grid.breakpoints();
  if (grid.dyadic_level())
    j["dyadic_level"] = *grid.dyadic_level();
  else
    j["dyadic_level"] = nullptr;
  if (sig)
    j["signature"] = sig->to_string();
  else
    j["signature"] = nullptr;
  return detail::dump_json(j);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << contents;
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_grid(const std::filesystem::path& csv, const GridFunction& values, const GridFunction* weights,
                const std::optional<Signature>& sig) {
  write_file_atomic(csv, grid_csv(values, weights));
  write_file_atomic(sidecar_path(csv), grid_sidecar(values.grid, sig));
}

}  // namespace monoreg
