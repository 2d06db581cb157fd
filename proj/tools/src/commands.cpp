#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>

#include "monoreg/averaging.hpp"
#include "monoreg/builtins.hpp"
#include "monoreg/error.hpp"
#include "monoreg/generalized.hpp"
#include "monoreg/grid_io.hpp"
#include "monoreg/isotonic.hpp"
#include "monoreg/projection.hpp"
#include "monoreg/reports.hpp"

namespace monoreg::cli {

namespace fs = std::filesystem;

namespace {

struct JobConfig {
  std::string in;
  std::string out;
  std::string builtin;
  std::string sig;
  std::string box;
  std::string norm = "l2";
  std::string discretization;
  std::string bregman = "square";
  std::string x0;
  int levels = -1;
  int min_level = 0;
  double target = 0.0;
  double tol = -1.0;
  std::size_t trials = 200;
  std::uint64_t seed = 1;
};

std::vector<double> parse_numbers(const std::string& text, char sep) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw Error("not a number: '" + item + "'");
    }
    if (used != item.size()) throw Error("not a number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw Error("empty number list");
  return out;
}

/// "lo:hi,lo:hi,..."
Box parse_box(const std::string& text) {
  std::vector<double> lo, hi;
  std::stringstream ss(text);
  std::string axis;
  while (std::getline(ss, axis, ',')) {
    const auto v = parse_numbers(axis, ':');
    if (v.size() != 2) throw Error("box axis must be lo:hi, got '" + axis + "'");
    lo.push_back(v[0]);
    hi.push_back(v[1]);
  }
  return Box(lo, hi);
}

/// Field source for converge/point: a builtin or a grid file lifted to a field.
struct FieldSource {
  ScalarField f;
  ScalarField w;
  Box box;
  Signature sig;
  std::optional<int> weight_level;
  std::optional<std::function<double(std::span<const double>)>> exact;
};

FieldSource load_field(const JobConfig& cfg) {
  if (cfg.builtin.empty() == cfg.in.empty()) throw Error("give exactly one of --builtin or --in");
  if (!cfg.builtin.empty()) {
    Builtin b = builtin(cfg.builtin);
    FieldSource src{b.f, constant_field(1.0), b.box, b.sig, 0, b.exact};
    if (!cfg.box.empty()) {
      src.box = parse_box(cfg.box);
      src.exact.reset();
    }
    if (!cfg.sig.empty()) {
      src.sig = Signature::parse(cfg.sig);
      src.exact.reset();
    }
    if (src.sig.dim() != src.box.dim()) throw DimensionError("signature length does not match the box");
    return src;
  }
  GridFile file = read_grid(cfg.in);
  std::optional<Signature> sig = file.signature;
  if (!cfg.sig.empty()) sig = Signature::parse(cfg.sig);
  if (!sig) throw Error("no signature: pass --sig or store one in the sidecar");
  FieldSource src{lift(file.values), constant_field(1.0), file.values.grid.box(), *sig, 0, std::nullopt};
  if (file.weights) {
    src.w = lift(*file.weights);
    const WeightBounds r = value_range(*file.weights);
    src.w.declared_bounds = r;
    src.weight_level = file.values.grid.dyadic_level();
  }
  return src;
}

GridFile load_grid(const JobConfig& cfg) {
  if (cfg.in.empty()) throw Error("--in is required");
  GridFile file = read_grid(cfg.in);
  if (!cfg.sig.empty()) file.signature = Signature::parse(cfg.sig);
  if (!file.signature) throw Error("no signature: pass --sig or store one in the sidecar");
  if (file.signature->dim() != file.values.grid.dim())
    throw DimensionError("signature length " + std::to_string(file.signature->dim()) +
                         " does not match data dimension " + std::to_string(file.values.grid.dim()));
  return file;
}

void emit(const JobConfig& cfg, const std::string& json, std::ostream& out) {
  if (cfg.out.empty())
    out << json;
  else
    write_file_atomic(cfg.out, json);
}

fs::path with_suffix(const fs::path& p, const std::string& suffix) {
  fs::path q = p;
  q.replace_extension();
  q += suffix;
  return q;
}

int cmd_fit(const JobConfig& cfg, bool require_equidistant, std::ostream& out) {
  if (cfg.out.empty()) throw Error("--out is required");
  const GridFile file = load_grid(cfg);
  const GridFunction w = file.weights ? *file.weights : GridFunction::constant(file.values.grid, 1.0);
  if (require_equidistant && !file.values.grid.is_equidistant())
    throw DomainError("project: grid must be equidistant");
  SolveOptions opt;
  if (cfg.tol > 0.0) opt.certificate_tol = cfg.tol;
  const SolveResult res = solve(file.values, w, *file.signature, opt);
  write_grid(cfg.out, res.fitted, file.weights ? &*file.weights : nullptr, file.signature);
  const std::string report = fit_report_json(res);
  write_file_atomic(with_suffix(cfg.out, ".certificate.json"), report);
  out << report;
  return res.certificate.passed() ? kExitOk : kExitCertificate;
}

int cmd_converge(const JobConfig& cfg, std::ostream& out) {
  const FieldSource src = load_field(cfg);
  ProjectionOptions opt;
  opt.norm = parse_norm(cfg.norm);
  opt.min_level = cfg.min_level;
  if (cfg.levels >= 0) opt.max_level = cfg.levels;
  opt.target = cfg.target;
  opt.weight_level = src.weight_level;
  if (cfg.discretization == "midpoint")
    opt.discretization = Discretization::Midpoint;
  else if (cfg.discretization == "cell-average")
    opt.discretization = Discretization::CellAverage;
  else if (!cfg.discretization.empty())
    throw Error("unknown discretization '" + cfg.discretization + "'");
  const ConvergenceReport rep = approximate_projection(src.f, src.w, src.sig, src.box, opt);
  emit(cfg, convergence_json(rep), out);
  if (!cfg.out.empty()) write_file_atomic(with_suffix(cfg.out, ".plot.csv"), convergence_plot_csv(rep));
  const bool certified = std::all_of(rep.levels.begin(), rep.levels.end(),
                                     [](const LevelRecord& r) { return r.certificate_passed; });
  return certified ? kExitOk : kExitCertificate;
}

int cmd_point(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  const FieldSource src = load_field(cfg);
  if (cfg.x0.empty()) throw Error("--x0 is required");
  const std::vector<double> x0 = parse_numbers(cfg.x0, ',');
  PointOptions opt;
  if (cfg.levels >= 0) opt.budget = cfg.levels;
  const double tol = cfg.tol > 0.0 ? cfg.tol : 1e-3;
  try {
    const PointResult res = pointwise_value(src.f, src.w, src.sig, src.box, x0, tol, opt);
    emit(cfg, point_json(res), out);
  } catch (const ConvergenceError& e) {
    err << "monoreg: " << e.what() << " (last values " << format_double(e.previous()) << ", "
        << format_double(e.last()) << ")\n";
    return kExitCertificate;
  }
  return kExitOk;
}

int cmd_verify(const JobConfig& cfg, std::ostream& out) {
  const BregmanSpec spec = bregman_spec(cfg.bregman);
  std::optional<GridFile> file;
  if (!cfg.in.empty()) {
    file = load_grid(cfg);
  } else if (!cfg.builtin.empty()) {
    const FieldSource src = load_field(cfg);
    const GridSpec grid = dyadic_grid(src.box, cfg.levels >= 0 ? cfg.levels : 3);
    file = GridFile{sample_midpoints(src.f, grid), std::nullopt, src.sig};
  } else {
    throw Error("give --in or --builtin");
  }
  const GridFunction w = file->weights ? *file->weights : GridFunction::constant(file->values.grid, 1.0);
  VerifyOptions opt;
  opt.trials = cfg.trials;
  opt.seed = cfg.seed;
  if (cfg.tol > 0.0) opt.tol = cfg.tol;
  const VerifyReport rep = verify_minimizer(spec, file->values, w, *file->signature, opt);
  emit(cfg, verify_json(rep), out);
  return rep.passed() ? kExitOk : kExitCertificate;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted monotonic regression on boxes"};
  app.require_subcommand(1);
  JobConfig cfg;

  auto* fit = app.add_subcommand("fit", "Exact isotonic fit of a grid CSV");
  auto* project = app.add_subcommand("project", "Projection of a grid-constant function (equidistant grid)");
  auto* converge = app.add_subcommand("converge", "Dyadic refinement with error bounds");
  auto* point = app.add_subcommand("point", "Value of the continuous representative at a point");
  auto* verify = app.add_subcommand("verify", "Check that the fit minimizes a Bregman objective");

  for (auto* sc : {fit, project, converge, point, verify}) {
    sc->add_option("--sig", cfg.sig, "Signature such as +1,0,-1");
    sc->add_option("--in", cfg.in, "Input grid CSV (with JSON sidecar)");
    sc->add_option("--out", cfg.out, "Output path");
    sc->add_option("--tol", cfg.tol, "Tolerance")->check(CLI::PositiveNumber);
  }
  for (auto* sc : {converge, point, verify}) {
    sc->add_option("--builtin", cfg.builtin, "Builtin test field");
    sc->add_option("--box", cfg.box, "Box as lo:hi,lo:hi,...");
    sc->add_option("--levels", cfg.levels, "Maximum level")->check(CLI::NonNegativeNumber);
  }
  converge->add_option("--norm", cfg.norm, "l2 or sup")->check(CLI::IsMember({"l2", "sup"}));
  converge->add_option("--target", cfg.target, "Stop once the certified bound is below this")
      ->check(CLI::NonNegativeNumber);
  converge->add_option("--min-level", cfg.min_level, "First level")->check(CLI::NonNegativeNumber);
  converge->add_option("--discretization", cfg.discretization, "midpoint or cell-average")
      ->check(CLI::IsMember({"midpoint", "cell-average"}));
  point->add_option("--x0", cfg.x0, "Point as comma separated coordinates");
  verify->add_option("--bregman", cfg.bregman, "square, entropy, exp or neglog")
      ->check(CLI::IsMember({"square", "entropy", "exp", "neglog"}));
  verify->add_option("--trials", cfg.trials, "Sampled monotone candidates");
  verify->add_option("--seed", cfg.seed, "Sampler seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (fit->parsed()) return cmd_fit(cfg, false, out);
    if (project->parsed()) return cmd_fit(cfg, true, out);
    if (converge->parsed()) return cmd_converge(cfg, out);
    if (point->parsed()) return cmd_point(cfg, out, err);
    return cmd_verify(cfg, out);
  } catch (const std::exception& e) {
    err << "monoreg: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace monoreg::cli
