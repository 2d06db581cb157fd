#include "monoreg/reports.hpp"

#include "json_util.hpp"
#include "monoreg/grid_io.hpp"

namespace monoreg {

using detail::number_or_null;
using detail::ordered_json;

namespace {

ordered_json certificate_object(const Certificate& c) {
  ordered_json j;
  j["passed"] = c.passed();
  j["monotone"] = c.monotone;
  j["max_violation"] = number_or_null(c.max_violation);
  j["orthogonality"] = number_or_null(c.orthogonality);
  j["integral"] = number_or_null(c.integral);
  j["worst_upper"] = number_or_null(c.worst_upper);
  j["worst_lower"] = number_or_null(c.worst_lower);
  j["exhaustive"] = c.exhaustive;
  j["sets_checked"] = c.sets_checked;
  j["tol"] = c.tol;
  return j;
}

}  // namespace

std::string certificate_json(const Certificate& c) { return detail::dump_json(certificate_object(c)); }

std::string fit_report_json(const SolveResult& result) {
  ordered_json j;
  j["points"] = result.fitted.size();
  j["blocks"] = result.blocks.size();
  j["objective"] = number_or_null(result.objective);
  j["certificate"] = certificate_object(result.certificate);
  return detail::dump_json(j);
}

std::string convergence_json(const ConvergenceReport& report) {
  ordered_json j;
  j["norm"] = to_string(report.norm);
  j["target_reached"] = report.target_reached;
  ordered_json levels = ordered_json::array();
  for (const auto& r : report.levels) {
    ordered_json l;
    l["level"] = r.level;
    l["len_G"] = r.len;
    l["disc_err"] = number_or_null(r.disc_err);
    l["objective"] = number_or_null(r.objective);
    l["bound"] = number_or_null(r.bound);
    l["successive_diff"] = r.successive_diff ? number_or_null(*r.successive_diff) : ordered_json(nullptr);
    l["c_lo"] = r.c_lo;
    l["c_hi"] = r.c_hi;
    l["bound_certified"] = r.bound_certified;
    l["blocks"] = r.blocks;
    l["certificate_passed"] = r.certificate_passed;
    levels.push_back(std::move(l));
  }
  j["levels"] = std::move(levels);
  j["warnings"] = report.warnings;
  return detail::dump_json(j);
}

std::string convergence_plot_csv(const ConvergenceReport& report) {
  std::string out = "level,len_G,disc_err,bound,successive_diff\n";
  for (const auto& r : report.levels) {
    out += std::to_string(r.level) + "," + format_double(r.len) + "," + format_double(r.disc_err) + "," +
           format_double(r.bound) + "," + (r.successive_diff ? format_double(*r.successive_diff) : "") + "\n";
  }
  return out;
}

std::string point_json(const PointResult& result) {
  ordered_json j;
  j["x0"] = result.x0;
  j["value"] = number_or_null(result.value);
  j["levels_used"] = result.levels_used;
  j["last_diff"] = number_or_null(result.last_diff);
  ordered_json hist = ordered_json::array();
  for (const auto& h : result.history) {
    ordered_json e;
    e["k"] = h.k;
    e["eps"] = h.eps;
    e["points"] = h.points;
    e["value"] = number_or_null(h.value);
    hist.push_back(std::move(e));
  }
  j["history"] = std::move(hist);
  return detail::dump_json(j);
}

std::string verify_json(const VerifyReport& report) {
  ordered_json j;
  j["spec"] = report.spec;
  j["passed"] = report.passed();
  j["trials"] = report.trials;
  j["j_star"] = number_or_null(report.j_star);
  j["min_gap"] = number_or_null(report.min_gap);
  j["worst_decomposition"] = number_or_null(report.worst_decomposition);
  j["near_optimal"] = report.near_optimal;
  j["near_optimal_distance"] = number_or_null(report.near_optimal_distance);
  j["minimizer_ok"] = report.minimizer_ok;
  j["decomposition_ok"] = report.decomposition_ok;
  j["uniqueness_ok"] = report.uniqueness_ok;
  return detail::dump_json(j);
}

}  // namespace monoreg
