#pragma once

#include <string>

#include "monoreg/averaging.hpp"
#include "monoreg/generalized.hpp"
#include "monoreg/isotonic.hpp"
#include "monoreg/projection.hpp"

namespace monoreg {

// JSON documents with a fixed key order and 17 significant digits per float.

std::string certificate_json(const Certificate& c);
/// Certificate plus objective and block count of a solve.
std::string fit_report_json(const SolveResult& result);
std::string convergence_json(const ConvergenceReport& report);
/// Columns: level,len_G,disc_err,bound,successive_diff (empty on the first level).
std::string convergence_plot_csv(const ConvergenceReport& report);
std::string point_json(const PointResult& result);
std::string verify_json(const VerifyReport& report);

}  // namespace monoreg
