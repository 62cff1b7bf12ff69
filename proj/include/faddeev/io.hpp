#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "faddeev/regularization.hpp"
#include "faddeev/singularities.hpp"
#include "faddeev/verification.hpp"

namespace faddeev {

/// Parse the potential configuration document:
///   {"dimension": 2, "energy": 4.0,
///    "points": [{"z": [0,0], "alpha": 5.0}, ...]}
/// Unknown keys are rejected.
PotentialConfig parse_config_json(const nlohmann::json& doc);
PotentialConfig load_config_file(const std::string& path);

nlohmann::json config_to_json(const PotentialConfig& config);

/// Grid CSV: header + one row per node:
///   re_lambda, im_lambda, detA_re, detA_im_residual, flag
void write_grid_csv(std::ostream& os, const ScanGrid& grid);

/// Curve-set document: {"curves": [[{"re":..,"im":..},..],..],
///                      "preset": id|null, "config": {...}}
nlohmann::json curves_to_json(const SingularCurveSet& curves, const PotentialConfig& config);

/// Convergence CSV: header + rows N, err_abs, err_rel, excluded_flag.
void write_convergence_csv(std::ostream& os, const ConvergenceReport& report);

nlohmann::json report_to_json(const IdentityReport& report);

/// Shortest-roundtrip decimal formatting used by all writers.
std::string format_double(double v);

}  // namespace faddeev
