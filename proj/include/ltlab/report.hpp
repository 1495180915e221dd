#pragma once

#include <string>

#include "ltlab/experiments.hpp"
#include "json.hpp"

namespace ltlab {

/// {experiment, params, rows: [...], fit: {slope, intercept, r2} | null, verdict, ...}
nlohmann::ordered_json to_json(const SweepReport& report);

/// Log-log scatter of ratio against h (thm1, thm2) or t (thm3) with the fitted line.
std::string render_svg(const SweepReport& report);

}  // namespace ltlab
