#pragma once

#include <string>

#include "actint/observation.hpp"
#include "actint/report.hpp"

namespace actint {

/// Three-panel SVG for one interpreted observation: the channel traces of the
/// window (min-max scaled, top channel highlighted), the importance score of
/// every predictor, and the behavior evidence (template similarities, or the
/// z-score against its threshold).
std::string render_triptych_svg(const Observation& obs, const InterpretationReport& report,
                                double z_threshold = 2.0);

void write_triptych_svg(const std::string& path, const Observation& obs, const InterpretationReport& report,
                        double z_threshold = 2.0);

}  // namespace actint
