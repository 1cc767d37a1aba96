#pragma once

#include <string>
#include <vector>

#include "tgrasp/controller.hpp"

namespace tgrasp {

/// Renders a trace as an SVG with three stacked panels (fingertip pressure,
/// base force, palm and object height) and phase-boundary markers.
std::string render_trace_svg(const std::vector<TraceRow>& trace);

void plot_summary(const std::vector<TraceRow>& trace, const std::string& out_path);

}  // namespace tgrasp
