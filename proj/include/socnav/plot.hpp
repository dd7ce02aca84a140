#pragma once

#include <stdexcept>
#include <string>

namespace socnav {

class PlotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Renders a telemetry log (line-delimited JSON) as a static SVG: wall
/// segments, one trajectory polyline per robot, start/goal markers, and
/// collision markers. Output is deterministic for a fixed input.
std::string render_svg(const std::string& telemetry);

}  // namespace socnav
