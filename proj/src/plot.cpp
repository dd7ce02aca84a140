#include "socnav/plot.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

namespace socnav {

using nlohmann::json;

namespace {

struct Pt {
  double x, y;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

}  // namespace

std::string render_svg(const std::string& telemetry) {
  std::vector<std::array<double, 4>> walls;
  std::map<int, std::vector<Pt>> tracks;
  std::map<int, Pt> goals;
  std::vector<Pt> collisions;

  std::istringstream in(telemetry);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw PlotError("telemetry line " + std::to_string(lineno) + ": " +
                      e.what());
    }
    const std::string type = j.value("type", "");
    if (type == "map") {
      for (const auto& s : j.at("segments")) {
        walls.push_back({s[0].get<double>(), s[1].get<double>(),
                         s[2].get<double>(), s[3].get<double>()});
      }
    } else if (type == "header") {
      for (const auto& r : j.at("robots")) {
        goals[r.at("id").get<int>()] = {r.at("goal")[0].get<double>(),
                                        r.at("goal")[1].get<double>()};
      }
    } else if (type == "tick") {
      tracks[j.at("id").get<int>()].push_back(
          {j.at("x").get<double>(), j.at("y").get<double>()});
    } else if (type == "collision") {
      const int a = j.at("a").get<int>();
      if (tracks.count(a) && !tracks[a].empty()) {
        collisions.push_back(tracks[a].back());
      }
    }
  }

  double x0 = std::numeric_limits<double>::infinity(), y0 = x0;
  double x1 = -x0, y1 = -x0;
  const auto grow = [&](double x, double y) {
    x0 = std::min(x0, x);
    y0 = std::min(y0, y);
    x1 = std::max(x1, x);
    y1 = std::max(y1, y);
  };
  for (const auto& w : walls) {
    grow(w[0], w[1]);
    grow(w[2], w[3]);
  }
  for (const auto& [id, pts] : tracks) {
    for (const auto& p : pts) grow(p.x, p.y);
  }
  if (!std::isfinite(x0)) {
    x0 = y0 = -1.0;
    x1 = y1 = 1.0;
  }
  const double pad = 0.25;
  x0 -= pad;
  y0 -= pad;
  x1 += pad;
  y1 += pad;

  const double scale = 160.0;
  const double w = (x1 - x0) * scale;
  const double h = (y1 - y0) * scale;
  const auto px = [&](double x) { return (x - x0) * scale; };
  const auto py = [&](double y) { return h - (y - y0) * scale; };  // y up

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w)
      << "\" height=\"" << num(h) << "\" viewBox=\"0 0 " << num(w) << " "
      << num(h) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (const auto& wall : walls) {
    svg << "<line x1=\"" << num(px(wall[0])) << "\" y1=\"" << num(py(wall[1]))
        << "\" x2=\"" << num(px(wall[2])) << "\" y2=\"" << num(py(wall[3]))
        << "\" stroke=\"black\" stroke-width=\"4\"/>\n";
  }

  int color_i = 0;
  for (const auto& [id, pts] : tracks) {
    const char* color = kPalette[color_i % 8];
    ++color_i;
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\" points=\"";
    for (const auto& p : pts) {
      svg << num(px(p.x)) << "," << num(py(p.y)) << " ";
    }
    svg << "\"/>\n";
    if (!pts.empty()) {
      svg << "<circle cx=\"" << num(px(pts.front().x)) << "\" cy=\""
          << num(py(pts.front().y)) << "\" r=\"5\" fill=\"" << color
          << "\"/>\n";
    }
    const auto g = goals.find(id);
    if (g != goals.end()) {
      svg << "<circle cx=\"" << num(px(g->second.x)) << "\" cy=\""
          << num(py(g->second.y)) << "\" r=\"6\" fill=\"none\" stroke=\""
          << color << "\" stroke-width=\"2\"/>\n";
    }
  }

  for (const auto& c : collisions) {
    const double cx = px(c.x), cy = py(c.y), r = 6.0;
    svg << "<path d=\"M " << num(cx - r) << " " << num(cy - r) << " L "
        << num(cx + r) << " " << num(cy + r) << " M " << num(cx - r) << " "
        << num(cy + r) << " L " << num(cx + r) << " " << num(cy - r)
        << "\" stroke=\"red\" stroke-width=\"3\"/>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace socnav
