#include "socnav/nav_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace socnav {

std::size_t NavGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& adj : adjacency) n += adj.size();
  return n / 2;
}

std::optional<int> NavGraph::snap(const Vec2& p, double max_dist) const {
  int best = -1;
  double best_d = max_dist;
  for (int i = 0; i < static_cast<int>(vertices.size()); ++i) {
    const double d = (vertices[i] - p).norm();
    if (d < best_d || (d == best_d && best < 0)) {
      best_d = d;
      best = i;
    }
  }
  if (best < 0) return std::nullopt;
  return best;
}

NavGraph build_nav_graph(const VectorMap& m, double resolution,
                         double robot_radius) {
  if (resolution <= 0.0) throw PlanningError("resolution must be positive");
  if (robot_radius <= 0.0) throw PlanningError("robot radius must be positive");

  NavGraph g;
  g.resolution = resolution;
  g.robot_radius = robot_radius;

  const Vec2 span = m.bounds.max - m.bounds.min;
  const int nx = static_cast<int>(std::floor(span.x() / resolution + 1e-9)) + 1;
  const int ny = static_cast<int>(std::floor(span.y() / resolution + 1e-9)) + 1;

  // Lattice points with enough wall clearance become vertices.
  std::vector<int> vertex_of(static_cast<std::size_t>(nx) * ny, -1);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const Vec2 p = m.bounds.min + Vec2(ix * resolution, iy * resolution);
      if (clearance(p, m) >= robot_radius) {
        vertex_of[iy * nx + ix] = static_cast<int>(g.vertices.size());
        g.vertices.push_back(p);
      }
    }
  }
  if (g.vertices.empty()) throw PlanningError("map fully blocked");

  g.adjacency.resize(g.vertices.size());
  const int dx[] = {1, 0, 1, -1};
  const int dy[] = {0, 1, 1, 1};
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const int u = vertex_of[iy * nx + ix];
      if (u < 0) continue;
      for (int k = 0; k < 4; ++k) {
        const int jx = ix + dx[k];
        const int jy = iy + dy[k];
        if (jx < 0 || jx >= nx || jy < 0 || jy >= ny) continue;
        const int v = vertex_of[jy * nx + jx];
        if (v < 0) continue;
        const Segment edge{g.vertices[u], g.vertices[v]};
        bool clear = true;
        for (const auto& wall : m.segments) {
          if (distance_segment_segment(edge, wall) < robot_radius) {
            clear = false;
            break;
          }
        }
        if (!clear) continue;
        const double w = edge.length();
        g.adjacency[u].push_back({v, w});
        g.adjacency[v].push_back({u, w});
      }
    }
  }
  return g;
}

GlobalPath astar(const NavGraph& g, const Vec2& start, const Vec2& goal) {
  const double snap_dist = g.resolution * std::sqrt(2.0) + 1e-9;
  const auto s = g.snap(start, snap_dist);
  const auto t = g.snap(goal, snap_dist);
  if (!s || !t) throw PlanningError("endpoint blocked");

  const int n = static_cast<int>(g.vertices.size());
  std::vector<double> gcost(n, std::numeric_limits<double>::infinity());
  std::vector<int> parent(n, -1);
  std::vector<bool> closed(n, false);

  struct Node {
    double f;
    double g;
    int v;
    // min-heap on f; ties prefer larger g, then lower vertex index
    bool operator>(const Node& o) const {
      if (f != o.f) return f > o.f;
      if (g != o.g) return g < o.g;
      return v > o.v;
    }
  };
  std::priority_queue<Node, std::vector<Node>, std::greater<Node>> open;

  const auto h = [&](int v) { return (g.vertices[v] - g.vertices[*t]).norm(); };
  gcost[*s] = 0.0;
  open.push({h(*s), 0.0, *s});

  while (!open.empty()) {
    const Node cur = open.top();
    open.pop();
    if (closed[cur.v]) continue;
    closed[cur.v] = true;
    if (cur.v == *t) break;
    for (const auto& [to, w] : g.adjacency[cur.v]) {
      if (closed[to]) continue;
      const double cand = gcost[cur.v] + w;
      if (cand < gcost[to]) {
        gcost[to] = cand;
        parent[to] = cur.v;
        open.push({cand + h(to), cand, to});
      }
    }
  }
  if (!closed[*t]) throw PlanningError("no path");

  GlobalPath path;
  for (int v = *t; v >= 0; v = parent[v]) {
    path.waypoints.push_back(g.vertices[v]);
    if (v == *s) break;
  }
  std::reverse(path.waypoints.begin(), path.waypoints.end());
  path.total_length = gcost[*t];
  return path;
}

double path_deviation(const GlobalPath& path, const Vec2& p) {
  if (path.empty()) throw PlanningError("empty path");
  if (path.waypoints.size() == 1) return (path.waypoints[0] - p).norm();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < path.waypoints.size(); ++i) {
    best = std::min(best, distance_point_segment(
                              p, {path.waypoints[i], path.waypoints[i + 1]}));
  }
  return best;
}

std::size_t nearest_waypoint_index(const GlobalPath& path, const Vec2& p) {
  if (path.empty()) throw PlanningError("empty path");
  std::size_t best_i = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < path.waypoints.size(); ++i) {
    const double d = distance_point_segment(
        p, {path.waypoints[i], path.waypoints[i + 1]});
    if (d < best) {
      best = d;
      best_i = i;
    }
  }
  return best_i;
}

bool path_crosses_zone(const GlobalPath& path, const Vec2& p,
                       const ConflictZone& z) {
  if (path.empty()) return false;
  if (path.waypoints.size() == 1) {
    return in_conflict_zone(path.waypoints[0], z);
  }
  for (std::size_t i = nearest_waypoint_index(path, p);
       i + 1 < path.waypoints.size(); ++i) {
    if (segment_intersects_zone({path.waypoints[i], path.waypoints[i + 1]},
                                z)) {
      return true;
    }
  }
  return false;
}

}  // namespace socnav
