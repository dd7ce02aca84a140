#pragma once

#include "socnav/geometry.hpp"

#include <optional>
#include <vector>

namespace socnav {

class PlanningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 8-connected lattice over the free space of a VectorMap. Vertices and the
/// straight segment of every edge keep clearance >= robot_radius from all
/// walls. Immutable once built.
struct NavGraph {
  std::vector<Vec2> vertices;
  std::vector<std::vector<std::pair<int, double>>> adjacency;  // (to, length)
  double resolution = 0.0;
  double robot_radius = 0.0;

  std::size_t edge_count() const;

  /// Nearest vertex within max_dist of p, or nullopt.
  std::optional<int> snap(const Vec2& p, double max_dist) const;
};

struct GlobalPath {
  std::vector<Vec2> waypoints;
  double total_length = 0.0;

  bool empty() const { return waypoints.empty(); }
  const Vec2& goal() const { return waypoints.back(); }
};

NavGraph build_nav_graph(const VectorMap& m, double resolution,
                         double robot_radius);

/// Minimum-length path between the snapped start and goal vertices.
/// Deterministic tie-breaking: ties on f broken by larger g, then lower
/// vertex index. Throws PlanningError on blocked endpoints or no path.
GlobalPath astar(const NavGraph& g, const Vec2& start, const Vec2& goal);

/// Distance from p to the closest point on the path polyline.
double path_deviation(const GlobalPath& path, const Vec2& p);

/// Index of the waypoint whose polyline segment is closest to p.
std::size_t nearest_waypoint_index(const GlobalPath& path, const Vec2& p);

/// True when any of the path's remaining segments (from the waypoint nearest
/// to p onward) touches the zone.
bool path_crosses_zone(const GlobalPath& path, const Vec2& p,
                       const ConflictZone& z);

}  // namespace socnav
