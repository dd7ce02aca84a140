#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

namespace socnav {

using Vec2 = Eigen::Vector2d;

struct Segment {
  Vec2 a;
  Vec2 b;

  double length() const { return (b - a).norm(); }
};

struct Bounds {
  Vec2 min;
  Vec2 max;

  bool contains(const Vec2& p) const {
    return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() &&
           p.y() <= max.y();
  }
};

/// Convex polygon naming a region multiple robots must pass through.
struct ConflictZone {
  std::string id;
  std::vector<Vec2> region;  // CCW or CW, convex

  Vec2 centroid() const;
};

/// Static world: wall segments plus the named conflict zones.
/// Immutable after construction; validated on load.
struct VectorMap {
  Bounds bounds{};
  std::vector<Segment> segments;
  std::vector<ConflictZone> zones;

  const ConflictZone* find_zone(const std::string& id) const;
};

struct Disc {
  Vec2 center;
  double radius;  // > 0
};

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double distance_point_segment(const Vec2& p, const Segment& s);

/// Min distance between two segments (0 when they intersect).
double distance_segment_segment(const Segment& s1, const Segment& s2);

/// Min distance from p to any wall; +inf on an empty map.
double clearance(const Vec2& p, const VectorMap& m);

// Strict inequality: tangency does not count as collision.
bool disc_collides_map(const Disc& d, const VectorMap& m);
bool discs_collide(const Disc& a, const Disc& b);

/// Boundary inclusive point-in-convex-polygon test.
bool in_conflict_zone(const Vec2& p, const ConflictZone& z);

/// Distance from p to the zone polygon; 0 inside.
double distance_to_zone(const Vec2& p, const ConflictZone& z);

bool segments_intersect(const Segment& s1, const Segment& s2);
bool segment_intersects_zone(const Segment& s, const ConflictZone& z);

/// Throws GeometryError when an invariant is violated (degenerate segment,
/// endpoint outside bounds, non-convex or degenerate zone).
void validate_map(const VectorMap& m);

/// Plain-text map format: one directive per line.
///   bounds  xmin ymin xmax ymax
///   segment x1 y1 x2 y2
///   zone    <id> x1 y1 x2 y2 x3 y3 ...
/// '#' starts a comment. Validated before returning.
VectorMap load_map(const std::string& path);
VectorMap parse_map(const std::string& text);

}  // namespace socnav
