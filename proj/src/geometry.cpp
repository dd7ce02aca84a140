#include "socnav/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace socnav {

namespace {
constexpr double kDegenerateEps = 1e-9;

double cross2(const Vec2& a, const Vec2& b) {
  return a.x() * b.y() - a.y() * b.x();
}
}  // namespace

Vec2 ConflictZone::centroid() const {
  Vec2 c = Vec2::Zero();
  for (const auto& v : region) c += v;
  return c / static_cast<double>(region.size());
}

const ConflictZone* VectorMap::find_zone(const std::string& id) const {
  for (const auto& z : zones) {
    if (z.id == id) return &z;
  }
  return nullptr;
}

double distance_point_segment(const Vec2& p, const Segment& s) {
  const Vec2 d = s.b - s.a;
  const double len2 = d.squaredNorm();
  if (len2 < kDegenerateEps * kDegenerateEps) {
    throw GeometryError("degenerate geometry");
  }
  const double t = std::clamp((p - s.a).dot(d) / len2, 0.0, 1.0);
  return (p - (s.a + t * d)).norm();
}

bool segments_intersect(const Segment& s1, const Segment& s2) {
  const Vec2 r = s1.b - s1.a;
  const Vec2 s = s2.b - s2.a;
  const double denom = cross2(r, s);
  const Vec2 qp = s2.a - s1.a;
  if (std::abs(denom) < 1e-15) {
    // Parallel: overlapping collinear segments count as intersecting.
    if (std::abs(cross2(qp, r)) > 1e-12) return false;
    const double rr = r.squaredNorm();
    if (rr < 1e-18) return false;
    double t0 = qp.dot(r) / rr;
    double t1 = (s2.b - s1.a).dot(r) / rr;
    if (t0 > t1) std::swap(t0, t1);
    return t1 >= 0.0 && t0 <= 1.0;
  }
  const double t = cross2(qp, s) / denom;
  const double u = cross2(qp, r) / denom;
  return t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0;
}

double distance_segment_segment(const Segment& s1, const Segment& s2) {
  if (segments_intersect(s1, s2)) return 0.0;
  double d = distance_point_segment(s1.a, s2);
  d = std::min(d, distance_point_segment(s1.b, s2));
  d = std::min(d, distance_point_segment(s2.a, s1));
  d = std::min(d, distance_point_segment(s2.b, s1));
  return d;
}

double clearance(const Vec2& p, const VectorMap& m) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : m.segments) {
    best = std::min(best, distance_point_segment(p, s));
  }
  return best;
}

bool disc_collides_map(const Disc& d, const VectorMap& m) {
  return clearance(d.center, m) < d.radius;
}

bool discs_collide(const Disc& a, const Disc& b) {
  return (a.center - b.center).norm() < a.radius + b.radius;
}

bool in_conflict_zone(const Vec2& p, const ConflictZone& z) {
  // Signed side tests; accept points on the boundary. Works for either
  // winding by requiring all cross products to share a sign (or be zero).
  const size_t n = z.region.size();
  bool has_pos = false;
  bool has_neg = false;
  for (size_t i = 0; i < n; ++i) {
    const Vec2& a = z.region[i];
    const Vec2& b = z.region[(i + 1) % n];
    const double c = cross2(b - a, p - a);
    if (c > 1e-12) has_pos = true;
    if (c < -1e-12) has_neg = true;
  }
  return !(has_pos && has_neg);
}

double distance_to_zone(const Vec2& p, const ConflictZone& z) {
  if (in_conflict_zone(p, z)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const size_t n = z.region.size();
  for (size_t i = 0; i < n; ++i) {
    best = std::min(
        best, distance_point_segment(p, {z.region[i], z.region[(i + 1) % n]}));
  }
  return best;
}

bool segment_intersects_zone(const Segment& s, const ConflictZone& z) {
  if (in_conflict_zone(s.a, z) || in_conflict_zone(s.b, z)) return true;
  const size_t n = z.region.size();
  for (size_t i = 0; i < n; ++i) {
    if (segments_intersect(s, {z.region[i], z.region[(i + 1) % n]})) {
      return true;
    }
  }
  return false;
}

namespace {

double polygon_area(const std::vector<Vec2>& poly) {
  double a = 0.0;
  for (size_t i = 0; i < poly.size(); ++i) {
    a += cross2(poly[i], poly[(i + 1) % poly.size()]);
  }
  return 0.5 * a;
}

bool is_convex(const std::vector<Vec2>& poly) {
  const size_t n = poly.size();
  if (n < 3) return false;
  bool has_pos = false;
  bool has_neg = false;
  for (size_t i = 0; i < n; ++i) {
    const Vec2 e1 = poly[(i + 1) % n] - poly[i];
    const Vec2 e2 = poly[(i + 2) % n] - poly[(i + 1) % n];
    const double c = cross2(e1, e2);
    if (c > 1e-12) has_pos = true;
    if (c < -1e-12) has_neg = true;
  }
  return !(has_pos && has_neg);
}

}  // namespace

void validate_map(const VectorMap& m) {
  if (m.bounds.max.x() <= m.bounds.min.x() ||
      m.bounds.max.y() <= m.bounds.min.y()) {
    throw GeometryError("map bounds are empty");
  }
  for (const auto& s : m.segments) {
    if (s.length() <= kDegenerateEps) {
      throw GeometryError("degenerate geometry");
    }
    if (!m.bounds.contains(s.a) || !m.bounds.contains(s.b)) {
      throw GeometryError("segment endpoint outside map bounds");
    }
  }
  for (const auto& z : m.zones) {
    if (!is_convex(z.region)) {
      throw GeometryError("conflict zone '" + z.id + "' is not convex");
    }
    if (std::abs(polygon_area(z.region)) <= 1e-12) {
      throw GeometryError("conflict zone '" + z.id + "' has zero area");
    }
  }
}

VectorMap parse_map(const std::string& text) {
  VectorMap m;
  bool have_bounds = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    const auto fail = [&](const std::string& what) -> GeometryError {
      return GeometryError("map line " + std::to_string(lineno) + ": " + what);
    };
    if (kind == "bounds") {
      double x0, y0, x1, y1;
      if (!(ls >> x0 >> y0 >> x1 >> y1)) throw fail("expected 4 numbers");
      m.bounds = {{x0, y0}, {x1, y1}};
      have_bounds = true;
    } else if (kind == "segment") {
      double x0, y0, x1, y1;
      if (!(ls >> x0 >> y0 >> x1 >> y1)) throw fail("expected 4 numbers");
      m.segments.push_back({{x0, y0}, {x1, y1}});
    } else if (kind == "zone") {
      ConflictZone z;
      if (!(ls >> z.id)) throw fail("expected zone id");
      double x, y;
      while (ls >> x >> y) z.region.push_back({x, y});
      if (z.region.size() < 3) throw fail("zone needs >= 3 vertices");
      m.zones.push_back(std::move(z));
    } else {
      throw fail("unknown directive '" + kind + "'");
    }
  }
  if (!have_bounds) throw GeometryError("map has no bounds directive");
  validate_map(m);
  return m;
}

VectorMap load_map(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw GeometryError("cannot open map file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_map(ss.str());
}

}  // namespace socnav
