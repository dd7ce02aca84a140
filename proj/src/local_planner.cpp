#include "socnav/local_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace socnav {

namespace {

void check_kin(const Kinodynamics& k) {
  if (k.v_max <= 0.0 || k.a_max <= 0.0 || k.omega_max <= 0.0 ||
      k.curvature_max <= 0.0 || k.robot_radius <= 0.0) {
    throw PlanningError("kinodynamic limits must be strictly positive");
  }
}

}  // namespace

Kinodynamics scale_kinodynamics(const Kinodynamics& base, int turn) {
  check_kin(base);
  if (turn < 1) throw PlanningError("turn must be >= 1");
  Kinodynamics k = base;
  k.v_max = base.v_max / static_cast<double>(turn);
  return k;
}

Kinodynamics alt_scale_kinodynamics(const Kinodynamics& base, int turn) {
  check_kin(base);
  if (turn < 1) throw PlanningError("turn must be >= 1");
  const double denom = 1.0 - static_cast<double>(turn) / (5.0 * base.v_max);
  if (denom <= 0.0) throw PlanningError("invalid alt scaling");
  Kinodynamics k = base;
  k.v_max = base.v_max / denom;
  return k;
}

Pose advance_along_arc(const Pose& start, double curvature,
                       double arc_length) {
  if (std::abs(curvature) < 1e-12) {
    return {start.position + arc_length * Vec2(std::cos(start.heading),
                                               std::sin(start.heading)),
            start.heading};
  }
  const double th0 = start.heading;
  const double th1 = th0 + curvature * arc_length;
  return {start.position + Vec2((std::sin(th1) - std::sin(th0)) / curvature,
                                -(std::cos(th1) - std::cos(th0)) / curvature),
          th1};
}

Vec2 pure_pursuit_target(const Vec2& position, const GlobalPath& path,
                         double lookahead) {
  if (path.empty()) throw PlanningError("empty path");
  if (lookahead <= 0.0) throw PlanningError("lookahead must be positive");
  if ((path.goal() - position).norm() <= lookahead) return path.goal();

  // Farthest-along circle/polyline intersection.
  bool found = false;
  Vec2 best = Vec2::Zero();
  for (std::size_t i = 0; i + 1 < path.waypoints.size(); ++i) {
    const Vec2 a = path.waypoints[i];
    const Vec2 d = path.waypoints[i + 1] - a;
    const Vec2 f = a - position;
    const double A = d.squaredNorm();
    if (A < 1e-18) continue;
    const double B = 2.0 * f.dot(d);
    const double C = f.squaredNorm() - lookahead * lookahead;
    const double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) continue;
    const double sq = std::sqrt(disc);
    // Larger root is farther along this segment.
    for (const double t : {(-B + sq) / (2.0 * A), (-B - sq) / (2.0 * A)}) {
      if (t >= 0.0 && t <= 1.0) {
        best = a + t * d;
        found = true;
        break;
      }
    }
  }
  if (found) return best;

  // Lookahead circle misses the path: fall back to the nearest path point.
  Vec2 nearest = path.waypoints.front();
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < path.waypoints.size(); ++i) {
    const Segment s{path.waypoints[i], path.waypoints[i + 1]};
    const Vec2 d = s.b - s.a;
    const double t =
        std::clamp((position - s.a).dot(d) / d.squaredNorm(), 0.0, 1.0);
    const Vec2 q = s.a + t * d;
    const double dist = (q - position).norm();
    if (dist < best_d) {
      best_d = dist;
      nearest = q;
    }
  }
  if (path.waypoints.size() == 1) nearest = path.waypoints.front();
  return nearest;
}

namespace {

ArcTrajectory make_arc(const Pose& pose, double curvature, double length,
                       double spacing) {
  ArcTrajectory arc;
  arc.curvature = curvature;
  arc.length = length;
  arc.sample_spacing = spacing;
  for (double s = 0.0; s < length; s += spacing) {
    arc.samples.push_back(advance_along_arc(pose, curvature, s));
  }
  arc.samples.push_back(advance_along_arc(pose, curvature, length));
  return arc;
}

}  // namespace

std::vector<ArcTrajectory> sample_arcs(const Pose& pose,
                                       const Kinodynamics& kin, int n,
                                       double horizon, double sample_spacing) {
  check_kin(kin);
  if (n < 3 || n % 2 == 0) throw PlanningError("arc count must be odd, >= 3");
  if (horizon <= 0.0 || sample_spacing <= 0.0) {
    throw PlanningError("horizon and spacing must be positive");
  }
  std::vector<ArcTrajectory> arcs;
  arcs.reserve(n);
  const double step = 2.0 * kin.curvature_max / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) {
    double c = -kin.curvature_max + i * step;
    if (i == (n - 1) / 2) c = 0.0;  // exact straight arc at the center
    arcs.push_back(make_arc(pose, c, horizon, sample_spacing));
  }
  return arcs;
}

ArcTrajectory clip_arc(const ArcTrajectory& arc, const VectorMap& m,
                       const std::vector<Disc>& others, double radius,
                       double stop_margin, double wall_radius) {
  if (wall_radius < 0.0) wall_radius = radius;
  const auto blocked = [&](const Pose& p) {
    if (clearance(p.position, m) < wall_radius) return true;
    for (const auto& o : others) {
      if ((p.position - o.center).norm() < radius + o.radius) return true;
    }
    return false;
  };

  std::size_t first_bad = arc.samples.size();
  for (std::size_t i = 0; i < arc.samples.size(); ++i) {
    if (blocked(arc.samples[i])) {
      first_bad = i;
      break;
    }
  }
  if (first_bad == arc.samples.size()) return arc;  // untouched
  if (first_bad == 0) {
    ArcTrajectory out;
    out.curvature = arc.curvature;
    out.length = 0.0;
    out.sample_spacing = arc.sample_spacing;
    out.samples = {arc.samples.front()};
    return out;
  }
  const double free_len =
      std::min(arc.length, (first_bad - 1) * arc.sample_spacing);
  const double len = std::max(0.0, free_len - stop_margin);
  return make_arc(arc.samples.front(), arc.curvature, len,
                  arc.sample_spacing);
}

double evaluate_cost(const ArcTrajectory& arc, const Vec2& target,
                     const Vec2& goal, const FeatureWeights& weights,
                     const VectorMap& m, double clearance_eps) {
  if (arc.samples.empty()) throw PlanningError("arc has no samples");
  double min_clear = std::numeric_limits<double>::infinity();
  for (const auto& p : arc.samples) {
    min_clear = std::min(min_clear, clearance(p.position, m));
  }
  const double clear_feature =
      std::isinf(min_clear) ? 0.0 : 1.0 / (min_clear + clearance_eps);
  const Vec2 end = arc.endpoint().position;
  return weights.clearance * clear_feature +
         weights.target_distance * (end - target).norm() -
         weights.arc_length * arc.length +
         weights.goal_distance * (end - goal).norm();
}

double plan_velocity(double current_v, const Kinodynamics& kin,
                     double dist_to_stop, double dt) {
  if (dt <= 0.0) throw PlanningError("dt must be positive");
  if (dist_to_stop < 0.0) throw PlanningError("dist_to_stop must be >= 0");
  double v;
  if (current_v * current_v / (2.0 * kin.a_max) >= dist_to_stop) {
    v = current_v - kin.a_max * dt;  // brake
  } else if (current_v < kin.v_max) {
    v = std::min(current_v + kin.a_max * dt, kin.v_max);  // accelerate
  } else {
    v = kin.v_max;  // cruise (also pulls down an over-limit speed)
  }
  v = std::clamp(v, 0.0, kin.v_max);
  v = std::clamp(v, current_v - kin.a_max * dt, current_v + kin.a_max * dt);
  return std::max(0.0, v);
}

PlanResult plan_step(const Pose& pose, double current_v,
                     const GlobalPath& path, const Kinodynamics& kin_sigma,
                     const PlannerConfig& cfg, const VectorMap& m,
                     const std::vector<Disc>& others, double dt) {
  const Vec2 target = pure_pursuit_target(pose.position, path, cfg.lookahead);
  const Vec2 goal = path.goal();
  const double margin =
      current_v * current_v / (2.0 * kin_sigma.a_max);
  const double v_floor = std::max(0.0, current_v - kin_sigma.a_max * dt);

  // Never plan past the goal; otherwise overshooting arcs distort the
  // endpoint features close to arrival.
  const double dist_to_goal = (goal - pose.position).norm();
  const double horizon =
      std::clamp(dist_to_goal, 2.0 * cfg.sample_spacing, cfg.horizon);
  auto arcs = sample_arcs(pose, kin_sigma, cfg.arc_count, horizon,
                          cfg.sample_spacing);

  // Inflate walls and neighbors by the safety margin, but never so far that
  // the current pose itself becomes infeasible — a robot that drifted too
  // close must still be able to plan its way back out instead of freezing.
  const double wall_radius = std::min(
      kin_sigma.robot_radius + cfg.safety_margin,
      std::max(kin_sigma.robot_radius, clearance(pose.position, m) - 1e-3));
  std::vector<Disc> inflated;
  inflated.reserve(others.size());
  for (const auto& o : others) {
    const double dist_now = (o.center - pose.position).norm();
    const double cap = dist_now - kin_sigma.robot_radius - 1e-3;
    inflated.push_back(
        {o.center,
         std::max(0.0, std::min(o.radius + cfg.safety_margin, cap))});
  }
  int best = -1;
  double best_cost = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    // Curvature unreachable without violating the braking limit this tick.
    if (std::abs(arcs[i].curvature) > 1e-12 &&
        kin_sigma.omega_max / std::abs(arcs[i].curvature) < v_floor) {
      continue;
    }
    arcs[i] = clip_arc(arcs[i], m, inflated, kin_sigma.robot_radius, margin,
                       wall_radius);
    if (arcs[i].length <= 0.0) continue;
    const double cost = evaluate_cost(arcs[i], target, goal, cfg.weights, m,
                                      cfg.clearance_eps);
    if (cost < best_cost) {
      best_cost = cost;
      best = static_cast<int>(i);
    }
  }

  PlanResult out;
  if (best < 0) {
    // Everything clipped: brake along a zero-length straight arc. Once
    // stopped, rotate in place toward the pursuit target so a bad heading
    // cannot pin the robot forever.
    out.blocked = true;
    out.arc = make_arc(pose, 0.0, 0.0, cfg.sample_spacing);
    out.command.v = plan_velocity(current_v, kin_sigma, 0.0, dt);
    out.command.omega = 0.0;
    if (out.command.v <= 1e-9) {
      const Vec2 to_target = target - pose.position;
      if (to_target.norm() > 1e-9) {
        double err = std::atan2(to_target.y(), to_target.x()) - pose.heading;
        while (err > M_PI) err -= 2.0 * M_PI;
        while (err < -M_PI) err += 2.0 * M_PI;
        out.command.omega =
            std::clamp(err / dt, -kin_sigma.omega_max, kin_sigma.omega_max);
      }
    }
    return out;
  }

  out.arc = arcs[best];
  const double dist_to_stop = std::min(dist_to_goal, out.arc.length);
  double v = plan_velocity(current_v, kin_sigma, dist_to_stop, dt);
  if (std::abs(out.arc.curvature) > 1e-12) {
    v = std::min(v, kin_sigma.omega_max / std::abs(out.arc.curvature));
    v = std::max(v, v_floor);
  }
  out.command.v = v;
  out.command.omega = v * out.arc.curvature;
  return out;
}

}  // namespace socnav
