#pragma once

#include "socnav/nav_graph.hpp"

#include <vector>

namespace socnav {

struct Pose {
  Vec2 position;
  double heading;  // rad
};

/// Per-robot motion limits. scale_kinodynamics produces the turn-scaled copy
/// used while a priority ordering is active.
struct Kinodynamics {
  double v_max;          // m/s
  double a_max;          // m/s^2
  double omega_max;      // rad/s
  double curvature_max;  // 1/m
  double robot_radius;   // m
};

/// Constant-curvature candidate trajectory, sampled at fixed spacing from the
/// start pose. samples.front() is the start pose; samples.back() lies at
/// arc length `length`.
struct ArcTrajectory {
  double curvature = 0.0;  // signed, 0 = straight
  double length = 0.0;
  double sample_spacing = 0.0;
  std::vector<Pose> samples;

  const Pose& endpoint() const { return samples.back(); }
};

struct FeatureWeights {
  double clearance = 1.0;
  double target_distance = 2.0;
  double arc_length = 0.5;
  double goal_distance = 1.0;
};

struct VelocityCommand {
  double v = 0.0;      // m/s
  double omega = 0.0;  // rad/s
};

struct PlannerConfig {
  FeatureWeights weights;
  double lookahead = 1.0;        // m
  int arc_count = 41;            // odd, includes the straight arc
  double horizon = 2.0;          // m
  double sample_spacing = 0.05;  // m
  double clearance_eps = 1e-3;   // m
  // Extra buffer around other robots during clipping. Must cover at least
  // half the sample spacing or shallow intrusions can slip between samples.
  double safety_margin = 0.05;   // m
};

/// v_max <- base / turn; everything else unchanged.
Kinodynamics scale_kinodynamics(const Kinodynamics& base, int turn);

/// Ablation scaling v_max <- base * (1 - turn / (5 * base))^-1. Throws when
/// the denominator is not positive.
Kinodynamics alt_scale_kinodynamics(const Kinodynamics& base, int turn);

/// Pose after driving `arc_length` along a constant-curvature arc.
Pose advance_along_arc(const Pose& start, double curvature, double arc_length);

/// Farthest-along point on the path at `lookahead` distance from the robot;
/// the goal when it is within lookahead; the nearest path point when the
/// lookahead circle misses the path entirely.
Vec2 pure_pursuit_target(const Vec2& position, const GlobalPath& path,
                         double lookahead);

/// n arcs (n odd, >= 3) with curvatures uniformly spaced over
/// [-curvature_max, +curvature_max], each of length `horizon`.
std::vector<ArcTrajectory> sample_arcs(const Pose& pose,
                                       const Kinodynamics& kin, int n,
                                       double horizon, double sample_spacing);

/// Truncates the arc at the last sample before any sample center comes within
/// `wall_radius` of a wall or within `radius` + other.radius of another
/// robot, then shortens it by `stop_margin`. An untouched arc is returned
/// unchanged; a blocked start yields length 0. A negative `wall_radius`
/// means "use `radius`".
ArcTrajectory clip_arc(const ArcTrajectory& arc, const VectorMap& m,
                       const std::vector<Disc>& others, double radius,
                       double stop_margin, double wall_radius = -1.0);

/// Weighted feature sum: 1/(min clearance + eps), endpoint-to-target
/// distance, negative arc length, endpoint-to-goal distance. Lower is better.
double evaluate_cost(const ArcTrajectory& arc, const Vec2& target,
                     const Vec2& goal, const FeatureWeights& weights,
                     const VectorMap& m, double clearance_eps = 1e-3);

/// 1-D cruise/accelerate/brake program. Output in [0, v_max] with
/// |dv| <= a_max * dt.
double plan_velocity(double current_v, const Kinodynamics& kin,
                     double dist_to_stop, double dt);

struct PlanResult {
  VelocityCommand command;
  ArcTrajectory arc;
  bool blocked = false;  // every arc fully clipped
};

/// Full per-tick pipeline: pure pursuit -> arc sampling -> clipping -> cost
/// argmin -> 1-D velocity. When every arc clips to zero length the robot
/// brakes, then rotates in place toward the pursuit target.
PlanResult plan_step(const Pose& pose, double current_v,
                     const GlobalPath& path, const Kinodynamics& kin_sigma,
                     const PlannerConfig& cfg, const VectorMap& m,
                     const std::vector<Disc>& others, double dt);

}  // namespace socnav
