#include "socnav/social_forces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace socnav {

namespace {

double wrap_angle(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a < -M_PI) a += 2.0 * M_PI;
  return a;
}

}  // namespace

Vec2 social_force(const Vec2& position, const Vec2& velocity, double radius,
                  const Vec2& goal, const std::vector<SfNeighbor>& neighbors,
                  const VectorMap& m, const SocialForceParams& p) {
  Vec2 force = Vec2::Zero();

  const Vec2 to_goal = goal - position;
  const double dist_goal = to_goal.norm();
  if (dist_goal > 1e-9) {
    const Vec2 v_desired = p.desired_speed * to_goal / dist_goal;
    force += (v_desired - velocity) / p.relaxation;
  } else {
    force += -velocity / p.relaxation;
  }

  for (const auto& nb : neighbors) {
    const Vec2 away = position - nb.position;
    const double d = away.norm();
    if (d < 1e-9) continue;
    const double mag =
        p.agent_strength * std::exp((radius + nb.radius - d) / p.agent_range);
    force += mag * away / d;
  }

  // Nearest wall only.
  double best_d = std::numeric_limits<double>::infinity();
  Vec2 wall_away = Vec2::Zero();
  for (const auto& s : m.segments) {
    const Vec2 d = s.b - s.a;
    const double t =
        std::clamp((position - s.a).dot(d) / d.squaredNorm(), 0.0, 1.0);
    const Vec2 closest = s.a + t * d;
    const double dist = (position - closest).norm();
    if (dist < best_d) {
      best_d = dist;
      wall_away = position - closest;
    }
  }
  if (std::isfinite(best_d) && best_d > 1e-9) {
    force += p.wall_strength * std::exp((radius - best_d) / p.wall_range) *
             wall_away / best_d;
  }
  return force;
}

VelocityCommand social_force_step(const Pose& pose, double current_v,
                                  const Vec2& goal,
                                  const std::vector<SfNeighbor>& neighbors,
                                  const VectorMap& m,
                                  const SocialForceParams& p,
                                  const Kinodynamics& kin, double dt) {
  const Vec2 v_vec =
      current_v * Vec2(std::cos(pose.heading), std::sin(pose.heading));
  Vec2 force = social_force(pose.position, v_vec, kin.robot_radius, goal,
                            neighbors, m, p);
  const double f_norm = force.norm();
  if (f_norm > kin.a_max) force *= kin.a_max / f_norm;

  Vec2 v_new = v_vec + force * dt;
  const double speed = v_new.norm();
  if (speed > kin.v_max) v_new *= kin.v_max / speed;

  VelocityCommand cmd;
  if (v_new.norm() < 1e-6) {
    cmd.v = std::max(0.0, current_v - kin.a_max * dt);
    cmd.omega = 0.0;
    return cmd;
  }
  const double err = wrap_angle(std::atan2(v_new.y(), v_new.x()) - pose.heading);
  cmd.omega = std::clamp(err / dt, -kin.omega_max, kin.omega_max);
  double v = v_new.norm() * std::max(0.0, std::cos(err));
  v = std::clamp(v, current_v - kin.a_max * dt, current_v + kin.a_max * dt);
  cmd.v = std::clamp(v, 0.0, kin.v_max);
  return cmd;
}

}  // namespace socnav
