#pragma once

#include "socnav/local_planner.hpp"

namespace socnav {

/// Pedestrian-model defaults, used with little tuning for the comparison
/// baseline.
struct SocialForceParams {
  double relaxation = 0.5;      // s, goal attraction time constant
  double desired_speed = 1.5;   // m/s
  double agent_strength = 2.1;  // m/s^2
  double agent_range = 0.3;     // m
  double wall_strength = 3.0;   // m/s^2
  double wall_range = 0.2;      // m
};

struct SfNeighbor {
  Vec2 position;
  double radius;
};

/// Net force: goal attraction toward the desired velocity plus exponential
/// repulsions from each neighbor and from the nearest wall segment.
Vec2 social_force(const Vec2& position, const Vec2& velocity, double radius,
                  const Vec2& goal, const std::vector<SfNeighbor>& neighbors,
                  const VectorMap& m, const SocialForceParams& p);

/// Integrates the force for one tick and converts the resulting velocity
/// vector to a unicycle command under the same v_max / a_max / omega_max
/// clamps as the bi-level planner.
VelocityCommand social_force_step(const Pose& pose, double current_v,
                                  const Vec2& goal,
                                  const std::vector<SfNeighbor>& neighbors,
                                  const VectorMap& m,
                                  const SocialForceParams& p,
                                  const Kinodynamics& kin, double dt);

}  // namespace socnav
