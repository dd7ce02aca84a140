#include "socnav/social_forces.hpp"

#include <doctest.h>

#include <cmath>

using namespace socnav;

namespace {

VectorMap far_walls() {
  VectorMap m;
  m.bounds = {{-50, -50}, {50, 50}};
  m.segments = {{{-50, -50}, {50, -50}},
                {{50, -50}, {50, 50}},
                {{50, 50}, {-50, 50}},
                {{-50, 50}, {-50, -50}}};
  return m;
}

const Kinodynamics kKin{1.5, 4.0, 3.0, 2.0, 0.15};

}  // namespace

TEST_CASE("goal attraction alone relaxes toward the desired velocity") {
  const VectorMap m = far_walls();
  SocialForceParams p;
  // At rest, 10 m from the goal along +x: force = v_des/tau along +x
  // (wall repulsion is negligible 49+ m away).
  const Vec2 f = social_force({0, 0}, {0, 0}, 0.15, {10, 0}, {}, m, p);
  CHECK(f.x() == doctest::Approx(p.desired_speed / p.relaxation).epsilon(1e-6));
  CHECK(std::abs(f.y()) < 1e-6);

  // Already moving at the desired velocity: attraction vanishes.
  const Vec2 g =
      social_force({0, 0}, {p.desired_speed, 0}, 0.15, {10, 0}, {}, m, p);
  CHECK(g.norm() < 1e-6);
}

TEST_CASE("neighbor repulsion is symmetric and decays with distance") {
  const VectorMap m = far_walls();
  SocialForceParams p;
  // Two neighbors mirrored about the x axis: lateral pushes cancel.
  const std::vector<SfNeighbor> sym{{{1.0, 0.6}, 0.15}, {{1.0, -0.6}, 0.15}};
  const Vec2 f = social_force({0, 0}, {0, 0}, 0.15, {10, 0}, sym, m, p);
  CHECK(std::abs(f.y()) < 1e-9);

  // A single neighbor dead ahead reduces the forward force.
  const Vec2 base = social_force({0, 0}, {0, 0}, 0.15, {10, 0}, {}, m, p);
  const Vec2 ahead = social_force({0, 0}, {0, 0}, 0.15, {10, 0},
                                  {{{0.5, 0.0}, 0.15}}, m, p);
  CHECK(ahead.x() < base.x());

  // Repulsion decays with distance.
  const Vec2 near_f = social_force({0, 0}, {0, 0}, 0.15, {10, 0},
                                   {{{0.5, 0.0}, 0.15}}, m, p);
  const Vec2 far_f = social_force({0, 0}, {0, 0}, 0.15, {10, 0},
                                  {{{2.0, 0.0}, 0.15}}, m, p);
  CHECK(base.x() - near_f.x() > base.x() - far_f.x());
}

TEST_CASE("wall repulsion points away from the nearest wall") {
  VectorMap m = far_walls();
  m.segments.push_back({{-5, 0.3}, {5, 0.3}});
  SocialForceParams p;
  const Vec2 with_wall = social_force({0, 0}, {0, 0}, 0.15, {10, 0}, {}, m, p);
  const Vec2 without =
      social_force({0, 0}, {0, 0}, 0.15, {10, 0}, {}, far_walls(), p);
  CHECK(with_wall.y() < without.y());  // pushed in -y, away from the wall
}

TEST_CASE("social_force_step respects the kinodynamic clamps") {
  const VectorMap m = far_walls();
  SocialForceParams p;
  const double dt = 0.025;

  // Straight pursuit from rest.
  const VelocityCommand c1 =
      social_force_step({{0, 0}, 0.0}, 0.0, {10, 0}, {}, m, p, kKin, dt);
  CHECK(c1.v > 0.0);
  CHECK(c1.v <= kKin.a_max * dt + 1e-12);
  CHECK(std::abs(c1.omega) < 1e-9);

  // Goal behind and crowded: the clamps still hold.
  const std::vector<SfNeighbor> crowd{{{0.32, 0.0}, 0.15},
                                      {{0.0, 0.32}, 0.15},
                                      {{-0.1, -0.31}, 0.15}};
  for (double v0 : {0.0, 0.5, 1.5}) {
    const VelocityCommand c =
        social_force_step({{0, 0}, 0.0}, v0, {-10, 2}, crowd, m, p, kKin, dt);
    CHECK(c.v >= 0.0);
    CHECK(c.v <= kKin.v_max + 1e-12);
    CHECK(std::abs(c.v - v0) <= kKin.a_max * dt + 1e-12);
    CHECK(std::abs(c.omega) <= kKin.omega_max + 1e-12);
  }

  // Desired speed clamp: the cruise speed never exceeds v_max.
  Kinodynamics slow = kKin;
  slow.v_max = 0.4;
  double v = 0.0;
  Pose pose{{0, 0}, 0.0};
  SocialForceParams pf;
  pf.desired_speed = std::min(pf.desired_speed, slow.v_max);
  for (int i = 0; i < 200; ++i) {
    const VelocityCommand c =
        social_force_step(pose, v, {30, 0}, {}, m, pf, slow, dt);
    v = c.v;
    pose.position.x() += v * dt;
    CHECK(v <= slow.v_max + 1e-12);
  }
  // Exponential relaxation toward v_max: within a tenth of a percent by now.
  CHECK(v == doctest::Approx(slow.v_max).epsilon(1e-3));
}
