#include "socnav/local_planner.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace socnav;

namespace {

const Kinodynamics kBase{1.5, 4.0, 3.0, 2.0, 0.15};

// Independent oracle: midpoint-rule integration of the unicycle ODE at a
// fixed curvature.
Pose integrate_arc_numerically(const Pose& start, double curvature,
                               double length, double step = 1e-5) {
  Pose p = start;
  double s = 0.0;
  while (s < length) {
    const double h = std::min(step, length - s);
    const double mid = p.heading + 0.5 * curvature * h;
    p.position += h * Vec2(std::cos(mid), std::sin(mid));
    p.heading += curvature * h;
    s += h;
  }
  return p;
}

// Independent oracle: densely sample the polyline and keep the point at
// lookahead distance that is farthest along.
Vec2 pursuit_by_sampling(const Vec2& position, const GlobalPath& path,
                         double lookahead, int per_seg = 20000) {
  Vec2 best = path.waypoints.front();
  bool found = false;
  for (std::size_t i = 0; i + 1 < path.waypoints.size(); ++i) {
    for (int k = 0; k <= per_seg; ++k) {
      const double t = static_cast<double>(k) / per_seg;
      const Vec2 q =
          path.waypoints[i] + t * (path.waypoints[i + 1] - path.waypoints[i]);
      if (std::abs((q - position).norm() - lookahead) < 2e-4) {
        best = q;
        found = true;
      }
    }
  }
  REQUIRE(found);
  return best;
}

// Duplicate cost evaluator written from the feature definition.
double cost_by_hand(const ArcTrajectory& arc, const Vec2& target,
                    const Vec2& goal, const FeatureWeights& w,
                    const VectorMap& m, double eps) {
  double min_clear = std::numeric_limits<double>::infinity();
  for (const auto& p : arc.samples) {
    for (const auto& seg : m.segments) {
      min_clear = std::min(min_clear, distance_point_segment(p.position, seg));
    }
  }
  const Vec2 end = arc.samples.back().position;
  return w.clearance / (min_clear + eps) + w.target_distance * (end - target).norm() -
         w.arc_length * arc.length + w.goal_distance * (end - goal).norm();
}

VectorMap corridor_map() {
  VectorMap m;
  m.bounds = {{-5, -5}, {5, 5}};
  m.segments = {{{-5, 1}, {5, 1}}, {{-5, -1}, {5, -1}}};
  return m;
}

}  // namespace

TEST_CASE("turn scaling divides the speed limit") {
  CHECK(scale_kinodynamics(kBase, 1).v_max == doctest::Approx(1.5));
  CHECK(scale_kinodynamics(kBase, 2).v_max == doctest::Approx(0.75));
  CHECK(scale_kinodynamics(kBase, 3).v_max == doctest::Approx(0.5));
  CHECK(scale_kinodynamics(kBase, 2).a_max == doctest::Approx(kBase.a_max));
  CHECK_THROWS_AS(scale_kinodynamics(kBase, 0), PlanningError);
}

TEST_CASE("alternative scaling raises the limit and can blow up") {
  // 1.5 / (1 - turn / 7.5)
  CHECK(alt_scale_kinodynamics(kBase, 1).v_max ==
        doctest::Approx(1.5 / (1.0 - 1.0 / 7.5)));
  CHECK(alt_scale_kinodynamics(kBase, 2).v_max ==
        doctest::Approx(1.5 / (1.0 - 2.0 / 7.5)));
  CHECK(alt_scale_kinodynamics(kBase, 1).v_max == doctest::Approx(1.7307692308));
  CHECK(alt_scale_kinodynamics(kBase, 2).v_max == doctest::Approx(2.0454545455));
  CHECK_THROWS_WITH_AS(alt_scale_kinodynamics(kBase, 8), "invalid alt scaling",
                       PlanningError);
}

TEST_CASE("advance_along_arc closed form") {
  // Quarter circle of radius 1 from the origin heading +x.
  const Pose p = advance_along_arc({{0, 0}, 0.0}, 1.0, M_PI / 2.0);
  CHECK(p.position.x() == doctest::Approx(1.0));
  CHECK(p.position.y() == doctest::Approx(1.0));
  CHECK(p.heading == doctest::Approx(M_PI / 2.0));

  // Straight arc.
  const Pose q = advance_along_arc({{1, 2}, M_PI / 4.0}, 0.0, std::sqrt(2.0));
  CHECK(q.position.x() == doctest::Approx(2.0));
  CHECK(q.position.y() == doctest::Approx(3.0));
}

TEST_CASE("advance_along_arc matches numerical integration") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> uc(-2.0, 2.0);
  std::uniform_real_distribution<double> ul(0.1, 3.0);
  std::uniform_real_distribution<double> uh(-M_PI, M_PI);
  for (int i = 0; i < 25; ++i) {
    const Pose start{{uc(rng), uc(rng)}, uh(rng)};
    const double curvature = uc(rng);
    const double length = ul(rng);
    const Pose exact = advance_along_arc(start, curvature, length);
    const Pose numeric = integrate_arc_numerically(start, curvature, length);
    CHECK((exact.position - numeric.position).norm() < 1e-4);
    CHECK(std::abs(exact.heading - numeric.heading) < 1e-4);
  }
}

TEST_CASE("pure pursuit target selection") {
  GlobalPath straight;
  straight.waypoints = {{0, 0}, {10, 0}};
  straight.total_length = 10.0;
  const Vec2 t1 = pure_pursuit_target({0, 0}, straight, 1.0);
  CHECK(t1.x() == doctest::Approx(1.0));
  CHECK(t1.y() == doctest::Approx(0.0));

  // Goal inside the lookahead circle: chase the goal itself.
  const Vec2 t2 = pure_pursuit_target({9.5, 0.2}, straight, 1.0);
  CHECK(t2.x() == doctest::Approx(10.0));

  // Circle misses the path entirely: nearest point fallback.
  const Vec2 t3 = pure_pursuit_target({5.0, 4.0}, straight, 1.0);
  CHECK(t3.x() == doctest::Approx(5.0));
  CHECK(t3.y() == doctest::Approx(0.0));

  // L-shaped path: compare with the dense sampling oracle.
  GlobalPath ell;
  ell.waypoints = {{0, 0}, {2, 0}, {2, 2}};
  ell.total_length = 4.0;
  for (const Vec2 pos : {Vec2{1.5, 0.1}, Vec2{1.9, 0.4}, Vec2{2.1, 1.0}}) {
    const Vec2 got = pure_pursuit_target(pos, ell, 0.8);
    const Vec2 want = pursuit_by_sampling(pos, ell, 0.8);
    CHECK((got - want).norm() < 1e-3);
    CHECK((got - pos).norm() == doctest::Approx(0.8).epsilon(1e-6));
  }
}

TEST_CASE("sample_arcs shape") {
  const auto arcs = sample_arcs({{0, 0}, 0.0}, kBase, 5, 1.0, 0.1);
  REQUIRE(arcs.size() == 5);
  CHECK(arcs[0].curvature == doctest::Approx(-2.0));
  CHECK(arcs[2].curvature == 0.0);  // exact center
  CHECK(arcs[4].curvature == doctest::Approx(2.0));
  for (const auto& a : arcs) {
    CHECK(a.length == doctest::Approx(1.0));
    CHECK(a.samples.front().position.norm() == doctest::Approx(0.0));
    const Pose want = advance_along_arc({{0, 0}, 0.0}, a.curvature, 1.0);
    CHECK((a.endpoint().position - want.position).norm() < 1e-12);
  }
  CHECK_THROWS_AS(sample_arcs({{0, 0}, 0.0}, kBase, 4, 1.0, 0.1),
                  PlanningError);
  CHECK_THROWS_AS(sample_arcs({{0, 0}, 0.0}, kBase, 1, 1.0, 0.1),
                  PlanningError);
}

TEST_CASE("clip_arc truncates before the wall") {
  VectorMap m;
  m.bounds = {{-5, -5}, {5, 5}};
  m.segments = {{{1.0, -5}, {1.0, 5}}};  // wall at x = 1
  ArcTrajectory arc;
  arc.curvature = 0.0;
  arc.length = 2.0;
  arc.sample_spacing = 0.05;
  for (double s = 0.0; s <= 2.0 + 1e-9; s += 0.05) {
    arc.samples.push_back(advance_along_arc({{0, 0}, 0.0}, 0.0, s));
  }
  // Clearance drops below 0.15 past x = 0.85; minus the 0.05 stop margin the
  // clipped length lands at 0.8 give or take one sample spacing.
  const ArcTrajectory clipped = clip_arc(arc, m, {}, 0.15, 0.05);
  CHECK(clipped.length == doctest::Approx(0.8).epsilon(0.07));
  CHECK(clipped.endpoint().position.x() < 0.85 + 1e-9);

  // Untouched arc comes back unchanged.
  VectorMap empty = m;
  empty.segments.clear();
  const ArcTrajectory same = clip_arc(arc, empty, {}, 0.15, 0.05);
  CHECK(same.length == doctest::Approx(2.0));
  CHECK(same.samples.size() == arc.samples.size());

  // Blocked start: zero length.
  const ArcTrajectory dead =
      clip_arc(arc, m, {Disc{{0.0, 0.0}, 0.2}}, 0.15, 0.05);
  CHECK(dead.length == 0.0);

  // Another robot in the way clips earlier than the wall.
  const ArcTrajectory dodged =
      clip_arc(arc, m, {Disc{{0.6, 0.0}, 0.15}}, 0.15, 0.05);
  CHECK(dodged.length < 0.35);
}

TEST_CASE("evaluate_cost matches a duplicate evaluator") {
  const VectorMap m = corridor_map();
  const FeatureWeights w{0.7, 2.2, 0.4, 1.3};
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> uc(-1.5, 1.5);
  std::uniform_real_distribution<double> up(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    const Pose start{{up(rng), 0.4 * uc(rng)}, 0.3 * uc(rng)};
    const auto arcs = sample_arcs(start, kBase, 7, 1.0, 0.05);
    const Vec2 target{up(rng), 0.5 * uc(rng)};
    const Vec2 goal{up(rng), 0.5 * uc(rng)};
    for (const auto& a : arcs) {
      CHECK(evaluate_cost(a, target, goal, w, m, 1e-3) ==
            doctest::Approx(cost_by_hand(a, target, goal, w, m, 1e-3))
                .epsilon(1e-9));
    }
  }
}

TEST_CASE("uniform weight scaling preserves the argmin") {
  const VectorMap m = corridor_map();
  const Pose start{{-2, 0}, 0.0};
  const auto arcs = sample_arcs(start, kBase, 11, 1.5, 0.05);
  const Vec2 target{-0.5, 0.3};
  const Vec2 goal{3.0, 0.0};
  const FeatureWeights w{0.2, 3.0, 0.3, 1.0};
  FeatureWeights scaled = w;
  scaled.clearance *= 4.0;
  scaled.target_distance *= 4.0;
  scaled.arc_length *= 4.0;
  scaled.goal_distance *= 4.0;
  int best_w = -1, best_s = -1;
  double cw = 1e18, cs = 1e18;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const double a = evaluate_cost(arcs[i], target, goal, w, m);
    const double b = evaluate_cost(arcs[i], target, goal, scaled, m);
    if (a < cw) { cw = a; best_w = static_cast<int>(i); }
    if (b < cs) { cs = b; best_s = static_cast<int>(i); }
    CHECK(b == doctest::Approx(4.0 * a).epsilon(1e-12));
  }
  CHECK(best_w == best_s);
}

TEST_CASE("plan_velocity ramps, cruises, and brakes") {
  const Kinodynamics kin{2.0, 1.0, 3.0, 2.0, 0.15};
  const double dt = 0.025;
  // Ramp from rest toward a distant stop point.
  CHECK(plan_velocity(0.0, kin, 100.0, dt) == doctest::Approx(0.025));
  // Cruise at the limit.
  CHECK(plan_velocity(2.0, kin, 100.0, dt) == doctest::Approx(2.0));
  // Brake when the stopping distance is exhausted: 1.0^2/(2*1) = 0.5 >= 0.4.
  CHECK(plan_velocity(1.0, kin, 0.4, dt) == doctest::Approx(0.975));
  // Never negative.
  CHECK(plan_velocity(0.01, kin, 0.0, dt) == doctest::Approx(0.0));
  // Acceleration clamp binds near the limit.
  CHECK(plan_velocity(1.99, kin, 100.0, dt) == doctest::Approx(2.0));
  CHECK_THROWS_AS(plan_velocity(1.0, kin, -0.1, dt), PlanningError);
  CHECK_THROWS_AS(plan_velocity(1.0, kin, 1.0, 0.0), PlanningError);
}

TEST_CASE("plan_step commands stay feasible and progress down a corridor") {
  const VectorMap m = corridor_map();
  GlobalPath path;
  path.waypoints = {{-4, 0}, {4, 0}};
  path.total_length = 8.0;
  PlannerConfig cfg;
  const double dt = 0.025;
  Pose pose{{-4, 0}, 0.0};
  double v = 0.0;
  for (int tick = 0; tick < 400; ++tick) {
    const PlanResult r = plan_step(pose, v, path, kBase, cfg, m, {}, dt);
    CHECK(r.command.v >= 0.0);
    CHECK(r.command.v <= kBase.v_max + 1e-9);
    CHECK(std::abs(r.command.v - v) <= kBase.a_max * dt + 1e-9);
    CHECK(std::abs(r.command.omega) <= kBase.omega_max + 1e-9);
    if (r.command.v > 1e-9) {
      CHECK(std::abs(r.command.omega / r.command.v) <=
            kBase.curvature_max + 1e-9);
    }
    pose = advance_along_arc(pose, r.arc.curvature, r.command.v * dt);
    v = r.command.v;
    if ((pose.position - path.goal()).norm() < 0.1) break;
  }
  CHECK((pose.position - path.goal()).norm() < 0.2);
}

TEST_CASE("plan_step brakes when boxed in") {
  VectorMap m;
  m.bounds = {{-5, -5}, {5, 5}};
  m.segments = {{{0.2, -5}, {0.2, 5}}};
  GlobalPath path;
  path.waypoints = {{0, 0}, {3, 0}};
  path.total_length = 3.0;
  PlannerConfig cfg;
  // Hemmed in by the wall ahead and a robot right behind.
  const std::vector<Disc> others{{{-0.25, 0.0}, 0.15}, {{0.0, 0.35}, 0.15},
                                 {{0.0, -0.35}, 0.15}};
  const PlanResult r =
      plan_step({{0, 0}, 0.0}, 1.0, path, kBase, cfg, m, others, 0.025);
  CHECK(r.blocked);
  CHECK(r.command.v == doctest::Approx(1.0 - kBase.a_max * 0.025));
  CHECK(r.command.omega == 0.0);
}
