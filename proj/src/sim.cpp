#include "socnav/sim.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace socnav {

using nlohmann::json;

std::uint64_t EpisodeRng::next() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double EpisodeRng::uniform(double lo, double hi) {
  const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
  return lo + u * (hi - lo);
}

Pose integrate_unicycle(const Pose& pose, double v, double omega, double dt) {
  const double th0 = pose.heading;
  const double th1 = th0 + omega * dt;
  if (std::abs(omega) < 1e-12) {
    return {pose.position + v * dt * Vec2(std::cos(th0), std::sin(th0)), th1};
  }
  const double r = v / omega;
  return {pose.position + Vec2(r * (std::sin(th1) - std::sin(th0)),
                               -r * (std::cos(th1) - std::cos(th0))),
          th1};
}

bool detect_deadlock(const std::vector<double>& per_tick_progress,
                     std::size_t window, double min_progress) {
  if (per_tick_progress.size() < window) return false;
  double total = 0.0;
  for (std::size_t i = per_tick_progress.size() - window;
       i < per_tick_progress.size(); ++i) {
    total += per_tick_progress[i];
  }
  return total < min_progress;
}

long count_delta_v(const std::vector<double>& v_log, double threshold) {
  long n = 0;
  for (std::size_t i = 1; i < v_log.size(); ++i) {
    if (std::abs(v_log[i] - v_log[i - 1]) > threshold) ++n;
  }
  return n;
}

long count_stop_time(const std::vector<double>& v_log, double v_eps,
                     long goal_tick) {
  const std::size_t end = goal_tick < 0
                              ? v_log.size()
                              : std::min<std::size_t>(v_log.size(), goal_tick);
  long n = 0;
  for (std::size_t i = 0; i < end; ++i) {
    if (std::abs(v_log[i]) < v_eps) ++n;
  }
  return n;
}

double compute_flow_rate(int n_robots, double gap_width, double makespan) {
  if (gap_width <= 0.0 || makespan <= 0.0) {
    throw ScenarioError("flow rate needs positive gap width and makespan");
  }
  return static_cast<double>(n_robots) / (gap_width * makespan);
}

namespace {

// Per-robot data the engine keeps out of the Observation: the private
// priority constant and the robot's own plan.
struct ControllerState {
  double zeta;
  Kinodynamics kin;
  GlobalPath path;
  const NavGraph* graph;
};

struct ZoneControl {
  const ConflictZone* zone;
  bool active = false;
  PriorityOrdering order;
  PriorityOrdering initial;
  std::map<int, bool> entered;
};

json pose_record(long tick, const RobotState& s) {
  return json{{"type", "tick"},   {"t", tick},
              {"id", s.id},       {"x", s.pose.position.x()},
              {"y", s.pose.position.y()}, {"th", s.pose.heading},
              {"v", s.v},         {"w", s.omega},
              {"sigma", s.sigma}, {"done", s.done}};
}

}  // namespace

EpisodeResult run_episode(const Scenario& sc, std::uint64_t seed) {
  const double dt = sc.dt();
  EpisodeRng rng(seed);
  std::ostringstream log;

  // Jittered starts, one nav graph per distinct robot radius.
  std::vector<RobotState> robots;
  std::vector<ControllerState> ctl;
  std::map<double, NavGraph> graphs;
  for (const auto& spec : sc.robots) {
    RobotState s;
    s.id = spec.id;
    s.pose = spec.start;
    if (sc.start_jitter > 0.0) {
      s.pose.position.x() += rng.uniform(-sc.start_jitter, sc.start_jitter);
      s.pose.position.y() += rng.uniform(-sc.start_jitter, sc.start_jitter);
    }
    s.start = s.pose.position;
    s.goal = spec.goal;
    robots.push_back(s);

    // Global paths keep the planning safety margin from walls so tracking
    // wobble cannot graze them.
    const double plan_radius =
        spec.kin.robot_radius + sc.planner.safety_margin;
    auto it = graphs.find(plan_radius);
    if (it == graphs.end()) {
      it = graphs
               .emplace(plan_radius, build_nav_graph(sc.map, sc.nav_resolution,
                                                     plan_radius))
               .first;
    }
    ControllerState c;
    c.zeta = spec.zeta;
    c.kin = spec.kin;
    c.graph = &it->second;
    c.path = astar(it->second, s.pose.position, spec.goal);
    ctl.push_back(std::move(c));
  }
  const int n = static_cast<int>(robots.size());

  {
    json hdr{{"type", "header"},
             {"scenario", sc.name},
             {"seed", seed},
             {"rng", EpisodeRng::kVersion},
             {"tick_rate", sc.tick_rate},
             {"scheduling", to_string(sc.scheduling)},
             {"controller", to_string(sc.controller)}};
    json jr = json::array();
    for (int i = 0; i < n; ++i) {
      jr.push_back({{"id", robots[i].id},
                    {"v_max", ctl[i].kin.v_max},
                    {"a_max", ctl[i].kin.a_max},
                    {"omega_max", ctl[i].kin.omega_max},
                    {"radius", ctl[i].kin.robot_radius},
                    {"goal", {robots[i].goal.x(), robots[i].goal.y()}}});
    }
    hdr["robots"] = jr;
    log << hdr.dump() << "\n";
  }
  {
    json m{{"type", "map"}, {"segments", json::array()}};
    for (const auto& s : sc.map.segments) {
      m["segments"].push_back({s.a.x(), s.a.y(), s.b.x(), s.b.y()});
    }
    log << m.dump() << "\n";
  }
  for (const auto& s : robots) log << pose_record(0, s).dump() << "\n";

  std::vector<ZoneControl> zones;
  for (const auto& z : sc.map.zones) zones.push_back({&z});

  EpisodeMetrics metrics;
  for (const auto& s : robots) metrics.robot_ids.push_back(s.id);
  metrics.reached_goal.assign(n, false);
  metrics.goal_times.assign(n, -1.0);

  std::vector<std::vector<double>> v_logs(n);
  for (auto& vl : v_logs) vl.push_back(0.0);
  std::vector<long> goal_ticks(n, -1);
  std::vector<double> progress_history;
  std::set<std::pair<int, int>> colliding_pairs;
  std::set<int> colliding_walls;

  const bool schedule = sc.scheduling != Scheduling::kNone;
  const auto find_robot = [&](int id) -> int {
    for (int i = 0; i < n; ++i) {
      if (robots[i].id == id) return i;
    }
    return -1;
  };

  long tick = 0;
  bool all_done = false;
  for (; tick < sc.episode_cap; ++tick) {
    // Deadlock before planning: no meaningful progress over the window.
    bool any_unfinished = false;
    for (const auto& s : robots) any_unfinished |= !s.done;
    if (any_unfinished && detect_deadlock(progress_history)) {
      metrics.deadlock = true;
      log << json{{"type", "deadlock"}, {"t", tick}}.dump() << "\n";
      break;
    }

    // --- top level: conflict detection and auctions -----------------------
    if (schedule) {
      for (auto& zc : zones) {
        std::vector<ConflictQuery> queries;
        for (int i = 0; i < n; ++i) {
          if (robots[i].done) continue;
          queries.push_back(
              {robots[i].id, robots[i].pose.position, &ctl[i].path});
        }
        if (!zc.active) {
          const auto conflict =
              detect_conflict(queries, *zc.zone, tick, sc.engagement_radius);
          if (!conflict) continue;
          // Decentralized bids: each controller reports from its own zeta.
          std::vector<Bid> bids;
          for (int id : conflict->robots) {
            bids.push_back(optimal_bid(id, ctl[find_robot(id)].zeta));
          }
          zc.order = allocate(bids);
          zc.initial = zc.order;
          zc.active = true;
          zc.entered.clear();

          // Each robot estimates its social-cost payment with proxy bids
          // sampled in turn order; logged for audit only.
          const int k = zc.order.size();
          const auto alpha = default_alpha(k);
          json jbids = json::array();
          for (const auto& b : bids) jbids.push_back({b.robot, b.value});
          json jpay = json::array();
          for (int q = 1; q <= k; ++q) {
            std::vector<double> proxies;
            for (int j = q + 1; j <= k; ++j) {
              proxies.push_back(sc.zeta_max * (1.0 - rng.uniform(0.0, 1.0)));
            }
            jpay.push_back({zc.order.robot_at(q), payment(q, proxies, alpha)});
          }
          log << json{{"type", "auction"},
                      {"t", tick},
                      {"zone", zc.zone->id},
                      {"bids", jbids},
                      {"order", zc.order.by_turn},
                      {"payments", jpay}}
                  .dump()
              << "\n";
        } else {
          // Robots arriving after the auction join at the back of the queue.
          for (const auto& q : queries) {
            if (zc.order.contains(q.robot) || zc.entered.count(q.robot)) {
              continue;
            }
            if (distance_to_zone(q.position, *zc.zone) < sc.engagement_radius &&
                path_crosses_zone(*q.path, q.position, *zc.zone)) {
              zc.order.by_turn.push_back(q.robot);
              zc.initial.by_turn.push_back(q.robot);
              log << json{{"type", "join"},
                          {"t", tick},
                          {"zone", zc.zone->id},
                          {"id", q.robot},
                          {"turn", zc.order.size()}}
                      .dump()
                  << "\n";
            }
          }
        }
      }
    }

    // Turn assignment for this tick.
    for (auto& s : robots) s.sigma = 0;
    for (const auto& zc : zones) {
      if (!zc.active) continue;
      for (int turn = 1; turn <= zc.order.size(); ++turn) {
        robots[find_robot(zc.order.robot_at(turn))].sigma = turn;
      }
    }

    // --- bottom level: plan against the shared pre-tick snapshot ----------
    const std::vector<RobotState> snapshot = robots;
    std::vector<VelocityCommand> commands(n);
    for (int i = 0; i < n; ++i) {
      if (snapshot[i].done) continue;

      Observation obs;
      obs.self = snapshot[i];
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        obs.neighbors.push_back({snapshot[j].id, snapshot[j].pose,
                                 snapshot[j].v, snapshot[j].omega,
                                 ctl[j].kin.v_max, ctl[j].kin.robot_radius});
      }

      if (sc.controller == Controller::kSocialForces) {
        std::vector<SfNeighbor> nbrs;
        for (const auto& nb : obs.neighbors) {
          nbrs.push_back({nb.pose.position, nb.radius});
        }
        SocialForceParams p = sc.social;
        p.desired_speed = std::min(p.desired_speed, ctl[i].kin.v_max);
        commands[i] =
            social_force_step(obs.self.pose, obs.self.v, obs.self.goal, nbrs,
                              sc.map, p, ctl[i].kin, dt);
        continue;
      }

      Kinodynamics kin = ctl[i].kin;
      if (obs.self.sigma > 0) {
        if (sc.scheduling == Scheduling::kAltScaling) {
          if (5.0 * kin.v_max > static_cast<double>(obs.self.sigma)) {
            kin = alt_scale_kinodynamics(kin, obs.self.sigma);
          }
        } else {
          kin = scale_kinodynamics(kin, obs.self.sigma);
        }
      }

      // Replan when the robot has drifted out of the path corridor.
      if (path_deviation(ctl[i].path, obs.self.pose.position) >
          2.0 * sc.nav_resolution) {
        try {
          ctl[i].path =
              astar(*ctl[i].graph, obs.self.pose.position, obs.self.goal);
        } catch (const PlanningError&) {
          // Keep the stale path; the local planner still clips for safety.
        }
      }

      std::vector<Disc> others;
      for (const auto& nb : obs.neighbors) {
        others.push_back({nb.pose.position, nb.radius});
      }

      const auto plan = plan_step(obs.self.pose, obs.self.v, ctl[i].path, kin,
                                  sc.planner, sc.map, others, dt);
      commands[i] = plan.command;
    }

    // --- integrate and account -------------------------------------------
    double progress = 0.0;
    for (int i = 0; i < n; ++i) {
      if (robots[i].done) continue;
      const Pose before = robots[i].pose;
      robots[i].pose =
          integrate_unicycle(before, commands[i].v, commands[i].omega, dt);
      robots[i].v = commands[i].v;
      robots[i].omega = commands[i].omega;
      progress += (robots[i].pose.position - before.position).norm();
    }
    progress_history.push_back(progress);

    // Collision events (onset only).
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const Disc a{robots[i].pose.position, ctl[i].kin.robot_radius};
        const Disc b{robots[j].pose.position, ctl[j].kin.robot_radius};
        const auto key = std::make_pair(i, j);
        if (discs_collide(a, b)) {
          if (!colliding_pairs.count(key)) {
            colliding_pairs.insert(key);
            const bool near_goals =
                (robots[i].pose.position - robots[i].goal).norm() <
                    2.0 * sc.goal_tolerance &&
                (robots[j].pose.position - robots[j].goal).norm() <
                    2.0 * sc.goal_tolerance;
            if (near_goals) {
              ++metrics.goal_adjacent_collisions;
            } else {
              ++metrics.collisions;
            }
            log << json{{"type", "collision"},
                        {"t", tick + 1},
                        {"a", robots[i].id},
                        {"b", robots[j].id},
                        {"goal_adjacent", near_goals}}
                    .dump()
                << "\n";
          }
        } else {
          colliding_pairs.erase(key);
        }
      }
      const Disc d{robots[i].pose.position, ctl[i].kin.robot_radius};
      if (disc_collides_map(d, sc.map)) {
        if (!colliding_walls.count(i)) {
          colliding_walls.insert(i);
          ++metrics.collisions;
          log << json{{"type", "collision"},
                      {"t", tick + 1},
                      {"a", robots[i].id},
                      {"b", -1},
                      {"goal_adjacent", false}}
                  .dump()
              << "\n";
        }
      } else {
        colliding_walls.erase(i);
      }
    }

    // Goal arrivals.
    for (int i = 0; i < n; ++i) {
      if (robots[i].done) continue;
      if ((robots[i].pose.position - robots[i].goal).norm() <=
          sc.goal_tolerance) {
        robots[i].done = true;
        robots[i].v = 0.0;
        robots[i].omega = 0.0;
        robots[i].t_goal = (tick + 1) * dt;
        metrics.reached_goal[i] = true;
        metrics.goal_times[i] = robots[i].t_goal;
        goal_ticks[i] = tick + 1;
        log << json{{"type", "goal"}, {"t", tick + 1}, {"id", robots[i].id}}
                .dump()
            << "\n";
      }
    }

    // Zone entries and queue advancement.
    for (auto& zc : zones) {
      if (!zc.active) continue;
      std::vector<int> cleared;
      for (int turn = 1; turn <= zc.order.size(); ++turn) {
        const int id = zc.order.robot_at(turn);
        const int i = find_robot(id);
        const bool inside =
            in_conflict_zone(robots[i].pose.position, *zc.zone);
        if (inside && !zc.entered[id]) {
          zc.entered[id] = true;
          metrics.zone_entries.push_back(
              {zc.zone->id, id, tick + 1, zc.initial.turn_of(id)});
          log << json{{"type", "zone_entry"},
                      {"t", tick + 1},
                      {"zone", zc.zone->id},
                      {"id", id},
                      {"initial_turn", zc.initial.turn_of(id)}}
                  .dump()
              << "\n";
        }
        if (robots[i].done || (zc.entered[id] && !inside)) cleared.push_back(id);
      }
      for (int id : cleared) {
        zc.order.remove(id);
        log << json{{"type", "clear"},
                    {"t", tick + 1},
                    {"zone", zc.zone->id},
                    {"id", id}}
                .dump()
            << "\n";
      }
      if (zc.order.size() == 0) zc.active = false;
    }

    for (int i = 0; i < n; ++i) v_logs[i].push_back(robots[i].v);
    for (const auto& s : robots) log << pose_record(tick + 1, s).dump() << "\n";

    all_done = true;
    for (const auto& s : robots) all_done &= s.done;
    if (all_done) {
      ++tick;
      break;
    }
  }

  metrics.ticks = tick;
  for (int i = 0; i < n; ++i) {
    metrics.stop_ticks.push_back(
        count_stop_time(v_logs[i], sc.stop_v_eps, goal_ticks[i]));
    std::vector<double> trimmed = v_logs[i];
    if (goal_ticks[i] >= 0) trimmed.resize(goal_ticks[i] + 1);
    metrics.delta_v_counts.push_back(
        count_delta_v(trimmed, sc.delta_v_threshold));
  }
  bool all_reached = true;
  double makespan = 0.0;
  for (int i = 0; i < n; ++i) {
    all_reached &= metrics.reached_goal[i];
    makespan = std::max(makespan, metrics.goal_times[i]);
  }
  metrics.makespan = all_reached ? makespan : tick * dt;
  metrics.success = all_reached && metrics.collisions == 0;
  if (metrics.success && metrics.makespan > 0.0) {
    metrics.flow_rate =
        compute_flow_rate(n, sc.gap_width, metrics.makespan);
  }

  {
    json end{{"type", "end"},
             {"ticks", metrics.ticks},
             {"success", metrics.success},
             {"deadlock", metrics.deadlock},
             {"collisions", metrics.collisions},
             {"goal_adjacent_collisions", metrics.goal_adjacent_collisions},
             {"makespan", metrics.makespan}};
    if (metrics.flow_rate) end["flow_rate"] = *metrics.flow_rate;
    json jr = json::array();
    for (int i = 0; i < n; ++i) {
      jr.push_back({{"id", robots[i].id},
                    {"success", static_cast<bool>(metrics.reached_goal[i])},
                    {"t_goal", metrics.goal_times[i]},
                    {"stop_ticks", metrics.stop_ticks[i]},
                    {"delta_v", metrics.delta_v_counts[i]}});
    }
    end["robots"] = jr;
    log << end.dump() << "\n";
  }

  return {std::move(metrics), log.str()};
}

}  // namespace socnav
