#pragma once

#include "socnav/auction.hpp"
#include "socnav/scenario.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace socnav {

/// Deterministic per-episode generator. All scenario randomness (start
/// jitter, proxy bids) flows through this; the engine is otherwise pure.
/// splitmix64 with a 53-bit uniform mapping, so streams are identical on
/// every platform.
class EpisodeRng {
 public:
  explicit EpisodeRng(std::uint64_t seed) : state_(seed) {}

  static constexpr const char* kVersion = "splitmix64/u53-v1";

  double uniform(double lo, double hi);

 private:
  std::uint64_t next();
  std::uint64_t state_;
};

struct RobotState {
  int id = 0;
  Pose pose{};
  double v = 0.0;
  double omega = 0.0;
  Vec2 start = Vec2::Zero();
  Vec2 goal = Vec2::Zero();
  int sigma = 0;  // 0 = no turn assigned
  bool done = false;
  double t_goal = -1.0;  // s, -1 until the goal is reached
};

struct NeighborView {
  int id;
  Pose pose;
  double v;
  double omega;
  double v_max;  // base V_MAX, observable per the information model
  double radius;
};

/// What a controller is allowed to see: its own state plus neighbor poses,
/// velocities and base speed limits. Never carries zeta or bids.
struct Observation {
  RobotState self;
  std::vector<NeighborView> neighbors;
};

struct ZoneEntry {
  std::string zone;
  int robot;
  long tick;
  int initial_turn;  // turn assigned at auction time
};

struct EpisodeMetrics {
  std::vector<int> robot_ids;
  std::vector<bool> reached_goal;
  std::vector<double> goal_times;    // s, -1 if never
  std::vector<long> stop_ticks;      // |v| < eps before reaching the goal
  std::vector<long> delta_v_counts;  // |dv| > threshold between ticks
  int collisions = 0;                // robot-robot + robot-wall events
  int goal_adjacent_collisions = 0;  // both robots within 2x goal tolerance
  bool deadlock = false;
  bool success = false;  // all robots reached goals, zero collisions
  double makespan = 0.0;  // s, time of the last goal arrival
  std::optional<double> flow_rate;  // N/(z*T), only when success
  long ticks = 0;
  std::vector<ZoneEntry> zone_entries;
};

struct EpisodeResult {
  EpisodeMetrics metrics;
  std::string telemetry;  // line-delimited JSON records
};

/// Exact unicycle update over one tick; rotation in place when v = 0.
Pose integrate_unicycle(const Pose& pose, double v, double omega, double dt);

/// True when the summed displacement of unfinished robots over the window
/// falls strictly below min_progress.
bool detect_deadlock(const std::vector<double>& per_tick_progress,
                     std::size_t window = 100, double min_progress = 0.5);

long count_delta_v(const std::vector<double>& v_log, double threshold);

/// goal_tick < 0 means the robot never reached its goal.
long count_stop_time(const std::vector<double>& v_log, double v_eps,
                     long goal_tick);

double compute_flow_rate(int n_robots, double gap_width, double makespan);

/// Runs one full episode. Deterministic: the same (scenario, seed) yields
/// byte-identical telemetry.
EpisodeResult run_episode(const Scenario& scenario, std::uint64_t seed);

}  // namespace socnav
