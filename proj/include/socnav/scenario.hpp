#pragma once

#include "socnav/local_planner.hpp"
#include "socnav/social_forces.hpp"

#include <string>
#include <vector>

namespace socnav {

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scheduling { kAuction, kNone, kAltScaling };
enum class Controller { kBilevel, kSocialForces };

std::string to_string(Scheduling s);
std::string to_string(Controller c);

struct RobotSpec {
  int id = 0;
  Pose start{};
  Vec2 goal = Vec2::Zero();
  double zeta = 1.0;  // private priority constant
  Kinodynamics kin{};
};

struct Scenario {
  std::string name;
  VectorMap map;
  double tick_rate = 40.0;        // Hz
  long episode_cap = 4000;        // ticks
  double gap_width = 0.5;         // m, z in the flow-rate metric
  Scheduling scheduling = Scheduling::kAuction;
  Controller controller = Controller::kBilevel;
  double goal_tolerance = 0.15;   // m
  double engagement_radius = 3.0; // m
  double zeta_max = 5.0;          // proxy-bid support upper bound
  double delta_v_threshold = 0.05;  // m/s
  double stop_v_eps = 0.01;         // m/s
  double start_jitter = 0.0;        // m, seeded per-robot start perturbation
  double nav_resolution = 0.1;      // m, lattice spacing
  PlannerConfig planner;
  SocialForceParams social;
  std::vector<RobotSpec> robots;

  double dt() const { return 1.0 / tick_rate; }
};

/// JSON scenario file; the referenced map path is resolved relative to the
/// scenario file's directory. Throws ScenarioError naming the offending field.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text,
                        const std::string& base_dir);

}  // namespace socnav
