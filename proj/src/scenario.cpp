#include "socnav/scenario.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace socnav {

using nlohmann::json;

std::string to_string(Scheduling s) {
  switch (s) {
    case Scheduling::kAuction: return "auction";
    case Scheduling::kNone: return "none";
    case Scheduling::kAltScaling: return "alt-scaling";
  }
  return "?";
}

std::string to_string(Controller c) {
  return c == Controller::kBilevel ? "bilevel" : "social-forces";
}

namespace {

template <typename T>
T require(const json& j, const std::string& field) {
  if (!j.contains(field)) {
    throw ScenarioError("missing field '" + field + "'");
  }
  try {
    return j.at(field).get<T>();
  } catch (const json::exception&) {
    throw ScenarioError("field '" + field + "' has the wrong type");
  }
}

template <typename T>
T get_or(const json& j, const std::string& field, T fallback) {
  if (!j.contains(field)) return fallback;
  try {
    return j.at(field).get<T>();
  } catch (const json::exception&) {
    throw ScenarioError("field '" + field + "' has the wrong type");
  }
}

Scheduling parse_scheduling(const std::string& s) {
  if (s == "auction") return Scheduling::kAuction;
  if (s == "none") return Scheduling::kNone;
  if (s == "alt-scaling") return Scheduling::kAltScaling;
  throw ScenarioError("field 'scheduling': unknown mode '" + s + "'");
}

Controller parse_controller(const std::string& s) {
  if (s == "bilevel") return Controller::kBilevel;
  if (s == "social-forces") return Controller::kSocialForces;
  throw ScenarioError("field 'controller': unknown mode '" + s + "'");
}

}  // namespace

Scenario parse_scenario(const std::string& json_text,
                        const std::string& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
  }

  Scenario sc;
  sc.name = require<std::string>(j, "name");
  const auto map_file = require<std::string>(j, "map");
  sc.map = load_map((std::filesystem::path(base_dir) / map_file).string());

  sc.tick_rate = get_or(j, "tick_rate_hz", 40.0);
  if (sc.tick_rate <= 0.0) throw ScenarioError("field 'tick_rate_hz' must be positive");
  sc.episode_cap = get_or(j, "episode_cap_ticks", 4000L);
  sc.gap_width = get_or(j, "gap_width_m", 0.5);
  if (sc.gap_width <= 0.0) throw ScenarioError("field 'gap_width_m' must be positive");
  sc.scheduling = parse_scheduling(get_or<std::string>(j, "scheduling", "auction"));
  sc.controller = parse_controller(get_or<std::string>(j, "controller", "bilevel"));
  sc.goal_tolerance = get_or(j, "goal_tolerance_m", 0.15);
  sc.engagement_radius = get_or(j, "engagement_radius_m", 3.0);
  sc.zeta_max = get_or(j, "zeta_max", 5.0);
  sc.delta_v_threshold = get_or(j, "delta_v_threshold", 0.05);
  sc.stop_v_eps = get_or(j, "stop_v_eps", 0.01);
  sc.start_jitter = get_or(j, "start_jitter_m", 0.0);
  sc.nav_resolution = get_or(j, "nav_resolution_m", 0.1);

  if (j.contains("planner")) {
    const auto& p = j.at("planner");
    if (p.contains("weights")) {
      const auto& w = p.at("weights");
      sc.planner.weights.clearance = get_or(w, "clearance", sc.planner.weights.clearance);
      sc.planner.weights.target_distance =
          get_or(w, "target_distance", sc.planner.weights.target_distance);
      sc.planner.weights.arc_length =
          get_or(w, "arc_length", sc.planner.weights.arc_length);
      sc.planner.weights.goal_distance =
          get_or(w, "goal_distance", sc.planner.weights.goal_distance);
    }
    sc.planner.lookahead = get_or(p, "lookahead_m", sc.planner.lookahead);
    sc.planner.arc_count = get_or(p, "arc_count", sc.planner.arc_count);
    sc.planner.horizon = get_or(p, "horizon_m", sc.planner.horizon);
    sc.planner.sample_spacing =
        get_or(p, "sample_spacing_m", sc.planner.sample_spacing);
    sc.planner.safety_margin =
        get_or(p, "safety_margin_m", sc.planner.safety_margin);
  }

  if (j.contains("social_forces")) {
    const auto& s = j.at("social_forces");
    sc.social.relaxation = get_or(s, "relaxation_s", sc.social.relaxation);
    sc.social.desired_speed = get_or(s, "desired_speed", sc.social.desired_speed);
    sc.social.agent_strength = get_or(s, "agent_strength", sc.social.agent_strength);
    sc.social.agent_range = get_or(s, "agent_range_m", sc.social.agent_range);
    sc.social.wall_strength = get_or(s, "wall_strength", sc.social.wall_strength);
    sc.social.wall_range = get_or(s, "wall_range_m", sc.social.wall_range);
  }

  if (!j.contains("robots") || !j.at("robots").is_array() ||
      j.at("robots").empty()) {
    throw ScenarioError("field 'robots' must be a non-empty array");
  }
  for (const auto& r : j.at("robots")) {
    RobotSpec spec;
    spec.id = require<int>(r, "id");
    const auto start = require<std::vector<double>>(r, "start");
    if (start.size() != 3) {
      throw ScenarioError("field 'start' must be [x, y, heading]");
    }
    spec.start = {{start[0], start[1]}, start[2]};
    const auto goal = require<std::vector<double>>(r, "goal");
    if (goal.size() != 2) throw ScenarioError("field 'goal' must be [x, y]");
    spec.goal = {goal[0], goal[1]};
    spec.zeta = require<double>(r, "zeta");
    if (spec.zeta <= 0.0) throw ScenarioError("field 'zeta' must be positive");
    const auto& k = r.contains("kinodynamics") ? r.at("kinodynamics") : json::object();
    spec.kin.v_max = get_or(k, "v_max", 1.5);
    spec.kin.a_max = get_or(k, "a_max", 4.0);
    spec.kin.omega_max = get_or(k, "omega_max", 3.0);
    spec.kin.curvature_max = get_or(k, "curvature_max", 2.0);
    spec.kin.robot_radius = get_or(k, "radius", 0.15);
    sc.robots.push_back(spec);
  }
  for (std::size_t i = 0; i < sc.robots.size(); ++i) {
    for (std::size_t k = i + 1; k < sc.robots.size(); ++k) {
      if (sc.robots[i].id == sc.robots[k].id) {
        throw ScenarioError("field 'robots': duplicate id " +
                            std::to_string(sc.robots[i].id));
      }
    }
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ScenarioError("cannot open scenario file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str(),
                        std::filesystem::path(path).parent_path().string());
}

}  // namespace socnav
