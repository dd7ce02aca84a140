#include "socnav/plot.hpp"
#include "socnav/sim.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <numeric>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace socnav;

namespace {

void apply_mode(Scenario& sc, const std::string& mode) {
  if (mode == "auction") {
    sc.scheduling = Scheduling::kAuction;
    sc.controller = Controller::kBilevel;
  } else if (mode == "no-schedule") {
    sc.scheduling = Scheduling::kNone;
    sc.controller = Controller::kBilevel;
  } else if (mode == "alt-scaling") {
    sc.scheduling = Scheduling::kAltScaling;
    sc.controller = Controller::kBilevel;
  } else if (mode == "social-forces") {
    sc.scheduling = Scheduling::kNone;
    sc.controller = Controller::kSocialForces;
  } else {
    throw ScenarioError("unknown mode '" + mode + "'");
  }
}

std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dash = item.find('-');
    if (dash != std::string::npos && dash > 0) {
      const auto lo = std::stoull(item.substr(0, dash));
      const auto hi = std::stoull(item.substr(dash + 1));
      for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    } else if (!item.empty()) {
      seeds.push_back(std::stoull(item));
    }
  }
  return seeds;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
}

std::string metrics_summary(const Scenario& sc, std::uint64_t seed,
                            const EpisodeMetrics& m) {
  std::ostringstream out;
  out << "scenario: " << sc.name << "\n"
      << "seed: " << seed << "\n"
      << "scheduling: " << to_string(sc.scheduling) << "\n"
      << "controller: " << to_string(sc.controller) << "\n"
      << "success: " << (m.success ? "yes" : "no") << "\n"
      << "deadlock: " << (m.deadlock ? "yes" : "no") << "\n"
      << "collisions: " << m.collisions << "\n"
      << "goal_adjacent_collisions: " << m.goal_adjacent_collisions << "\n"
      << "makespan_s: " << m.makespan << "\n";
  if (m.flow_rate) out << "flow_rate: " << *m.flow_rate << "\n";
  for (std::size_t i = 0; i < m.robot_ids.size(); ++i) {
    out << "robot " << m.robot_ids[i] << ": reached="
        << (m.reached_goal[i] ? "yes" : "no") << " t_goal=" << m.goal_times[i]
        << " stop_ticks=" << m.stop_ticks[i]
        << " delta_v=" << m.delta_v_counts[i] << "\n";
  }
  return out.str();
}

int cmd_run(const std::string& scenario_path, std::uint64_t seed,
            const std::string& mode, const std::string& out_dir,
            bool want_plot) {
  Scenario sc = load_scenario(scenario_path);
  if (!mode.empty()) apply_mode(sc, mode);

  const auto result = run_episode(sc, seed);
  fs::create_directories(out_dir);
  const std::string stem = sc.name + "_seed" + std::to_string(seed);
  write_file(fs::path(out_dir) / (stem + ".telemetry.jsonl"),
             result.telemetry);
  write_file(fs::path(out_dir) / (stem + ".metrics.txt"),
             metrics_summary(sc, seed, result.metrics));
  if (want_plot) {
    write_file(fs::path(out_dir) / (stem + ".svg"),
               render_svg(result.telemetry));
  }
  std::cout << metrics_summary(sc, seed, result.metrics);
  return result.metrics.success ? 0 : 1;
}

struct CellStats {
  std::string mode;
  int episodes = 0;
  int successes = 0;
  double collisions = 0.0;
  double stop_ticks = 0.0;
  double delta_v = 0.0;
  double makespan = 0.0;
  double flow_sum = 0.0;
  int flow_count = 0;
};

int cmd_batch(const std::string& scenario_path,
              const std::vector<std::uint64_t>& seeds,
              std::vector<std::string> modes, const std::string& out_dir,
              unsigned jobs) {
  if (seeds.empty()) {
    std::cerr << "error: empty seed list\n";
    return 2;
  }
  if (modes.empty()) modes.push_back("");
  fs::create_directories(out_dir);

  std::vector<CellStats> cells;
  for (const auto& mode : modes) {
    Scenario sc = load_scenario(scenario_path);
    if (!mode.empty()) apply_mode(sc, mode);

    CellStats cell;
    cell.mode = mode.empty()
                    ? to_string(sc.scheduling) + "/" + to_string(sc.controller)
                    : mode;

    // Episodes are independent and internally deterministic; fan out.
    std::vector<std::future<EpisodeResult>> futures;
    std::vector<EpisodeMetrics> results(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      futures.push_back(std::async(
          jobs > 1 ? std::launch::async : std::launch::deferred,
          [&sc, seed = seeds[i]] { return run_episode(sc, seed); }));
    }
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const auto r = futures[i].get();
      results[i] = r.metrics;
      write_file(fs::path(out_dir) / (sc.name + "_" + cell.mode + "_seed" +
                                      std::to_string(seeds[i]) +
                                      ".telemetry.jsonl"),
                 r.telemetry);
    }

    for (const auto& m : results) {
      ++cell.episodes;
      if (m.success) ++cell.successes;
      cell.collisions += m.collisions;
      double st = 0.0, dv = 0.0;
      for (std::size_t r = 0; r < m.robot_ids.size(); ++r) {
        st += m.stop_ticks[r];
        dv += m.delta_v_counts[r];
      }
      cell.stop_ticks += st / m.robot_ids.size();
      cell.delta_v += dv / m.robot_ids.size();
      cell.makespan += m.makespan;
      if (m.flow_rate) {
        cell.flow_sum += *m.flow_rate;
        ++cell.flow_count;
      }
    }
    cells.push_back(cell);
  }

  std::ostringstream table;
  table << "mode           success_rate  coll_rate  stop_time  avg_dv  "
           "makespan_s  flow_rate\n";
  for (const auto& c : cells) {
    const double n = c.episodes;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "%-14s %12.2f %10.2f %10.1f %7.1f %11.2f %10s\n",
                  c.mode.c_str(), c.successes / n, c.collisions / n,
                  c.stop_ticks / n, c.delta_v / n, c.makespan / n,
                  c.flow_count
                      ? std::to_string(c.flow_sum / c.flow_count).c_str()
                      : "-");
    table << buf;
  }
  write_file(fs::path(out_dir) / "summary.txt", table.str());
  std::cout << table.str();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized multi-robot social mini-game simulator"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out", mode, seeds_spec = "1";
  std::uint64_t seed = 1;
  bool no_schedule = false, alt_scaling = false, want_plot = false;
  std::string baseline;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

  auto* run = app.add_subcommand("run", "Run one episode");
  run->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--seed", seed, "Episode seed");
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--no-schedule", no_schedule, "Disable the auction scheduler");
  run->add_flag("--alt-scaling", alt_scaling, "Use the ablation velocity scaling");
  run->add_option("--baseline", baseline, "Baseline controller (social-forces)");
  run->add_flag("--plot", want_plot, "Also emit an SVG trajectory plot");

  std::vector<std::string> batch_modes;
  auto* batch = app.add_subcommand("batch", "Run a seed batch and aggregate");
  batch->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  batch->add_option("--seeds", seeds_spec, "Seed list, e.g. 1-25 or 1,2,7");
  batch->add_option("--mode", batch_modes,
                    "Cell modes: auction, no-schedule, alt-scaling, "
                    "social-forces (repeatable)");
  batch->add_option("--out", out_dir, "Output directory");
  batch->add_option("--jobs", jobs, "Parallel episodes");

  std::string telemetry_path, svg_out = "plot.svg";
  auto* plot = app.add_subcommand("plot", "Render telemetry to SVG");
  plot->add_option("telemetry", telemetry_path, "Telemetry JSONL file")
      ->required();
  plot->add_option("--out", svg_out, "Output SVG path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(run)) {
      if (no_schedule) mode = "no-schedule";
      if (alt_scaling) mode = "alt-scaling";
      if (!baseline.empty()) {
        if (baseline != "social-forces") {
          std::cerr << "error: unknown baseline '" << baseline << "'\n";
          return 2;
        }
        mode = "social-forces";
      }
      return cmd_run(scenario_path, seed, mode, out_dir, want_plot);
    }
    if (app.got_subcommand(batch)) {
      return cmd_batch(scenario_path, parse_seeds(seeds_spec), batch_modes,
                       out_dir, jobs);
    }
    if (app.got_subcommand(plot)) {
      std::ifstream f(telemetry_path, std::ios::binary);
      if (!f) {
        std::cerr << "error: cannot open " << telemetry_path << "\n";
        return 2;
      }
      std::ostringstream ss;
      ss << f.rdbuf();
      write_file(svg_out, render_svg(ss.str()));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
