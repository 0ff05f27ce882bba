// Command-line front end over the C API: solve scenarios, compare strategies,
// verify state/transition counts, simulate continuous traffic, and benchmark
// scaling. Exit codes: 0 success, 1 runtime failure, 2 input error.
#include <array>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "crossflow/capi.h"

namespace {

// Prints the library's diagnostic and maps the status onto the exit-code
// contract: internal faults are runtime failures, everything else is the
// caller's input.
int status_exit_code(cf_status status) {
  if (status == CF_OK) return 0;
  std::cerr << "error: " << cf_last_error_message() << "\n";
  return status == CF_ERROR_INTERNAL ? 1 : 2;
}

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

bool read_text(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  out = buffer.str();
  return true;
}

// Returns 0 or the runtime-failure exit code; creates the directory eagerly.
int write_output(const std::string& dir, const std::string& name, const std::string& content) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::cerr << "error: cannot create output directory " << dir << ": " << ec.message() << "\n";
    return 1;
  }
  const auto path = std::filesystem::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.flush();
  if (!out) {
    std::cerr << "error: cannot write " << path.string() << "\n";
    return 1;
  }
  return 0;
}

// Owns a string returned by the library.
struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { cf_string_free(ptr); }
  OwnedString() = default;
  OwnedString(const OwnedString&) = delete;
  OwnedString& operator=(const OwnedString&) = delete;
};

struct OwnedInstance {
  cf_instance* ptr = nullptr;
  ~OwnedInstance() { cf_instance_free(ptr); }
};

struct OwnedSchedule {
  cf_schedule* ptr = nullptr;
  ~OwnedSchedule() { cf_schedule_free(ptr); }
};

double millis_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

int cmd_solve(const std::string& scenario, const std::string& strategy,
              const std::string& out_dir) {
  std::string text;
  if (!read_text(scenario, text)) {
    std::cerr << "error: cannot read scenario file " << scenario << "\n";
    return 2;
  }
  OwnedInstance inst;
  if (int code = status_exit_code(cf_instance_from_json(text.c_str(), &inst.ptr))) return code;

  OwnedSchedule schedule;
  const auto start = std::chrono::steady_clock::now();
  const cf_status solved = cf_solve(inst.ptr, strategy.c_str(), &schedule.ptr);
  const double solve_millis = millis_since(start);
  if (int code = status_exit_code(solved)) return code;

  int violations = 0;
  if (int code =
          status_exit_code(cf_schedule_validate(schedule.ptr, inst.ptr, &violations, nullptr)))
    return code;
  if (violations != 0) {
    std::cerr << "error: solver produced a schedule with " << violations
              << " constraint violation(s)\n";
    return 1;
  }

  double makespan = 0.0;
  if (int code = status_exit_code(cf_schedule_makespan(schedule.ptr, &makespan))) return code;
  std::cout << "makespan " << format_double(makespan) << "\n";
  std::cout << "solve_millis " << format_double(solve_millis) << "\n";

  if (!out_dir.empty()) {
    OwnedString json, csv;
    if (int code = status_exit_code(cf_schedule_to_json(schedule.ptr, &json.ptr))) return code;
    if (int code = status_exit_code(cf_schedule_to_csv(schedule.ptr, &csv.ptr))) return code;
    if (int code = write_output(out_dir, "schedule.json", json.ptr)) return code;
    if (int code = write_output(out_dir, "schedule.csv", csv.ptr)) return code;
  }
  return 0;
}

int cmd_compare(int n_min, int n_max, int seeds, std::uint64_t seed_base, int enum_cap,
                double straight_fraction, const std::string& out_dir) {
  std::ostringstream spec;
  spec << "{\"n_min\":" << n_min << ",\"n_max\":" << n_max << ",\"seeds\":" << seeds
       << ",\"seed_base\":" << seed_base << ",\"enum_cap\":" << enum_cap
       << ",\"straight_fraction\":" << format_double(straight_fraction) << "}";
  OwnedString csv, timings;
  if (int code = status_exit_code(cf_compare(spec.str().c_str(), &csv.ptr, &timings.ptr)))
    return code;
  std::cout << csv.ptr;
  if (!out_dir.empty()) {
    if (int code = write_output(out_dir, "compare.csv", csv.ptr)) return code;
    if (int code = write_output(out_dir, "compare_timings.csv", timings.ptr)) return code;
  }
  return 0;
}

int cmd_verify_counts(const std::vector<int>& per_lane_arg, int max_per_lane,
                      const std::string& config, const std::string& out_dir) {
  std::vector<std::array<int, 4>> sweeps;
  if (max_per_lane > 0) {
    for (int m = 1; m <= max_per_lane; ++m) sweeps.push_back({m, m, m, m});
  } else if (per_lane_arg.size() == 1) {
    const int m = per_lane_arg[0];
    sweeps.push_back({m, m, m, m});
  } else if (per_lane_arg.size() == 4) {
    sweeps.push_back({per_lane_arg[0], per_lane_arg[1], per_lane_arg[2], per_lane_arg[3]});
  } else {
    std::cerr << "error: --per-lane takes one uniform size or four lane sizes\n";
    return 2;
  }

  std::string combined;
  for (const auto& sizes : sweeps) {
    OwnedString csv;
    if (int code = status_exit_code(cf_verify_counts(sizes.data(), config.c_str(), &csv.ptr)))
      return code;
    std::string text = csv.ptr;
    if (combined.empty()) {
      combined = text;
    } else {
      // Keep the first report's header; append only data rows.
      std::istringstream lines(text);
      std::string line;
      while (std::getline(lines, line))
        if (!line.empty() && line[0] != '#' && line.rfind("n1,", 0) != 0) combined += line + "\n";
    }
  }
  std::cout << combined;
  if (!out_dir.empty())
    if (int code = write_output(out_dir, "counts.csv", combined)) return code;
  return 0;
}

int cmd_simulate(const std::string& config_file, double lambda, double duration,
                 std::uint64_t seed, int seed_count, const std::string& strategy,
                 double straight_fraction, const std::string& out_dir) {
  std::vector<std::string> configs;
  std::vector<std::string> suffixes;
  if (!config_file.empty()) {
    std::string text;
    if (!read_text(config_file, text)) {
      std::cerr << "error: cannot read config file " << config_file << "\n";
      return 2;
    }
    configs.push_back(text);
    suffixes.emplace_back();
  } else {
    for (int k = 0; k < seed_count; ++k) {
      const std::uint64_t run_seed = seed + static_cast<std::uint64_t>(k);
      std::ostringstream os;
      os << "{\"lambda\":" << format_double(lambda) << ",\"duration\":" << format_double(duration)
         << ",\"seed\":" << run_seed << ",\"strategy\":\"" << strategy
         << "\",\"straight_fraction\":" << format_double(straight_fraction) << "}";
      configs.push_back(os.str());
      suffixes.push_back(seed_count > 1 ? "_seed" + std::to_string(run_seed) : std::string());
    }
  }

  for (std::size_t run = 0; run < configs.size(); ++run) {
    OwnedString metrics, log, timings;
    if (int code = status_exit_code(
            cf_simulate(configs[run].c_str(), &metrics.ptr, &log.ptr, &timings.ptr)))
      return code;
    std::cout << metrics.ptr;
    if (!out_dir.empty()) {
      const std::string& sfx = suffixes[run];
      if (int code = write_output(out_dir, "metrics" + sfx + ".json", metrics.ptr)) return code;
      if (int code = write_output(out_dir, "log" + sfx + ".csv", log.ptr)) return code;
      if (int code = write_output(out_dir, "timings" + sfx + ".json", timings.ptr)) return code;
    }
  }
  return 0;
}

int cmd_bench(const std::vector<int>& totals, int reps, const std::string& out_dir) {
  std::ostringstream spec;
  spec << "{\"totals\":[";
  for (std::size_t i = 0; i < totals.size(); ++i) {
    if (i > 0) spec << ",";
    spec << totals[i];
  }
  spec << "],\"reps\":" << reps << "}";
  OwnedString csv;
  if (int code = status_exit_code(cf_bench(spec.str().c_str(), &csv.ptr))) return code;
  std::cout << csv.ptr;
  if (!out_dir.empty())
    if (int code = write_output(out_dir, "bench.csv", csv.ptr)) return code;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crossflow: optimal cooperative scheduling for a signal-free intersection"};
  app.require_subcommand(1);

  // solve
  std::string scenario_path;
  std::string solve_strategy = "dp";
  std::string solve_out;
  auto* solve = app.add_subcommand("solve", "Schedule one scenario file");
  solve->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  solve->add_option("--strategy", solve_strategy, "Scheduling strategy")
      ->check(CLI::IsMember({"dp", "fifo", "enum"}));
  solve->add_option("--out", solve_out, "Directory for schedule.json and schedule.csv");

  // compare
  int n_min = 5, n_max = 10, seeds = 20, enum_cap = 10;
  std::uint64_t seed_base = 1;
  double compare_straight = 0.5;
  std::string compare_out;
  auto* compare = app.add_subcommand("compare", "Mean makespan per strategy on random instances");
  compare->add_option("--n-min", n_min, "Smallest vehicle count");
  compare->add_option("--n-max", n_max, "Largest vehicle count");
  compare->add_option("--seeds", seeds, "Instances per vehicle count");
  compare->add_option("--seed", seed_base, "Seed base for instance generation");
  compare->add_option("--enum-cap", enum_cap, "Largest count enumerated exhaustively");
  compare->add_option("--straight-fraction", compare_straight, "Probability of going straight");
  compare->add_option("--out", compare_out, "Directory for compare.csv and compare_timings.csv");

  // verify-counts
  std::vector<int> per_lane;
  int max_per_lane = 0;
  std::string count_config = "all_conflict";
  std::string counts_out;
  auto* verify = app.add_subcommand("verify-counts",
                                    "Compare measured state/transition counts to closed forms");
  verify->add_option("--per-lane", per_lane, "Uniform queue size, or four lane sizes")
      ->expected(1, 4);
  verify->add_option("--max-per-lane", max_per_lane,
                     "Sweep uniform sizes 1..M (alternative to --per-lane)");
  verify->add_option("--config", count_config, "Intention pattern")
      ->check(CLI::IsMember({"all_conflict", "all_straight", "as_given"}));
  verify->add_option("--out", counts_out, "Directory for counts.csv");

  // simulate
  std::string sim_config_file;
  double lambda = 400.0, duration = 600.0, sim_straight = 0.5;
  std::uint64_t sim_seed = 1;
  int sim_seeds = 1;
  std::string sim_strategy = "dp";
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "Continuous Poisson-arrival traffic run");
  simulate->add_option("--config-file", sim_config_file,
                       "Simulation config JSON (overrides the flags below)");
  simulate->add_option("--lambda", lambda, "Arrivals per lane per hour");
  simulate->add_option("--duration", duration, "Simulated seconds");
  simulate->add_option("--seed", sim_seed, "Arrival-stream seed");
  simulate->add_option("--seeds", sim_seeds, "Consecutive seeds to run")->check(CLI::PositiveNumber);
  simulate->add_option("--strategy", sim_strategy, "Replanning strategy")
      ->check(CLI::IsMember({"dp", "fifo"}));
  simulate->add_option("--straight-fraction", sim_straight, "Probability of going straight");
  simulate->add_option("--out", sim_out, "Directory for metrics/log/timings files");

  // bench
  std::vector<int> totals{8, 16, 24, 32, 40};
  int reps = 3;
  std::string bench_out;
  auto* bench = app.add_subcommand("bench", "Scaling measurements over synthetic families");
  bench->add_option("--totals", totals, "Vehicle totals (multiples of 4)");
  bench->add_option("--reps", reps, "Solve repetitions per point (best time kept)");
  bench->add_option("--out", bench_out, "Directory for bench.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (solve->parsed()) return cmd_solve(scenario_path, solve_strategy, solve_out);
  if (compare->parsed())
    return cmd_compare(n_min, n_max, seeds, seed_base, enum_cap, compare_straight, compare_out);
  if (verify->parsed()) {
    if (max_per_lane > 0 && !per_lane.empty()) {
      std::cerr << "error: give either --per-lane or --max-per-lane, not both\n";
      return 2;
    }
    if (max_per_lane <= 0 && per_lane.empty()) {
      std::cerr << "error: one of --per-lane or --max-per-lane is required\n";
      return 2;
    }
    return cmd_verify_counts(per_lane, max_per_lane, count_config, counts_out);
  }
  if (simulate->parsed()) {
    if (!sim_config_file.empty()) {
      if (simulate->count("--lambda") != 0 || simulate->count("--duration") != 0 ||
          simulate->count("--seed") != 0 || simulate->count("--strategy") != 0 ||
          simulate->count("--straight-fraction") != 0 || simulate->count("--seeds") != 0) {
        std::cerr << "error: --config-file cannot be combined with inline config flags\n";
        return 2;
      }
    }
    return cmd_simulate(sim_config_file, lambda, duration, sim_seed, sim_seeds, sim_strategy,
                        sim_straight, sim_out);
  }
  if (bench->parsed()) return cmd_bench(totals, reps, bench_out);
  return 2;
}
