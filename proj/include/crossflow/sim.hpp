// Replanning traffic simulation: Poisson arrivals per lane, commit-horizon
// rescheduling on every control-area entry, a kinematic tracking controller,
// and safety-audited conflict-area entries.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "crossflow/model.hpp"

namespace crossflow {

enum class Strategy { kDp, kFifo };

const char* to_string(Strategy strategy);

struct SimConfig {
  double lambda = 400.0;    // vehicles per lane per hour
  double duration = 600.0;  // seconds of simulated time
  std::uint64_t seed = 1;
  double straight_fraction = 0.5;
  Strategy strategy = Strategy::kDp;
  SafetyParams safety{};
  KinematicParams kinematics{};
  double dt = 0.1;  // controller step, seconds
};

struct Arrival {
  double time = 0.0;  // when the vehicle reaches the control-area boundary
  Intention intention = Intention::kStraight;
};

// Per-lane Poisson streams: exponential inter-arrival gaps with mean
// 3600/lambda seconds, intentions by straight_fraction, truncated at the
// configured duration. Identical seeds give identical streams.
std::array<std::vector<Arrival>, kNumLanes> generate_arrivals(const SimConfig& config);

struct SimMetrics {
  int throughput = 0;         // conflict-area entries at or before the duration
  int spawned = 0;            // vehicles that entered the control area
  int deferred_spawns = 0;    // arrivals that had to wait for entrance clearance
  int replans = 0;
  double mean_delay = 0.0;    // entry - spawn - control_length / v_max, entered vehicles
  int violations = 0;         // conflict-gap audit failures; must stay 0
  int commit_violations = 0;  // committed times disturbed by a replan; must stay 0
  std::vector<double> replan_millis;  // wall-clock per replan; excluded from metrics JSON
};

struct SimResult {
  SimMetrics metrics;
  std::string log_csv;  // rows: time,event,id,lane,phase,t_assign
};

// Fixed-step event loop: spawns arrivals when the entrance is clear, replans
// all approaching vehicles on every spawn (committed and entered vehicles keep
// their times and act as fixed lower bounds), steers vehicles to their
// assigned times, and audits every conflict-area entry pair against the gap
// rules with one step of tolerance. Identical configs give identical results.
SimResult run_simulation(const SimConfig& config);

// Deterministic summary (config echo plus counts and delays; no timings).
std::string metrics_to_json(const SimConfig& config, const SimMetrics& metrics);

// Wall-clock replan statistics, kept apart so metrics stay reproducible.
std::string timings_to_json(const SimMetrics& metrics);

}  // namespace crossflow
