// Batch drivers behind the comparison and benchmark commands: seeded strategy
// sweeps over random instances and scaling measurements over synthetic
// families. Worker threads (capped by CROSSFLOW_THREADS) fan out per unit;
// results assemble in fixed order so outputs stay deterministic.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crossflow/model.hpp"

namespace crossflow {

struct CompareSpec {
  int n_min = 5;
  int n_max = 10;
  int seeds = 20;
  std::uint64_t seed_base = 1;
  int enum_cap = 10;  // enumeration included only where the count fits the cap
  double straight_fraction = 0.5;
  SafetyParams safety{};
  KinematicParams kinematics{};
};

struct CompareRow {
  int num_vehicles = 0;
  std::string strategy;  // "dp", "fifo", or "enum"
  int seeds = 0;
  double mean_makespan = 0.0;
  double mean_solve_millis = 0.0;  // wall clock; kept out of the main CSV
};

struct CompareResult {
  CompareSpec spec;
  std::vector<CompareRow> rows;
};

CompareResult run_compare(const CompareSpec& spec);

// Deterministic table (count, strategy, seeds, mean makespan).
std::string compare_to_csv(const CompareResult& result);
// Wall-clock companion table, same row order.
std::string compare_timings_to_csv(const CompareResult& result);

struct BenchSpec {
  std::vector<int> totals;  // vehicle totals, each divisible by 4 (equal lanes)
  int reps = 3;             // solve repetitions; best time is reported
};

struct BenchRow {
  int num_vehicles = 0;
  std::string config;  // "all_conflict" or "all_straight"
  std::uint64_t states = 0;
  std::uint64_t transitions = 0;
  double best_solve_millis = 0.0;
};

struct BenchResult {
  std::vector<BenchRow> rows;
};

// Counts and times the solver over both synthetic families at each total.
BenchResult run_bench(const BenchSpec& spec);

// Counts are deterministic; the timing column is wall clock.
std::string bench_to_csv(const BenchResult& result);

// Least-squares slope of log(y) against log(x); the scaling checks feed it
// measured transition counts versus vehicle totals.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

// Worker cap for sweep fan-out: CROSSFLOW_THREADS when set (minimum 1),
// otherwise 4.
int sweep_thread_cap();

}  // namespace crossflow
