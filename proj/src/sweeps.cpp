// Implements the sweep drivers: seeded strategy comparisons over random
// instances and scaling benchmarks over the synthetic counting families.
#include "crossflow/sweeps.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "crossflow/baselines.hpp"
#include "crossflow/counting.hpp"
#include "crossflow/io.hpp"
#include "crossflow/random_instance.hpp"
#include "crossflow/solver.hpp"

namespace crossflow {

int sweep_thread_cap() {
  const char* env = std::getenv("CROSSFLOW_THREADS");
  if (env == nullptr || *env == '\0') return 4;
  return std::max(1, std::atoi(env));
}

namespace {

// Runs fn(0..count-1) over at most sweep_thread_cap() workers. Units write to
// disjoint slots, so scheduling order never shows in assembled results.
void parallel_for(int count, const std::function<void(int)>& fn) {
  const int workers = std::min(sweep_thread_cap(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([w, workers, count, &fn, &error_mutex, &first_error] {
      for (int i = w; i < count; i += workers) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

double millis_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

struct CompareUnit {
  double dp_makespan = 0.0;
  double dp_millis = 0.0;
  double fifo_makespan = 0.0;
  double fifo_millis = 0.0;
  double enum_makespan = 0.0;
  double enum_millis = 0.0;
  bool has_enum = false;
};

}  // namespace

CompareResult run_compare(const CompareSpec& spec) {
  if (spec.n_min < 0 || spec.n_min > spec.n_max)
    throw std::invalid_argument("run_compare: need 0 <= n_min <= n_max");
  if (spec.seeds < 1) throw std::invalid_argument("run_compare: need at least one seed");
  if (spec.straight_fraction < 0.0 || spec.straight_fraction > 1.0)
    throw std::invalid_argument("run_compare: straight_fraction outside [0, 1]");

  const int sizes = spec.n_max - spec.n_min + 1;
  const int units = sizes * spec.seeds;
  std::vector<CompareUnit> results(static_cast<std::size_t>(units));

  parallel_for(units, [&](int unit) {
    const int n = spec.n_min + unit / spec.seeds;
    const int s = unit % spec.seeds;
    RandomInstanceOptions opts;
    opts.num_vehicles = n;
    opts.straight_fraction = spec.straight_fraction;
    opts.safety = spec.safety;
    opts.kinematics = spec.kinematics;
    // Stable per-(size, seed-index) stream regardless of the sweep bounds.
    const std::uint64_t seed =
        spec.seed_base + static_cast<std::uint64_t>(n) * 1000003ULL + static_cast<std::uint64_t>(s);
    const Instance inst = random_instance(seed, opts);
    CompareUnit& out = results[static_cast<std::size_t>(unit)];

    auto start = std::chrono::steady_clock::now();
    out.dp_makespan = solve(inst).makespan;
    out.dp_millis = millis_since(start);

    start = std::chrono::steady_clock::now();
    out.fifo_makespan = fifo_schedule(inst).makespan;
    out.fifo_millis = millis_since(start);

    if (n <= spec.enum_cap) {
      EnumerationOptions enum_opts;
      enum_opts.cap = spec.enum_cap;
      start = std::chrono::steady_clock::now();
      out.enum_makespan = enumerate_optimal(inst, enum_opts).makespan;
      out.enum_millis = millis_since(start);
      out.has_enum = true;
    }
  });

  CompareResult result;
  result.spec = spec;
  for (int n = spec.n_min; n <= spec.n_max; ++n) {
    const int base = (n - spec.n_min) * spec.seeds;
    double dp_makespan = 0.0, dp_millis = 0.0;
    double fifo_makespan = 0.0, fifo_millis = 0.0;
    double enum_makespan = 0.0, enum_millis = 0.0;
    bool has_enum = true;
    for (int s = 0; s < spec.seeds; ++s) {
      const CompareUnit& unit = results[static_cast<std::size_t>(base + s)];
      dp_makespan += unit.dp_makespan;
      dp_millis += unit.dp_millis;
      fifo_makespan += unit.fifo_makespan;
      fifo_millis += unit.fifo_millis;
      enum_makespan += unit.enum_makespan;
      enum_millis += unit.enum_millis;
      has_enum = has_enum && unit.has_enum;
    }
    const double denom = static_cast<double>(spec.seeds);
    result.rows.push_back({n, "dp", spec.seeds, dp_makespan / denom, dp_millis / denom});
    result.rows.push_back({n, "fifo", spec.seeds, fifo_makespan / denom, fifo_millis / denom});
    if (has_enum)
      result.rows.push_back({n, "enum", spec.seeds, enum_makespan / denom, enum_millis / denom});
  }
  return result;
}

std::string compare_to_csv(const CompareResult& result) {
  std::ostringstream os;
  os << "# crossflow compare v1\n";
  os << "num_vehicles,strategy,seeds,mean_makespan\n";
  for (const CompareRow& row : result.rows) {
    os << row.num_vehicles << "," << row.strategy << "," << row.seeds << ","
       << format_double(row.mean_makespan) << "\n";
  }
  return os.str();
}

std::string compare_timings_to_csv(const CompareResult& result) {
  std::ostringstream os;
  os << "# crossflow compare timings v1\n";
  os << "num_vehicles,strategy,seeds,mean_solve_millis\n";
  for (const CompareRow& row : result.rows) {
    os << row.num_vehicles << "," << row.strategy << "," << row.seeds << ","
       << format_double(row.mean_solve_millis) << "\n";
  }
  return os.str();
}

BenchResult run_bench(const BenchSpec& spec) {
  if (spec.totals.empty()) throw std::invalid_argument("run_bench: no vehicle totals given");
  for (int total : spec.totals)
    if (total <= 0 || total % 4 != 0)
      throw std::invalid_argument("run_bench: totals must be positive multiples of 4");
  if (spec.reps < 1) throw std::invalid_argument("run_bench: need at least one repetition");

  const std::array<CountConfig, 2> configs{CountConfig::kAllConflict, CountConfig::kAllStraight};
  const int units = static_cast<int>(spec.totals.size()) * 2;
  std::vector<BenchRow> rows(static_cast<std::size_t>(units));

  parallel_for(units, [&](int unit) {
    const int total = spec.totals[static_cast<std::size_t>(unit / 2)];
    const CountConfig config = configs[static_cast<std::size_t>(unit % 2)];
    const int per_lane = total / 4;
    const Instance inst = make_count_instance({per_lane, per_lane, per_lane, per_lane}, config);
    const CountSummary counts = instrument_counts(inst);
    double best = std::numeric_limits<double>::infinity();
    for (int rep = 0; rep < spec.reps; ++rep) {
      const auto start = std::chrono::steady_clock::now();
      (void)solve(inst);
      best = std::min(best, millis_since(start));
    }
    rows[static_cast<std::size_t>(unit)] =
        BenchRow{total, to_string(config), counts.num_states, counts.num_transitions, best};
  });

  BenchResult result;
  result.rows = std::move(rows);
  return result;
}

std::string bench_to_csv(const BenchResult& result) {
  std::ostringstream os;
  os << "# crossflow bench v1\n";
  os << "num_vehicles,config,states,transitions,best_solve_millis\n";
  for (const BenchRow& row : result.rows) {
    os << row.num_vehicles << "," << row.config << "," << row.states << "," << row.transitions
       << "," << format_double(row.best_solve_millis) << "\n";
  }
  return os.str();
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("log_log_slope: need two or more paired samples");
  const std::size_t n = x.size();
  double mean_lx = 0.0, mean_ly = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0)
      throw std::invalid_argument("log_log_slope: samples must be positive");
    mean_lx += std::log(x[i]);
    mean_ly += std::log(y[i]);
  }
  mean_lx /= static_cast<double>(n);
  mean_ly /= static_cast<double>(n);
  double cov = 0.0, var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mean_lx;
    cov += dx * (std::log(y[i]) - mean_ly);
    var += dx * dx;
  }
  if (var == 0.0) throw std::invalid_argument("log_log_slope: x samples are all equal");
  return cov / var;
}

}  // namespace crossflow
