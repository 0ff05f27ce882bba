#include "crossflow/sim.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>
#include <stdexcept>

#include "crossflow/baselines.hpp"
#include "crossflow/io.hpp"
#include "crossflow/solver.hpp"
#include "rng_util.hpp"

namespace crossflow {

const char* to_string(Strategy strategy) {
  return strategy == Strategy::kDp ? "dp" : "fifo";
}

std::array<std::vector<Arrival>, kNumLanes> generate_arrivals(const SimConfig& config) {
  if (config.lambda <= 0.0 || config.duration <= 0.0)
    throw std::invalid_argument("generate_arrivals: lambda and duration must be positive");
  std::array<std::vector<Arrival>, kNumLanes> streams;
  std::mt19937_64 engine(config.seed);
  const double mean_headway = 3600.0 / config.lambda;
  for (int lane = 1; lane <= kNumLanes; ++lane) {
    auto& stream = streams[lane - 1];
    double t = 0.0;
    while (true) {
      t += rng::exponential(engine, mean_headway);
      if (t > config.duration) break;
      Arrival a;
      a.time = t;
      a.intention = rng::uniform01(engine) < config.straight_fraction ? Intention::kStraight
                                                                      : Intention::kLeft;
      stream.push_back(a);
    }
  }
  return streams;
}

namespace {

// Frontier budget for in-loop replans. Width 8 keeps a replan in the
// low-millisecond range on the backlogs heavy arrival rates build up, while
// the incumbent bound plus FIFO fallback keeps every plan at least as good
// as FIFO's.
constexpr SolveOptions kReplanOptions{.max_width = 8, .use_incumbent_bound = true};

// Replan state-table budget: the nearest vehicles per lane are ordered by the
// solver, the rest greedily. Ordering only pays off near the entrance, and the
// tail is reordered again on every later replan anyway.
constexpr int kReplanHorizon = 5;

// Vehicles ahead of schedule park this far outside the commit line.
constexpr double kCommitHoldMargin = 1.0;  // meters

// Receding-horizon plan over one replan instance: exact-ordering effort goes
// to the per-lane head, the tail is appended in arrival order with the same
// earliest-feasible rule, and whole-instance FIFO stands in if it is better.
// A reordered plan is adopted only if its k-th earliest assignment is no
// later than arrival order's k-th for every k, and earlier for some k. Plain
// makespan comparison can trade one vehicle's delay for another's gain, and a
// run's throughput cutoff must never lose that trade; sorted dominance keeps
// the cumulative served-by-t curve at or above FIFO's at every t.
bool serves_no_later(const Schedule& plan, const Schedule& fifo) {
  std::vector<double> a, b;
  a.reserve(plan.assignments.size());
  b.reserve(fifo.assignments.size());
  for (const Assignment& x : plan.assignments) a.push_back(x.t_assign);
  for (const Assignment& x : fifo.assignments) b.push_back(x.t_assign);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strict = true;
  }
  return strict;
}

Schedule plan_with_horizon(const Instance& inst) {
  Schedule fifo = fifo_schedule(inst);

  bool within = true;
  for (int lane = 1; lane <= kNumLanes; ++lane)
    if (inst.lane_count(lane) > kReplanHorizon) within = false;
  if (within) {
    Schedule plan = solve_traced(inst, kReplanOptions, nullptr, nullptr);
    return serves_no_later(plan, fifo) ? plan : fifo;
  }

  Instance head;
  head.safety = inst.safety;
  head.kinematics = inst.kinematics;
  std::vector<const Vehicle*> tail;
  for (int lane = 1; lane <= kNumLanes; ++lane) {
    const auto& src = inst.lanes[lane - 1];
    const auto keep = std::min<std::size_t>(kReplanHorizon, src.size());
    head.lanes[lane - 1].assign(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(keep));
    for (std::size_t i = keep; i < src.size(); ++i) tail.push_back(&src[i]);
  }
  std::sort(tail.begin(), tail.end(),
            [](const Vehicle* a, const Vehicle* b) { return a->id < b->id; });

  Schedule plan = solve_traced(head, kReplanOptions, nullptr, nullptr);

  // Latest assigned time per (lane, intention); the earliest feasible slot for
  // an appended vehicle clears same-lane gaps by delta_t1 and cross-conflict
  // gaps by delta_t2 against these maxima.
  std::array<double, 2 * kNumLanes> last;
  last.fill(-std::numeric_limits<double>::infinity());
  const auto bump = [&last](int lane, Intention intention, double t) {
    double& cell = last[(lane - 1) * 2 + static_cast<int>(intention)];
    cell = std::max(cell, t);
  };
  for (const Assignment& a : plan.assignments)
    bump(a.lane, head.vehicle_at(a.lane, a.slot).intention, a.t_assign);

  std::vector<Assignment> combined = plan.assignments;
  combined.reserve(combined.size() + tail.size());
  for (const Vehicle* v : tail) {
    double t = v->t_min;
    for (int lane = 1; lane <= kNumLanes; ++lane) {
      for (Intention intention : {Intention::kStraight, Intention::kLeft}) {
        const double prev = last[(lane - 1) * 2 + static_cast<int>(intention)];
        if (prev == -std::numeric_limits<double>::infinity()) continue;
        switch (conflict_kind(v->lane, v->intention, lane, intention)) {
          case ConflictKind::kSameLaneRearEnd:
            t = std::max(t, prev + inst.safety.delta_t1);
            break;
          case ConflictKind::kCrossConflict:
            t = std::max(t, prev + inst.safety.delta_t2);
            break;
          case ConflictKind::kConflictFree:
            break;
        }
      }
    }
    combined.push_back({v->id, v->lane, v->slot, t});
    bump(v->lane, v->intention, t);
  }

  Schedule full = make_schedule(std::move(combined));
  return serves_no_later(full, fifo) ? full : fifo;
}

enum class Phase { kApproaching, kCommitted, kInConflictArea, kDeparted };

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::kApproaching: return "approaching";
    case Phase::kCommitted: return "committed";
    case Phase::kInConflictArea: return "in_conflict_area";
    case Phase::kDeparted: return "departed";
  }
  return "unknown";
}

struct SimVehicle {
  int id = 0;
  int lane = 0;
  Intention intention = Intention::kStraight;
  Phase phase = Phase::kApproaching;
  double distance = 0.0;  // meters to the conflict-area entrance
  double speed = 0.0;
  double t_assign = 0.0;
  double spawn_time = 0.0;
  double entry_time = 0.0;  // set on conflict-area entry
  bool deferred = false;    // spawn was delayed by entrance occupancy
};

struct EntryRecord {
  double time;
  int lane;
  Intention intention;
};

class Simulation {
 public:
  explicit Simulation(const SimConfig& config) : config_(config) {
    if (config.dt <= 0.0) throw std::invalid_argument("run_simulation: dt must be positive");
    if (config.straight_fraction < 0.0 || config.straight_fraction > 1.0)
      throw std::invalid_argument("run_simulation: straight_fraction outside [0, 1]");
    if (const char* trace = std::getenv("CROSSFLOW_SIM_TRACE")) trace_id_ = std::atoi(trace);
    // Vehicles closer than this keep their assigned time through replans:
    // too near the entrance to swap order safely.
    commit_distance_ = 2.0 * config.safety.delta_t2 * config.kinematics.v_max;
    // Full-throttle time from rest just outside the commit line to the
    // entrance: the latest a held vehicle can launch and still be on time.
    hold_restart_time_ =
        min_arrival_time(commit_distance_ + kCommitHoldMargin, 0.0, config.kinematics);
    log_ << "# crossflow sim log v1\n";
    log_ << "time,event,id,lane,phase,t_assign\n";
  }

  SimResult run() {
    auto streams = generate_arrivals(config_);
    std::array<std::size_t, kNumLanes> next_arrival{};
    const long steps = static_cast<long>(config_.duration / config_.dt) + 1;
    for (long step = 0; step <= steps; ++step) {
      now_ = static_cast<double>(step) * config_.dt;
      if (now_ > config_.duration + config_.dt) break;
      bool spawned_any = false;
      for (int lane = 1; lane <= kNumLanes; ++lane) {
        auto& queue_pos = next_arrival[lane - 1];
        const auto& stream = streams[lane - 1];
        while (queue_pos < stream.size() && stream[queue_pos].time <= now_) {
          if (!entrance_clear(lane)) {
            // Entrance occupied: the arrival waits outside; retry next step.
            auto& pending = pending_flags_[lane - 1];
            if (queue_pos >= pending.size()) pending.resize(queue_pos + 1, false);
            if (!pending[queue_pos]) {
              pending[queue_pos] = true;
              ++metrics_.deferred_spawns;
            }
            break;
          }
          spawn(lane, stream[queue_pos]);
          spawned_any = true;
          ++queue_pos;
        }
      }
      if (spawned_any) replan();
      advance_step();
    }
    finish_metrics();
    SimResult result;
    result.metrics = std::move(metrics_);
    result.log_csv = log_.str();
    return result;
  }

 private:
  bool entrance_clear(int lane) const {
    // The newest vehicle in the lane must have advanced at least one
    // rear-end envelope from the boundary before another may spawn.
    for (auto it = vehicles_.rbegin(); it != vehicles_.rend(); ++it) {
      const SimVehicle& v = *it;
      if (v.lane != lane || v.phase == Phase::kDeparted || v.phase == Phase::kInConflictArea)
        continue;
      const double traveled = config_.kinematics.control_length - v.distance;
      return traveled >= config_.safety.delta_t1 * config_.kinematics.v_max;
    }
    return true;
  }

  void spawn(int lane, const Arrival& arrival) {
    SimVehicle v;
    v.id = ++spawn_counter_;
    v.lane = lane;
    v.intention = arrival.intention;
    v.phase = Phase::kApproaching;
    v.distance = config_.kinematics.control_length;
    v.speed = config_.kinematics.v_max;
    v.spawn_time = now_;
    v.t_assign = now_ + min_arrival_time(v.distance, v.speed, config_.kinematics);
    vehicles_.push_back(v);
    ++metrics_.spawned;
    log_event("spawn", v);
  }

  // Rebuilds an instance from every approaching vehicle and reassigns times.
  // Committed and entered vehicles keep theirs and act as fixed lower bounds.
  void replan() {
    ++metrics_.replans;
    const auto wall_start = std::chrono::steady_clock::now();

    struct Fixed {
      double time;
      int lane;
      Intention intention;
    };
    std::vector<Fixed> fixed;
    std::vector<SimVehicle*> planned;
    for (SimVehicle& v : vehicles_) {
      switch (v.phase) {
        case Phase::kApproaching:
          planned.push_back(&v);
          break;
        case Phase::kCommitted:
          fixed.push_back({v.t_assign, v.lane, v.intention});
          break;
        case Phase::kInConflictArea:
          fixed.push_back({v.entry_time, v.lane, v.intention});
          break;
        case Phase::kDeparted:
          break;
      }
    }
    if (planned.empty()) return;

    // Lane queues by distance; spawn order breaks (unlikely) exact ties.
    std::stable_sort(planned.begin(), planned.end(), [](const SimVehicle* a, const SimVehicle* b) {
      if (a->lane != b->lane) return a->lane < b->lane;
      return a->distance < b->distance;
    });

    Instance inst;
    inst.safety = config_.safety;
    inst.kinematics = config_.kinematics;
    for (SimVehicle* v : planned) {
      Vehicle model;
      model.id = v->id;
      model.lane = v->lane;
      model.slot = static_cast<int>(inst.lanes[v->lane - 1].size()) + 1;
      model.intention = v->intention;
      model.distance_to_conflict = v->distance;
      model.speed = v->speed;
      model.t_min = now_ + min_arrival_time(v->distance, v->speed, config_.kinematics);
      // Frozen vehicles impose their gaps as floors; the solver then only
      // needs to order the approaching set.
      for (const Fixed& f : fixed) {
        switch (conflict_kind(model.lane, model.intention, f.lane, f.intention)) {
          case ConflictKind::kSameLaneRearEnd:
            model.t_min = std::max(model.t_min, f.time + config_.safety.delta_t1);
            break;
          case ConflictKind::kCrossConflict:
            model.t_min = std::max(model.t_min, f.time + config_.safety.delta_t2);
            break;
          case ConflictKind::kConflictFree:
            break;
        }
      }
      inst.lanes[v->lane - 1].push_back(model);
    }
    // Different intentions can pick up different cross floors; restore
    // per-lane monotonicity. Followers pass behind their leaders anyway, so
    // raising a follower's bound to its leader's never cuts a solution off.
    for (auto& lane : inst.lanes)
      for (std::size_t i = 1; i < lane.size(); ++i)
        lane[i].t_min = std::max(lane[i].t_min, lane[i - 1].t_min);

    // Replans run against the clock, so the dp strategy trades certified
    // optimality for a bounded frontier and horizon; FIFO comparison inside
    // the planner keeps every plan at least as good as FIFO's.
    const Schedule schedule =
        config_.strategy == Strategy::kDp ? plan_with_horizon(inst) : fifo_schedule(inst);

    for (SimVehicle* v : planned) {
      const double assigned = schedule.time_of(v->id);
      v->t_assign = assigned;
      // Audit the floor seeding: a fresh assignment must still clear every
      // frozen vehicle's promised gap, or the frozen promise is broken.
      for (const Fixed& f : fixed) {
        double required = 0.0;
        switch (conflict_kind(v->lane, v->intention, f.lane, f.intention)) {
          case ConflictKind::kSameLaneRearEnd:
            required = f.time + config_.safety.delta_t1;
            break;
          case ConflictKind::kCrossConflict:
            required = f.time + config_.safety.delta_t2;
            break;
          case ConflictKind::kConflictFree:
            continue;
        }
        if (assigned < required - 1e-9) ++metrics_.commit_violations;
      }
    }
    log_ << format_double(now_) << ",replan,,,," << "\n";

    const auto wall_end = std::chrono::steady_clock::now();
    metrics_.replan_millis.push_back(
        std::chrono::duration<double, std::milli>(wall_end - wall_start).count());
  }

  // One controller step for every moving vehicle, then phase updates.
  void advance_step() {
    const double dt = config_.dt;
    const KinematicParams& kin = config_.kinematics;
    // Per-lane distance of the nearest live leader ahead, updated in spawn
    // order (earlier spawn in a lane is always ahead).
    std::array<double, kNumLanes> leader_distance;
    leader_distance.fill(-1.0);

    for (SimVehicle& v : vehicles_) {
      if (v.phase == Phase::kDeparted) continue;
      if (v.phase == Phase::kInConflictArea) {
        if (now_ >= v.entry_time + config_.safety.delta_t2) {
          v.phase = Phase::kDeparted;
          log_event("depart", v);
        }
        continue;
      }

      const double remaining = v.t_assign - now_;
      double accel;
      if (remaining <= dt) {
        accel = kin.a_max;  // due (or overdue): full authority
      } else if (now_ + min_arrival_time(v.distance, v.speed, kin) >= v.t_assign - dt) {
        // No slack left: only the earliest-arrival profile (full acceleration,
        // then cruise) still makes the assigned time. The constant-accel plan
        // below would promise terminal speeds beyond v_max and fall short.
        accel = kin.a_max;
      } else {
        // Constant-acceleration plan hitting distance 0 exactly on time.
        accel = 2.0 * (v.distance - v.speed * remaining) / (remaining * remaining);
      }
      accel = std::clamp(accel, kin.a_min, kin.a_max);
      const double plan_speed = std::clamp(v.speed + accel * dt, kin.v_min, kin.v_max);
      double speed = plan_speed;
      // Hold back: never cross the entrance ahead of the assigned time.
      if (remaining > dt && speed > 0.0) {
        speed = std::min(speed, v.distance / remaining);
      }
      // Stop-line pacing: glide so the commit line is reached no sooner than
      // the launch moment (assigned time minus a full-throttle restart from
      // the line); past it the vehicle runs free. Slack thus waits outside the
      // commit zone where assignments stay replannable, and the frozen
      // commitments the replanner must floor are always nearly due. Vehicles
      // without a restart's worth of slack are never paced.
      if (v.phase == Phase::kApproaching) {
        const double launch = v.t_assign - hold_restart_time_ - dt;
        if (now_ < launch) {
          const double to_line = v.distance - (commit_distance_ + kCommitHoldMargin);
          speed = std::min(speed, std::max(0.0, to_line / (launch - now_)));
        }
      }
      // Rear-end envelope against the leader still under control.
      const double lead = leader_distance[v.lane - 1];
      if (lead >= 0.0) {
        const double gap = v.distance - lead;
        speed = std::min(speed, std::max(0.0, gap / config_.safety.delta_t1));
      }
      speed = std::clamp(speed, kin.v_min, kin.v_max);
      if (trace_id_ != 0 && v.id == trace_id_) {
        std::fprintf(stderr, "t=%.2f id=%d d=%.3f v=%.3f T=%.3f plan=%.3f lead=%.3f speed=%.3f\n",
                     now_, v.id, v.distance, v.speed, remaining, plan_speed, lead, speed);
      }

      const double moved = speed * dt;
      if (moved >= v.distance && remaining <= dt) {
        // Crosses the entrance this step; interpolate the crossing moment.
        const double fraction = moved > 0.0 ? v.distance / moved : 0.0;
        v.entry_time = now_ + fraction * dt;
        v.distance = 0.0;
        v.speed = speed;
        enter_conflict_area(v);
        continue;
      }
      // While early, the hold-back cap keeps distance positive.
      v.distance = std::max(0.0, v.distance - moved);
      v.speed = speed;
      leader_distance[v.lane - 1] = v.distance;

      if (v.phase == Phase::kApproaching && v.distance <= commit_distance_) {
        v.phase = Phase::kCommitted;
        log_event("commit", v);
      }
    }
  }

  void enter_conflict_area(SimVehicle& v) {
    v.phase = Phase::kInConflictArea;
    log_event("enter", v, v.entry_time);
    // Audit the entry against every earlier one; one step of slack absorbs
    // controller discretization.
    const double tolerance = config_.dt;
    for (const EntryRecord& e : entries_) {
      switch (conflict_kind(v.lane, v.intention, e.lane, e.intention)) {
        case ConflictKind::kSameLaneRearEnd:
          if (v.entry_time - e.time < config_.safety.delta_t1 - tolerance)
            ++metrics_.violations;
          break;
        case ConflictKind::kCrossConflict:
          if (v.entry_time - e.time < config_.safety.delta_t2 - tolerance)
            ++metrics_.violations;
          break;
        case ConflictKind::kConflictFree:
          break;
      }
    }
    entries_.push_back({v.entry_time, v.lane, v.intention});
    if (v.entry_time <= config_.duration) {
      ++metrics_.throughput;
      total_delay_ += v.entry_time - v.spawn_time -
                      config_.kinematics.control_length / config_.kinematics.v_max;
    }
  }

  void finish_metrics() {
    if (metrics_.throughput > 0) metrics_.mean_delay = total_delay_ / metrics_.throughput;
  }

  void log_event(const char* event, const SimVehicle& v) { log_event(event, v, now_); }

  void log_event(const char* event, const SimVehicle& v, double time) {
    log_ << format_double(time) << "," << event << "," << v.id << "," << v.lane << ","
         << to_string(v.phase) << "," << format_double(v.t_assign) << "\n";
  }

  SimConfig config_;
  double commit_distance_ = 0.0;
  double hold_restart_time_ = 0.0;
  int trace_id_ = 0;
  double now_ = 0.0;
  int spawn_counter_ = 0;
  double total_delay_ = 0.0;
  std::vector<SimVehicle> vehicles_;
  std::vector<EntryRecord> entries_;
  std::array<std::vector<bool>, kNumLanes> pending_flags_;
  SimMetrics metrics_;
  std::ostringstream log_;
};

}  // namespace

SimResult run_simulation(const SimConfig& config) { return Simulation(config).run(); }

std::string metrics_to_json(const SimConfig& config, const SimMetrics& metrics) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"strategy\": \"" << to_string(config.strategy) << "\",\n";
  os << "  \"lambda\": " << format_double(config.lambda) << ",\n";
  os << "  \"duration\": " << format_double(config.duration) << ",\n";
  os << "  \"seed\": " << config.seed << ",\n";
  os << "  \"straight_fraction\": " << format_double(config.straight_fraction) << ",\n";
  os << "  \"throughput\": " << metrics.throughput << ",\n";
  os << "  \"spawned\": " << metrics.spawned << ",\n";
  os << "  \"deferred_spawns\": " << metrics.deferred_spawns << ",\n";
  os << "  \"replans\": " << metrics.replans << ",\n";
  os << "  \"mean_delay\": " << format_double(metrics.mean_delay) << ",\n";
  os << "  \"violations\": " << metrics.violations << ",\n";
  os << "  \"commit_violations\": " << metrics.commit_violations << "\n";
  os << "}\n";
  return os.str();
}

std::string timings_to_json(const SimMetrics& metrics) {
  double total = 0.0;
  double worst = 0.0;
  for (double ms : metrics.replan_millis) {
    total += ms;
    worst = std::max(worst, ms);
  }
  const double mean = metrics.replan_millis.empty()
                          ? 0.0
                          : total / static_cast<double>(metrics.replan_millis.size());
  std::ostringstream os;
  os << "{\n";
  os << "  \"replans\": " << metrics.replan_millis.size() << ",\n";
  os << "  \"mean_replan_ms\": " << format_double(mean) << ",\n";
  os << "  \"max_replan_ms\": " << format_double(worst) << "\n";
  os << "}\n";
  return os.str();
}

}  // namespace crossflow
