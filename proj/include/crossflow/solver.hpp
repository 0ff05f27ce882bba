// Polynomial-time scheduler: a stage-ordered dynamic program over per-lane
// assignment counts with right-of-way bookkeeping. Group transitions admit
// one lane-run plus a same-intention run from the opposite lane; arrival
// times advance an eight-component (lane, intention) frontier whose maximum
// is the makespan accumulated so far.
#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <vector>

#include "crossflow/model.hpp"
#include "crossflow/schedule.hpp"

namespace crossflow {

struct StateKey {
  std::array<int, kNumLanes> counts{};  // vehicles assigned so far, per lane
  int right_of_way = 0;  // lane of the latest group; 0 only when all counts are 0

  int total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
  bool is_initial() const { return right_of_way == 0; }
  friend bool operator==(const StateKey&, const StateKey&) = default;
};

// Slots [first, first + count) of one lane; count == 0 marks an absent queue.
struct SlotRange {
  int lane = 0;
  int first = 1;
  int count = 0;
};

// Vehicles granted the right of way in one transition: a contiguous run in
// the successor's right-of-way lane plus an optional same-intention run in
// the opposite lane. Members are pairwise rear-end or conflict-free only.
struct TransitionGroup {
  SlotRange lane_r;   // run ending at the successor's count in its lane; count >= 1
  SlotRange lane_ro;  // run ending at the opposite lane's count; may be empty

  int size() const { return lane_r.count + lane_ro.count; }
};

struct Transition {
  StateKey pred;  // right_of_way == 0 marks the initial state
  TransitionGroup group;
};

// All predecessor transitions of a non-initial state, in deterministic order
// (predecessor lane id, then group size, then lane-run length). Single-vehicle
// transitions connect to every predecessor lane except an opposite lane whose
// latest vehicle shares the new vehicle's intention (those edges are
// non-conflicting and are replaced by group transitions). Group transitions
// pair j vehicles from the state's lane with k >= 1 from the opposite lane,
// all sharing one intention; the predecessor may keep the same lane only when
// j exhausts the intention run (symmetrically for the opposite lane), and may
// be either perpendicular lane freely. An all-zero predecessor is the initial
// state, emitted once. Throws std::invalid_argument for the initial state.
std::vector<Transition> enumerate_predecessors(const StateKey& s, const Instance& inst);

inline constexpr double kNoArrival = -std::numeric_limits<double>::infinity();

// Last assigned arrival time per (lane, intention) class; kNoArrival when the
// class is empty. Within a lane, times grow with slot, so each component is
// also the class maximum and the overall maximum is the makespan so far.
struct ArrivalFrontier {
  std::array<double, 2 * kNumLanes> last{};

  static ArrivalFrontier none() {
    ArrivalFrontier f;
    f.last.fill(kNoArrival);
    return f;
  }
  static int index(int lane, Intention intention) {
    return (lane - 1) * 2 + static_cast<int>(intention);
  }
  double at(int lane, Intention intention) const { return last[index(lane, intention)]; }
  void set(int lane, Intention intention, double t) { last[index(lane, intention)] = t; }
  // Makespan accumulated so far; 0 when nothing is assigned yet.
  double objective() const;
  // Componentwise <=: this frontier never forces a later time than `other`.
  bool dominates(const ArrivalFrontier& other) const;
  friend bool operator==(const ArrivalFrontier&, const ArrivalFrontier&) = default;
};

struct GroupTimes {
  std::vector<double> lane_r_times;   // per lane_r member, slot ascending
  std::vector<double> lane_ro_times;  // per lane_ro member, slot ascending
  ArrivalFrontier frontier;           // predecessor frontier advanced by the group
  double objective = 0.0;             // frontier.objective() after the update
};

// Earliest feasible times for the group's members given everything assigned
// before it. Each queue head takes the max of its t_min, the latest same-lane
// time + delta_t1, and the latest conflicting cross-lane time + delta_t2
// (perpendicular classes always conflict; the opposite lane only with the
// other intention). Followers take max(t_min, previous member + delta_t1).
// Empty frontier components drop out, so groups leaving the initial state
// start at their t_min.
GroupTimes assign_group_times(const TransitionGroup& group, const ArrivalFrontier& pred,
                              const Instance& inst);

// One backtracked step of the optimal path, in assignment order.
struct PathStep {
  StateKey state;
  StateKey pred;
  TransitionGroup group;
  GroupTimes times;  // recomputed from the predecessor's frontier
};

struct SolveStats {
  std::uint64_t num_states = 0;       // valid states, including the initial one
  std::uint64_t num_transitions = 0;  // group edges counted once per twin pair
  std::uint64_t raw_edges = 0;        // every enumerated (pred, group) edge
  std::uint64_t max_candidates = 0;   // largest per-state nondominated set
  std::uint64_t pruned_candidates = 0;  // dropped: worse than the FIFO incumbent
  bool width_capped = false;            // a nondominated set hit max_width
  bool used_fifo_fallback = false;      // capped search lost every path; FIFO returned
};

struct SolveOptions {
  // Largest nondominated set kept per state; 0 keeps everything (exact).
  // A positive cap bounds work per state and keeps schedules feasible and
  // deterministic, but the returned makespan is only an upper bound on the
  // optimum (never above FIFO's).
  std::uint64_t max_width = 0;
  // Drop candidates whose accumulated makespan already exceeds the FIFO
  // schedule's; sound for optimality since completions only grow.
  bool use_incumbent_bound = true;
};

// Minimal-makespan schedule over all orderings consistent with in-lane order.
// Deterministic: ties prefer the earlier-enumerated transition (smaller
// predecessor lane, then group size) and the smaller right-of-way lane at the
// terminal. An empty instance yields an empty schedule.
Schedule solve(const Instance& inst);

// solve plus instrumentation; `stats` may be null. `path` (optional) receives
// the chosen transition chain from the first assignment to the last (left
// empty if a capped run falls back to FIFO).
Schedule solve_traced(const Instance& inst, SolveStats* stats, std::vector<PathStep>* path);
Schedule solve_traced(const Instance& inst, const SolveOptions& options, SolveStats* stats,
                      std::vector<PathStep>* path);

struct CountSummary {
  std::uint64_t num_states = 0;
  std::uint64_t num_transitions = 0;
};

// Sizes the reconstructed graph without computing any times: every valid
// state, and every predecessor edge. A two-lane group reaches twin successor
// states that differ only in the right-of-way lane; such an edge is counted
// once (for the lane-1/lane-2 twin) unless it leaves the initial state, where
// both twins count as distinct first assignments.
CountSummary instrument_counts(const Instance& inst);

}  // namespace crossflow
