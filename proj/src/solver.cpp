#include "crossflow/solver.hpp"

#include "crossflow/baselines.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace crossflow {

double ArrivalFrontier::objective() const {
  double best = kNoArrival;
  for (double t : last) best = std::max(best, t);
  return best == kNoArrival ? 0.0 : best;
}

bool ArrivalFrontier::dominates(const ArrivalFrontier& other) const {
  for (std::size_t i = 0; i < last.size(); ++i)
    if (last[i] > other.last[i]) return false;
  return true;
}

namespace {

// Length of the maximal same-intention run in `lane` ending at `slot`;
// 0 when slot is 0 or the vehicle there has a different intention.
int run_length(const Instance& inst, int lane, int slot, Intention intention) {
  int len = 0;
  while (slot - len >= 1 && inst.vehicle_at(lane, slot - len).intention == intention) ++len;
  return len;
}

void check_state(const StateKey& s, const Instance& inst) {
  if (s.right_of_way < 1 || s.right_of_way > kNumLanes)
    throw std::invalid_argument("enumerate_predecessors: initial or malformed state");
  for (int lane = 1; lane <= kNumLanes; ++lane)
    if (s.counts[lane - 1] < 0 || s.counts[lane - 1] > inst.lane_count(lane))
      throw std::invalid_argument("enumerate_predecessors: counts outside lane sizes");
  if (s.counts[s.right_of_way - 1] < 1)
    throw std::invalid_argument("enumerate_predecessors: right-of-way lane has no assignment");
}

}  // namespace

std::vector<Transition> enumerate_predecessors(const StateKey& s, const Instance& inst) {
  check_state(s, inst);
  const int lane_r = s.right_of_way;
  const int lane_o = opposite_lane(lane_r);
  const int count_r = s.counts[lane_r - 1];
  const int count_o = s.counts[lane_o - 1];

  const Intention intention = inst.vehicle_at(lane_r, count_r).intention;
  const int run_r = run_length(inst, lane_r, count_r, intention);  // >= 1
  const int run_o = run_length(inst, lane_o, count_o, intention);  // 0 unless it matches

  std::vector<Transition> out;

  // Single-vehicle transitions. The edge from an opposite-lane predecessor
  // whose latest vehicle shares this intention is non-conflicting and is
  // covered by group transitions instead.
  {
    Transition tr;
    tr.pred.counts = s.counts;
    tr.pred.counts[lane_r - 1] -= 1;
    tr.group.lane_r = {lane_r, count_r, 1};
    tr.group.lane_ro = {lane_o, 1, 0};
    if (tr.pred.total() == 0) {
      tr.pred.right_of_way = 0;
      out.push_back(tr);
    } else {
      for (int lane = 1; lane <= kNumLanes; ++lane) {
        if (tr.pred.counts[lane - 1] == 0) continue;
        if (lane == lane_o && run_o >= 1) continue;
        tr.pred.right_of_way = lane;
        out.push_back(tr);
      }
    }
  }

  // Group transitions: j vehicles ending the lane-r run joined by k >= 1 from
  // the opposite lane, all sharing one intention. A predecessor in either
  // group lane must lie past the full intention run there (a shorter cut
  // would leave a non-conflicting boundary, which group edges absorb);
  // perpendicular predecessors connect for every (j, k).
  for (int j = 1; j <= run_r; ++j) {
    for (int k = 1; k <= run_o; ++k) {
      Transition tr;
      tr.pred.counts = s.counts;
      tr.pred.counts[lane_r - 1] -= j;
      tr.pred.counts[lane_o - 1] -= k;
      tr.group.lane_r = {lane_r, count_r - j + 1, j};
      tr.group.lane_ro = {lane_o, count_o - k + 1, k};
      if (tr.pred.total() == 0) {
        tr.pred.right_of_way = 0;
        out.push_back(tr);
        continue;
      }
      for (int lane = 1; lane <= kNumLanes; ++lane) {
        if (tr.pred.counts[lane - 1] == 0) continue;
        if (lane == lane_r && j != run_r) continue;
        if (lane == lane_o && k != run_o) continue;
        tr.pred.right_of_way = lane;
        out.push_back(tr);
      }
    }
  }

  std::sort(out.begin(), out.end(), [](const Transition& a, const Transition& b) {
    if (a.pred.right_of_way != b.pred.right_of_way)
      return a.pred.right_of_way < b.pred.right_of_way;
    if (a.group.size() != b.group.size()) return a.group.size() < b.group.size();
    return a.group.lane_r.count < b.group.lane_r.count;
  });
  return out;
}

namespace {

// Shared queue-assignment kernel: advances `frontier` over one contiguous
// run and optionally records the per-member times. Both the hot DP loop and
// the public assign_group_times run exactly this arithmetic, so recomputed
// times match stored values bit for bit.
void advance_queue(const SlotRange& range, const ArrivalFrontier& pred,
                   const SafetyParams& safety, const Instance& inst,
                   ArrivalFrontier& frontier, std::vector<double>* times) {
  if (range.count == 0) return;
  const int lane = range.lane;
  const int opp = opposite_lane(lane);
  double prev = 0.0;
  for (int i = 0; i < range.count; ++i) {
    const Vehicle& v = inst.vehicle_at(lane, range.first + i);
    double t;
    if (i == 0) {
      // Latest same-lane arrival, any intention: rear-end gap.
      const double same =
          std::max(pred.at(lane, Intention::kStraight), pred.at(lane, Intention::kLeft));
      // Latest conflicting cross arrival: both perpendicular lanes entirely,
      // plus the opposite lane's other intention. Empty classes are -inf and
      // vanish under max once the gap is added.
      double cross = pred.at(opp, other_intention(v.intention));
      for (int perp = 1; perp <= kNumLanes; ++perp) {
        if (same_axis(perp, lane)) continue;
        cross = std::max(cross, std::max(pred.at(perp, Intention::kStraight),
                                         pred.at(perp, Intention::kLeft)));
      }
      t = std::max(v.t_min, std::max(same + safety.delta_t1, cross + safety.delta_t2));
    } else {
      t = std::max(v.t_min, prev + safety.delta_t1);
    }
    frontier.set(lane, v.intention, t);
    if (times != nullptr) times->push_back(t);
    prev = t;
  }
}

ArrivalFrontier advance_frontier(const ArrivalFrontier& pred, const TransitionGroup& group,
                                 const Instance& inst) {
  ArrivalFrontier frontier = pred;
  advance_queue(group.lane_r, pred, inst.safety, inst, frontier, nullptr);
  advance_queue(group.lane_ro, pred, inst.safety, inst, frontier, nullptr);
  return frontier;
}

}  // namespace

GroupTimes assign_group_times(const TransitionGroup& group, const ArrivalFrontier& pred,
                              const Instance& inst) {
  if (group.lane_r.count < 1)
    throw std::invalid_argument("assign_group_times: group without a lane run");
  GroupTimes out;
  out.frontier = pred;
  out.lane_r_times.reserve(group.lane_r.count);
  out.lane_ro_times.reserve(group.lane_ro.count);
  advance_queue(group.lane_r, pred, inst.safety, inst, out.frontier, &out.lane_r_times);
  advance_queue(group.lane_ro, pred, inst.safety, inst, out.frontier, &out.lane_ro_times);
  out.objective = out.frontier.objective();
  return out;
}

namespace {

// Dense (counts, right-of-way) table addressing; slot 5 per count vector.
struct StateIndexer {
  std::array<int, kNumLanes> dims{};  // lane size + 1

  explicit StateIndexer(const Instance& inst) {
    for (int lane = 1; lane <= kNumLanes; ++lane) dims[lane - 1] = inst.lane_count(lane) + 1;
  }
  std::size_t size() const {
    std::size_t n = 5;
    for (int d : dims) n *= static_cast<std::size_t>(d);
    return n;
  }
  std::size_t index(const StateKey& s) const {
    std::size_t idx = 0;
    for (int lane = 0; lane < kNumLanes; ++lane)
      idx = idx * static_cast<std::size_t>(dims[lane]) + static_cast<std::size_t>(s.counts[lane]);
    return idx * 5 + static_cast<std::size_t>(s.right_of_way);
  }
  StateKey decode(std::size_t idx) const {
    StateKey s;
    s.right_of_way = static_cast<int>(idx % 5);
    idx /= 5;
    for (int lane = kNumLanes - 1; lane >= 0; --lane) {
      s.counts[lane] = static_cast<int>(idx % static_cast<std::size_t>(dims[lane]));
      idx /= static_cast<std::size_t>(dims[lane]);
    }
    return s;
  }
};

// Valid non-initial states grouped by total assigned count (the stage).
std::vector<std::vector<StateKey>> stage_buckets(const Instance& inst) {
  std::vector<std::vector<StateKey>> stages(inst.total_vehicles() + 1);
  StateKey s;
  for (s.counts[0] = 0; s.counts[0] <= inst.lane_count(1); ++s.counts[0])
    for (s.counts[1] = 0; s.counts[1] <= inst.lane_count(2); ++s.counts[1])
      for (s.counts[2] = 0; s.counts[2] <= inst.lane_count(3); ++s.counts[2])
        for (s.counts[3] = 0; s.counts[3] <= inst.lane_count(4); ++s.counts[3]) {
          const int total = s.total();
          if (total == 0) continue;
          for (int lane = 1; lane <= kNumLanes; ++lane) {
            if (s.counts[lane - 1] == 0) continue;
            s.right_of_way = lane;
            stages[total].push_back(s);
          }
        }
  return stages;
}

// Counting convention: a two-lane group reaches twin successors that differ
// only in the right-of-way lane, so its edge counts once (from the
// lane-1/lane-2 twin) unless it leaves the initial state, where both twins
// are distinct first assignments. Singles have no twin.
std::uint64_t counted_edges(const StateKey& s, const std::vector<Transition>& transitions) {
  std::uint64_t n = 0;
  for (const Transition& tr : transitions) {
    if (tr.group.lane_ro.count == 0 || tr.pred.is_initial() || s.right_of_way <= 2) ++n;
  }
  return n;
}

struct Candidate {
  ArrivalFrontier frontier;
  std::int64_t pred_state = -1;  // dense index; -1 only on the initial state's root
  std::int32_t pred_candidate = -1;
  TransitionGroup group;
};

// Keeps the cell's nondominated frontier set. An earlier candidate that
// already covers the newcomer wins ties, preserving the transition
// enumeration order as the tie-break.
void insert_candidate(std::vector<Candidate>& cell, Candidate&& cand) {
  for (const Candidate& existing : cell)
    if (existing.frontier.dominates(cand.frontier)) return;
  std::erase_if(cell, [&cand](const Candidate& existing) {
    return cand.frontier.dominates(existing.frontier);
  });
  cell.push_back(std::move(cand));
}

// Drops the worst-makespan candidate (the latest among equals, so earlier
// enumeration order survives) until the cell fits the cap.
void enforce_width_cap(std::vector<Candidate>& cell, std::uint64_t cap) {
  while (cell.size() > cap) {
    std::size_t worst = 0;
    double worst_objective = cell[0].frontier.objective();
    for (std::size_t i = 1; i < cell.size(); ++i) {
      const double objective = cell[i].frontier.objective();
      if (objective >= worst_objective) {
        worst = i;
        worst_objective = objective;
      }
    }
    cell.erase(cell.begin() + static_cast<std::ptrdiff_t>(worst));
  }
}

}  // namespace

Schedule solve_traced(const Instance& inst, const SolveOptions& options, SolveStats* stats,
                      std::vector<PathStep>* path) {
  {
    const ValidationReport report = validate_instance(inst);
    if (!report.ok())
      throw std::invalid_argument("solve: invalid instance:\n" + report.to_string());
  }
  if (stats != nullptr) *stats = SolveStats{};
  if (path != nullptr) path->clear();

  const int total = inst.total_vehicles();
  if (stats != nullptr) stats->num_states = 1;  // the initial state
  if (total == 0) return Schedule{};

  // FIFO gives a feasible incumbent: partial makespans never shrink, so any
  // candidate already above it cannot complete into an optimum.
  Schedule incumbent;
  double bound = std::numeric_limits<double>::infinity();
  const bool have_incumbent = options.use_incumbent_bound || options.max_width > 0;
  if (have_incumbent) {
    incumbent = fifo_schedule(inst);
    if (options.use_incumbent_bound) bound = incumbent.makespan;
  }
  std::uint64_t pruned = 0;
  bool capped = false;

  const StateIndexer indexer(inst);
  std::vector<std::vector<Candidate>> cells(indexer.size());
  const std::size_t initial_index = indexer.index(StateKey{});
  {
    Candidate root;
    root.frontier = ArrivalFrontier::none();
    cells[initial_index].push_back(root);
  }

  const auto stages = stage_buckets(inst);
  for (int stage = 1; stage <= total; ++stage) {
    for (const StateKey& s : stages[stage]) {
      const auto transitions = enumerate_predecessors(s, inst);
      auto& cell = cells[indexer.index(s)];
      for (const Transition& tr : transitions) {
        const std::size_t pred_index = indexer.index(tr.pred);
        const auto& pred_cell = cells[pred_index];
        for (std::size_t pc = 0; pc < pred_cell.size(); ++pc) {
          Candidate cand;
          cand.frontier = advance_frontier(pred_cell[pc].frontier, tr.group, inst);
          if (cand.frontier.objective() > bound) {
            ++pruned;
            continue;
          }
          cand.pred_state = static_cast<std::int64_t>(pred_index);
          cand.pred_candidate = static_cast<std::int32_t>(pc);
          cand.group = tr.group;
          insert_candidate(cell, std::move(cand));
          if (options.max_width > 0 && cell.size() > options.max_width) {
            enforce_width_cap(cell, options.max_width);
            capped = true;
          }
        }
      }
      // Pruning may legitimately strand states; otherwise every valid state
      // must be reachable.
      if (cell.empty() && pruned == 0)
        throw std::logic_error("solve: valid state left unreachable");
      if (stats != nullptr) {
        stats->num_states += 1;
        stats->raw_edges += transitions.size();
        stats->num_transitions += counted_edges(s, transitions);
        stats->max_candidates = std::max(stats->max_candidates,
                                         static_cast<std::uint64_t>(cell.size()));
      }
    }
  }
  if (stats != nullptr) {
    stats->pruned_candidates = pruned;
    stats->width_capped = capped;
  }

  // Terminal selection: all counts exhausted, smallest right-of-way lane and
  // earliest-enumerated candidate winning ties.
  std::size_t best_state = 0;
  std::size_t best_candidate = 0;
  double best_objective = 0.0;
  bool have_best = false;
  for (int lane = 1; lane <= kNumLanes; ++lane) {
    if (inst.lane_count(lane) == 0) continue;
    StateKey terminal;
    for (int l = 1; l <= kNumLanes; ++l) terminal.counts[l - 1] = inst.lane_count(l);
    terminal.right_of_way = lane;
    const std::size_t idx = indexer.index(terminal);
    for (std::size_t c = 0; c < cells[idx].size(); ++c) {
      const double objective = cells[idx][c].frontier.objective();
      if (!have_best || objective < best_objective) {
        have_best = true;
        best_objective = objective;
        best_state = idx;
        best_candidate = c;
      }
    }
  }
  if (!have_best || (have_incumbent && best_objective > incumbent.makespan)) {
    // Only a width-capped search can lose every at-or-below-incumbent path;
    // the incumbent itself then stands as the result.
    if (!have_incumbent || options.max_width == 0)
      throw std::logic_error("solve: no terminal state reached");
    if (stats != nullptr) stats->used_fifo_fallback = true;
    return incumbent;
  }

  // Backtrack, rebuilding each group's times from its predecessor frontier.
  std::vector<Assignment> assignments;
  assignments.reserve(total);
  std::vector<PathStep> steps;
  std::size_t state = best_state;
  std::size_t candidate = best_candidate;
  while (state != initial_index) {
    const Candidate& cand = cells[state][candidate];
    const auto& pred_cell = cells[static_cast<std::size_t>(cand.pred_state)];
    const ArrivalFrontier& pred_frontier =
        pred_cell[static_cast<std::size_t>(cand.pred_candidate)].frontier;
    GroupTimes times = assign_group_times(cand.group, pred_frontier, inst);
    for (int i = 0; i < cand.group.lane_r.count; ++i) {
      const Vehicle& v = inst.vehicle_at(cand.group.lane_r.lane, cand.group.lane_r.first + i);
      assignments.push_back({v.id, v.lane, v.slot, times.lane_r_times[i]});
    }
    for (int i = 0; i < cand.group.lane_ro.count; ++i) {
      const Vehicle& v = inst.vehicle_at(cand.group.lane_ro.lane, cand.group.lane_ro.first + i);
      assignments.push_back({v.id, v.lane, v.slot, times.lane_ro_times[i]});
    }
    if (path != nullptr) {
      PathStep step;
      step.state = indexer.decode(state);
      step.pred = indexer.decode(static_cast<std::size_t>(cand.pred_state));
      step.group = cand.group;
      step.times = std::move(times);
      steps.push_back(std::move(step));
    }
    const std::size_t next_state = static_cast<std::size_t>(cand.pred_state);
    const std::size_t next_candidate = static_cast<std::size_t>(cand.pred_candidate);
    state = next_state;
    candidate = next_candidate;
  }
  if (path != nullptr) {
    std::reverse(steps.begin(), steps.end());
    *path = std::move(steps);
  }

  Schedule schedule = make_schedule(std::move(assignments));
  if (static_cast<int>(schedule.assignments.size()) != total)
    throw std::logic_error("solve: backtracked path misses vehicles");
  if (schedule.makespan != best_objective)
    throw std::logic_error("solve: backtracked makespan disagrees with the table");
  return schedule;
}

Schedule solve_traced(const Instance& inst, SolveStats* stats, std::vector<PathStep>* path) {
  return solve_traced(inst, SolveOptions{}, stats, path);
}

Schedule solve(const Instance& inst) { return solve_traced(inst, nullptr, nullptr); }

CountSummary instrument_counts(const Instance& inst) {
  CountSummary summary;
  summary.num_states = 1;  // the initial state
  const auto stages = stage_buckets(inst);
  for (const auto& stage : stages) {
    for (const StateKey& s : stage) {
      const auto transitions = enumerate_predecessors(s, inst);
      summary.num_states += 1;
      summary.num_transitions += counted_edges(s, transitions);
    }
  }
  return summary;
}

}  // namespace crossflow
