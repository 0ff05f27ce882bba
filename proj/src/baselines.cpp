#include "crossflow/baselines.hpp"

#include <algorithm>
#include <stdexcept>

namespace crossflow {

namespace {

// Earliest feasible time for `v` after the already-timed prefix.
double earliest_time(const Vehicle& v, const std::vector<std::pair<const Vehicle*, double>>& prefix,
                     const SafetyParams& safety) {
  double t = v.t_min;
  for (const auto& [earlier, t_e] : prefix) {
    switch (conflicts(*earlier, v)) {
      case ConflictKind::kSameLaneRearEnd:
        t = std::max(t, t_e + safety.delta_t1);
        break;
      case ConflictKind::kCrossConflict:
        t = std::max(t, t_e + safety.delta_t2);
        break;
      case ConflictKind::kConflictFree:
        break;
    }
  }
  return t;
}

}  // namespace

Schedule evaluate_sequence(const PassingSequence& seq, const Instance& inst) {
  const int total = inst.total_vehicles();
  if (static_cast<int>(seq.order.size()) != total)
    throw std::invalid_argument("evaluate_sequence: sequence does not cover the instance");

  std::array<int, kNumLanes> next_slot;
  next_slot.fill(1);
  std::vector<std::pair<const Vehicle*, double>> timed;
  timed.reserve(total);
  std::vector<Assignment> assignments;
  assignments.reserve(total);

  for (int id : seq.order) {
    const Vehicle* v = inst.find_vehicle(id);
    if (v == nullptr)
      throw std::invalid_argument("evaluate_sequence: unknown vehicle id " + std::to_string(id));
    int& slot = next_slot[v->lane - 1];
    if (v->slot != slot)
      throw std::invalid_argument("evaluate_sequence: sequence violates lane order at id " +
                                  std::to_string(id));
    ++slot;
    const double t = earliest_time(*v, timed, inst.safety);
    timed.emplace_back(v, t);
    assignments.push_back({v->id, v->lane, v->slot, t});
  }
  return make_schedule(std::move(assignments));
}

Schedule fifo_schedule(const Instance& inst) {
  PassingSequence seq;
  for (const Vehicle* v : inst.vehicles_by_id()) seq.order.push_back(v->id);
  return evaluate_sequence(seq, inst);
}

namespace {

struct EnumerationSearch {
  const Instance& inst;
  bool prune;
  std::array<int, kNumLanes> next_slot;
  std::vector<std::pair<const Vehicle*, double>> timed;
  double partial_makespan = 0.0;
  bool have_best = false;
  double best_makespan = 0.0;
  std::vector<Assignment> best;
  std::vector<Assignment> current;

  explicit EnumerationSearch(const Instance& instance, bool prune_branches)
      : inst(instance), prune(prune_branches) {
    next_slot.fill(1);
  }

  void descend(int remaining) {
    if (remaining == 0) {
      if (!have_best || partial_makespan < best_makespan) {
        have_best = true;
        best_makespan = partial_makespan;
        best = current;
      }
      return;
    }
    if (prune && have_best && partial_makespan >= best_makespan) return;
    for (int lane = 1; lane <= kNumLanes; ++lane) {
      const int slot = next_slot[lane - 1];
      if (slot > inst.lane_count(lane)) continue;
      const Vehicle& v = inst.vehicle_at(lane, slot);
      const double t = earliest_time(v, timed, inst.safety);
      const double saved_makespan = partial_makespan;

      next_slot[lane - 1] = slot + 1;
      timed.emplace_back(&v, t);
      current.push_back({v.id, v.lane, v.slot, t});
      partial_makespan = std::max(partial_makespan, t);

      descend(remaining - 1);

      partial_makespan = saved_makespan;
      current.pop_back();
      timed.pop_back();
      next_slot[lane - 1] = slot;
    }
  }
};

}  // namespace

Schedule enumerate_optimal(const Instance& inst, const EnumerationOptions& opts) {
  const int total = inst.total_vehicles();
  if (total > opts.cap)
    throw std::length_error("enumerate_optimal: " + std::to_string(total) +
                            " vehicles exceed the enumeration cap of " + std::to_string(opts.cap));
  if (total == 0) return Schedule{};
  EnumerationSearch search(inst, opts.prune);
  search.descend(total);
  return make_schedule(std::move(search.best));
}

std::uint64_t count_sequences(const Instance& inst) {
  // Multinomial as a product of binomials, each computed overflow-safely via
  // the multiplicative formula with exact intermediate divisions.
  auto binomial = [](std::uint64_t n, std::uint64_t k) {
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) result = result * (n - k + i) / i;
    return result;
  };
  std::uint64_t result = 1;
  std::uint64_t placed = 0;
  for (int lane = 1; lane <= kNumLanes; ++lane) {
    placed += static_cast<std::uint64_t>(inst.lane_count(lane));
    result *= binomial(placed, static_cast<std::uint64_t>(inst.lane_count(lane)));
  }
  return result;
}

}  // namespace crossflow
