// Reference strategies: greedy time assignment for a fixed passing sequence,
// the FIFO baseline, and the exhaustive-enumeration optimum oracle.
#pragma once

#include <cstdint>
#include <vector>

#include "crossflow/model.hpp"
#include "crossflow/schedule.hpp"

namespace crossflow {

// A total order of vehicle ids; feasible when ids within each lane appear in
// slot order (a merge of the four lane queues).
struct PassingSequence {
  std::vector<int> order;
};

// Assigns each vehicle, in sequence order, the earliest time satisfying
// t >= t_min, t >= any earlier same-lane time + delta_t1, and t >= any earlier
// cross-conflict time + delta_t2 (conflict-free pairs impose nothing).
// Greedy-earliest is optimal for a fixed order because every constraint is a
// lower bound only. Throws std::invalid_argument when the sequence breaks
// lane order or does not cover the instance's ids exactly once each.
Schedule evaluate_sequence(const PassingSequence& seq, const Instance& inst);

// evaluate_sequence applied to ids ascending (control-area entry order).
Schedule fifo_schedule(const Instance& inst);

struct EnumerationOptions {
  int cap = 10;       // refuse instances with more vehicles (std::length_error)
  bool prune = true;  // drop branches whose partial makespan >= incumbent
};

// Depth-first generation of every lane-order-consistent sequence, scored by
// evaluate_sequence; returns the first minimal-makespan schedule in search
// order (lanes tried 1..4 at each step), so pruning cannot change the result.
Schedule enumerate_optimal(const Instance& inst, const EnumerationOptions& opts = {});

// Number of lane-order-consistent sequences: N! / (n1! n2! n3! n4!).
// Exact for N <= 20 (well past the enumeration cap).
std::uint64_t count_sequences(const Instance& inst);

}  // namespace crossflow
