// Solver output: per-vehicle assigned arrival times plus the makespan, and an
// independent constraint validator used to cross-check every strategy.
#pragma once

#include <string>
#include <vector>

#include "crossflow/model.hpp"

namespace crossflow {

struct Assignment {
  int id = 0;
  int lane = 0;
  int slot = 0;
  double t_assign = 0.0;
};

struct Schedule {
  std::vector<Assignment> assignments;  // sorted by id ascending
  double makespan = 0.0;                // max t_assign; 0 for an empty schedule

  bool empty() const { return assignments.empty(); }
  // Vehicle ids ordered by (t_assign, id): the implied passing order.
  std::vector<int> sequence() const;
  // Assigned time for one vehicle; throws std::out_of_range if absent.
  double time_of(int id) const;
};

// Sorts by id, recomputes the makespan, and rejects duplicate ids.
Schedule make_schedule(std::vector<Assignment> assignments);

struct ScheduleCheck {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

// Re-derives every constraint from the instance alone: exact coverage of the
// vehicle set, t >= t_min per vehicle, same-lane gaps >= delta_t1 in slot
// order, >= delta_t2 between every cross-conflict pair, and the recorded
// makespan matching the assignment maximum. Comparisons are exact: each bound
// is evaluated the same way producers evaluate it (one rounded addition).
ScheduleCheck validate_schedule(const Schedule& schedule, const Instance& inst);

}  // namespace crossflow
