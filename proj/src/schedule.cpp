#include "crossflow/schedule.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace crossflow {

std::vector<int> Schedule::sequence() const {
  std::vector<const Assignment*> by_time;
  by_time.reserve(assignments.size());
  for (const auto& a : assignments) by_time.push_back(&a);
  std::sort(by_time.begin(), by_time.end(), [](const Assignment* a, const Assignment* b) {
    if (a->t_assign != b->t_assign) return a->t_assign < b->t_assign;
    return a->id < b->id;
  });
  std::vector<int> ids;
  ids.reserve(by_time.size());
  for (const auto* a : by_time) ids.push_back(a->id);
  return ids;
}

double Schedule::time_of(int id) const {
  for (const auto& a : assignments)
    if (a.id == id) return a.t_assign;
  throw std::out_of_range("Schedule::time_of: unknown vehicle id");
}

Schedule make_schedule(std::vector<Assignment> assignments) {
  std::sort(assignments.begin(), assignments.end(),
            [](const Assignment& a, const Assignment& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < assignments.size(); ++i)
    if (assignments[i].id == assignments[i - 1].id)
      throw std::invalid_argument("make_schedule: duplicate vehicle id");
  Schedule s;
  s.makespan = 0.0;
  for (const auto& a : assignments) s.makespan = std::max(s.makespan, a.t_assign);
  s.assignments = std::move(assignments);
  return s;
}

std::string ScheduleCheck::to_string() const {
  std::ostringstream os;
  for (const auto& v : violations) os << v << "\n";
  return os.str();
}

namespace {

std::string describe(const Vehicle& v) {
  std::ostringstream os;
  os << "vehicle " << v.id << " (lane " << v.lane << " slot " << v.slot << ")";
  return os.str();
}

}  // namespace

ScheduleCheck validate_schedule(const Schedule& schedule, const Instance& inst) {
  ScheduleCheck check;
  auto flag = [&check](const std::string& what) { check.violations.push_back(what); };

  const auto vehicles = inst.vehicles_by_id();
  if (schedule.assignments.size() != vehicles.size()) {
    std::ostringstream os;
    os << "coverage: " << schedule.assignments.size() << " assignments for "
       << vehicles.size() << " vehicles";
    flag(os.str());
  }

  // Match assignments to vehicles; both sides are id-sorted.
  std::vector<std::pair<const Vehicle*, double>> timed;
  for (const auto& a : schedule.assignments) {
    const Vehicle* v = inst.find_vehicle(a.id);
    if (v == nullptr) {
      flag("coverage: assignment for unknown vehicle id " + std::to_string(a.id));
      continue;
    }
    if (v->lane != a.lane || v->slot != a.slot)
      flag(describe(*v) + ": assignment lane/slot disagrees with the instance");
    timed.emplace_back(v, a.t_assign);
  }
  for (const Vehicle* v : vehicles)
    if (std::none_of(timed.begin(), timed.end(),
                     [v](const auto& p) { return p.first->id == v->id; }))
      flag(describe(*v) + ": never assigned");

  double max_time = 0.0;
  for (const auto& [v, t] : timed) {
    max_time = std::max(max_time, t);
    if (t < v->t_min) flag(describe(*v) + ": assigned before its earliest arrival");
  }
  if (!timed.empty() && schedule.makespan != max_time)
    flag("makespan: recorded value differs from the assignment maximum");
  if (timed.empty() && schedule.makespan != 0.0)
    flag("makespan: nonzero for an empty schedule");

  const double dt1 = inst.safety.delta_t1;
  const double dt2 = inst.safety.delta_t2;
  for (std::size_t i = 0; i < timed.size(); ++i) {
    for (std::size_t j = i + 1; j < timed.size(); ++j) {
      const auto& [a, ta] = timed[i];
      const auto& [b, tb] = timed[j];
      switch (conflicts(*a, *b)) {
        case ConflictKind::kSameLaneRearEnd: {
          const auto& [lead, t_lead] = a->slot < b->slot ? timed[i] : timed[j];
          const auto& [follow, t_follow] = a->slot < b->slot ? timed[j] : timed[i];
          if (t_follow < t_lead + dt1)
            flag(describe(*follow) + ": rear-end gap after " + describe(*lead) +
                 " below delta_t1");
          break;
        }
        case ConflictKind::kCrossConflict: {
          const double first = std::min(ta, tb);
          const double second = std::max(ta, tb);
          if (second < first + dt2)
            flag(describe(*a) + " and " + describe(*b) + ": cross gap below delta_t2");
          break;
        }
        case ConflictKind::kConflictFree:
          break;
      }
    }
  }
  return check;
}

}  // namespace crossflow
