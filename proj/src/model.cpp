#include "crossflow/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace crossflow {

int Instance::total_vehicles() const {
  int total = 0;
  for (const auto& lane : lanes) total += static_cast<int>(lane.size());
  return total;
}

std::vector<const Vehicle*> Instance::vehicles_by_id() const {
  std::vector<const Vehicle*> out;
  out.reserve(total_vehicles());
  for (const auto& lane : lanes)
    for (const auto& v : lane) out.push_back(&v);
  std::sort(out.begin(), out.end(),
            [](const Vehicle* a, const Vehicle* b) { return a->id < b->id; });
  return out;
}

const Vehicle* Instance::find_vehicle(int id) const {
  for (const auto& lane : lanes)
    for (const auto& v : lane)
      if (v.id == id) return &v;
  return nullptr;
}

ConflictKind conflict_kind(int lane_a, Intention ia, int lane_b, Intention ib) {
  if (lane_a == lane_b) return ConflictKind::kSameLaneRearEnd;
  if (lane_b == opposite_lane(lane_a) && ia == ib) return ConflictKind::kConflictFree;
  return ConflictKind::kCrossConflict;
}

ConflictKind conflicts(const Vehicle& a, const Vehicle& b) {
  if (a.id == b.id) throw std::invalid_argument("conflicts: identical vehicle passed twice");
  return conflict_kind(a.lane, a.intention, b.lane, b.intention);
}

double min_arrival_time(double distance, double speed, const KinematicParams& kin) {
  if (distance < 0.0) throw std::invalid_argument("min_arrival_time: negative distance");
  if (speed < kin.v_min || speed > kin.v_max)
    throw std::invalid_argument("min_arrival_time: speed outside [v_min, v_max]");
  if (distance == 0.0) return 0.0;
  // Distance consumed while accelerating from `speed` to v_max at a_max.
  const double accel_distance = (kin.v_max * kin.v_max - speed * speed) / (2.0 * kin.a_max);
  if (distance >= accel_distance) {
    const double accel_time = (kin.v_max - speed) / kin.a_max;
    return accel_time + (distance - accel_distance) / kin.v_max;
  }
  // v_max is not reached: solve distance = speed*t + a_max*t^2/2 for t > 0.
  return (-speed + std::sqrt(speed * speed + 2.0 * kin.a_max * distance)) / kin.a_max;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& issue : issues) os << issue.field << ": " << issue.message << "\n";
  return os.str();
}

ValidationReport validate_instance(const Instance& inst) {
  ValidationReport report;
  auto flag = [&report](std::string field, std::string message) {
    report.issues.push_back({std::move(field), std::move(message)});
  };

  const auto& kin = inst.kinematics;
  if (!(kin.a_max > 0.0)) flag("kinematics.a_max", "must be positive");
  if (!(kin.a_min < 0.0)) flag("kinematics.a_min", "must be negative");
  if (!(kin.v_min >= 0.0 && kin.v_min < kin.v_max))
    flag("kinematics.v_min/v_max", "need 0 <= v_min < v_max");
  if (!(kin.control_length > 0.0)) flag("kinematics.l_c", "must be positive");

  const auto& safety = inst.safety;
  if (!(safety.delta_t1 > 0.0)) flag("safety.delta_t1", "must be positive");
  if (!(safety.delta_t2 >= safety.delta_t1))
    flag("safety.delta_t2", "cross gap below rear-end gap");

  std::vector<int> ids;
  for (int lane = 1; lane <= kNumLanes; ++lane) {
    const auto& queue = inst.lanes[lane - 1];
    for (int slot = 1; slot <= static_cast<int>(queue.size()); ++slot) {
      ids.push_back(queue[slot - 1].id);
      const Vehicle& v = queue[slot - 1];
      std::ostringstream where;
      where << "lane " << lane << " slot " << slot;
      if (v.lane != lane) flag(where.str(), "vehicle lane field disagrees with its queue");
      if (v.slot != slot) flag(where.str(), "slot numbering is not contiguous from 1");
      if (v.distance_to_conflict < 0.0) flag(where.str(), "negative distance");
      if (v.speed < kin.v_min || v.speed > kin.v_max)
        flag(where.str(), "speed outside [v_min, v_max]");
      if (slot > 1) {
        const Vehicle& leader = queue[slot - 2];
        if (v.distance_to_conflict < leader.distance_to_conflict)
          flag(where.str(), "follower is physically ahead of its leader");
        if (v.t_min < leader.t_min)
          flag(where.str(), "follower t_min below leader t_min");
      }
    }
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    flag("ids", "duplicate vehicle id");
  return report;
}

const char* to_string(Intention intention) {
  return intention == Intention::kStraight ? "straight" : "left";
}

const char* to_string(ConflictKind kind) {
  switch (kind) {
    case ConflictKind::kSameLaneRearEnd: return "same_lane_rear_end";
    case ConflictKind::kCrossConflict: return "cross_conflict";
    case ConflictKind::kConflictFree: return "conflict_free";
  }
  return "unknown";
}

}  // namespace crossflow
