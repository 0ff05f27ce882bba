// Shared builders for tests: hand-rolled vehicles/instances with explicit
// earliest-arrival times, independent of the random generator.
#pragma once

#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

#include "crossflow/model.hpp"

namespace testutil {

// Vehicle with a chosen earliest arrival; distance/speed kept consistent
// (cruise at v_max) so the same instance also survives JSON round trips.
inline crossflow::Vehicle veh(int id, int lane, int slot, crossflow::Intention intention,
                              double t_min) {
  crossflow::Vehicle v;
  v.id = id;
  v.lane = lane;
  v.slot = slot;
  v.intention = intention;
  v.speed = crossflow::kDefaultKinematics.v_max;
  v.distance_to_conflict = t_min * v.speed;
  v.t_min = t_min;
  return v;
}

// Distributes vehicles into lane queues; slots must already be 1..k per lane.
inline crossflow::Instance make_instance(std::vector<crossflow::Vehicle> vehicles) {
  crossflow::Instance inst;
  for (crossflow::Vehicle& v : vehicles) {
    auto& lane = inst.lanes[v.lane - 1];
    if (static_cast<int>(lane.size()) + 1 != v.slot)
      throw std::logic_error("test helper: vehicles must arrive in slot order");
    lane.push_back(v);
  }
  return inst;
}

}  // namespace testutil
