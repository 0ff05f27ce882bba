// Core domain types for the intersection scheduler: lanes, vehicles,
// safety/kinematic parameters, the conflict relation, and instance validation.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace crossflow {

inline constexpr int kNumLanes = 4;

// Lanes are numbered 1..4; lanes 1|3 and 2|4 face each other.
constexpr int opposite_lane(int lane) { return ((lane + 1) % kNumLanes) + 1; }

// Lanes on the same axis are either identical or opposite; different axes cross.
constexpr bool same_axis(int lane_a, int lane_b) {
  return (lane_a % 2) == (lane_b % 2);
}

enum class Intention : std::uint8_t { kStraight = 0, kLeft = 1 };

constexpr Intention other_intention(Intention intention) {
  return intention == Intention::kStraight ? Intention::kLeft : Intention::kStraight;
}

struct Vehicle {
  int id = 0;    // global arrival ordinal; smaller id entered the control area earlier
  int lane = 1;  // 1..4
  int slot = 1;  // 1-based position within the lane queue; smaller is physically ahead
  Intention intention = Intention::kStraight;
  double distance_to_conflict = 0.0;  // meters to the conflict-area entrance
  double speed = 0.0;                 // current speed, m/s
  double t_min = 0.0;                 // earliest feasible arrival time, seconds
};

struct SafetyParams {
  double delta_t1 = 1.5;  // same-lane rear-end gap, seconds
  double delta_t2 = 2.0;  // cross-conflict gap, seconds
};

struct KinematicParams {
  double a_max = 3.0;             // m/s^2
  double a_min = -5.0;            // m/s^2, negative
  double v_max = 15.0;            // m/s
  double v_min = 0.0;             // m/s
  double control_length = 250.0;  // meters of approach under scheduling control
};

inline constexpr SafetyParams kDefaultSafety{};
inline constexpr KinematicParams kDefaultKinematics{};

struct Instance {
  std::array<std::vector<Vehicle>, kNumLanes> lanes;  // index 0 holds lane 1
  SafetyParams safety{};
  KinematicParams kinematics{};

  int lane_count(int lane) const { return static_cast<int>(lanes[lane - 1].size()); }
  int total_vehicles() const;
  // slot is 1-based; callers must stay within lane_count(lane).
  const Vehicle& vehicle_at(int lane, int slot) const { return lanes[lane - 1][slot - 1]; }
  // All vehicles ordered by id ascending.
  std::vector<const Vehicle*> vehicles_by_id() const;
  const Vehicle* find_vehicle(int id) const;
};

enum class ConflictKind : std::uint8_t {
  kSameLaneRearEnd,
  kCrossConflict,
  kConflictFree,
};

// Conflict relation between two distinct vehicles. Symmetric. Throws
// std::invalid_argument if the same vehicle is passed twice.
ConflictKind conflicts(const Vehicle& a, const Vehicle& b);

// Same relation on the (lane, intention) signature; usable without Vehicle objects.
ConflictKind conflict_kind(int lane_a, Intention ia, int lane_b, Intention ib);

// Minimal time to cover `distance` starting at `speed`: accelerate at a_max
// until v_max, then cruise. Throws std::invalid_argument if speed is outside
// [v_min, v_max] or distance is negative.
double min_arrival_time(double distance, double speed, const KinematicParams& kin);

struct ValidationIssue {
  std::string field;    // what was inspected, e.g. "lane 2 slot 3"
  std::string message;  // why it is invalid
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

// Checks parameter signs, delta_t2 >= delta_t1, slot numbering/order, and
// per-lane t_min monotonicity. Valid instances yield an empty report.
ValidationReport validate_instance(const Instance& inst);

const char* to_string(Intention intention);
const char* to_string(ConflictKind kind);

}  // namespace crossflow
