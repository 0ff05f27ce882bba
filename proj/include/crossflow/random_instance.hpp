// Seeded random instance generation for oracle fuzzing, comparisons, and
// benchmarks. Fully determined by the seed, independent of platform RNG
// distribution implementations.
#pragma once

#include <cstdint>

#include "crossflow/model.hpp"

namespace crossflow {

struct RandomInstanceOptions {
  int num_vehicles = 8;
  double straight_fraction = 0.5;
  SafetyParams safety{};
  KinematicParams kinematics{};
};

// Each vehicle draws a uniform lane; per lane, positions are uniform over the
// control length, sorted, and pushed apart to at least delta_t1 * speed;
// speeds are uniform in [0.6 * v_max, v_max], with follower speeds reduced
// when needed so earliest-arrival times stay slot-monotone. Ids are the
// global rank by distance (nearest first), matching entry order.
Instance random_instance(std::uint64_t seed, const RandomInstanceOptions& opts);

}  // namespace crossflow
