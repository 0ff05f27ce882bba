#include "crossflow/random_instance.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "rng_util.hpp"

namespace crossflow {

Instance random_instance(std::uint64_t seed, const RandomInstanceOptions& opts) {
  if (opts.num_vehicles < 0)
    throw std::invalid_argument("random_instance: negative vehicle count");
  std::mt19937_64 engine(seed);
  Instance inst;
  inst.safety = opts.safety;
  inst.kinematics = opts.kinematics;
  const KinematicParams& kin = opts.kinematics;

  std::array<int, kNumLanes> lane_of_vehicle_counts{};
  std::vector<int> lanes(opts.num_vehicles);
  for (int i = 0; i < opts.num_vehicles; ++i) {
    lanes[i] = 1 + rng::uniform_index(engine, kNumLanes);
    ++lane_of_vehicle_counts[lanes[i] - 1];
  }

  struct Draft {
    double distance;
    double speed;
    Intention intention;
  };
  std::array<std::vector<Draft>, kNumLanes> drafts;

  for (int lane = 1; lane <= kNumLanes; ++lane) {
    const int count = lane_of_vehicle_counts[lane - 1];
    if (count == 0) continue;
    std::vector<double> positions(count);
    for (double& p : positions) p = rng::uniform(engine, 0.0, kin.control_length);
    std::sort(positions.begin(), positions.end());

    auto& queue = drafts[lane - 1];
    queue.reserve(count);
    double prev_t_min = 0.0;
    for (int i = 0; i < count; ++i) {
      Draft d;
      d.speed = rng::uniform(engine, 0.6 * kin.v_max, kin.v_max);
      d.intention = rng::uniform01(engine) < opts.straight_fraction ? Intention::kStraight
                                                                    : Intention::kLeft;
      d.distance = positions[i];
      if (i > 0) {
        const double min_gap = opts.safety.delta_t1 * d.speed;
        d.distance = std::max(d.distance, queue.back().distance + min_gap);
      }
      // Keep earliest arrivals slot-monotone: a follower that could beat its
      // leader slows down just enough. Lower speed means later arrival, and
      // the lane minimum always suffices because the follower is farther out.
      if (min_arrival_time(d.distance, d.speed, kin) < prev_t_min) {
        double lo = kin.v_min;
        double hi = d.speed;
        for (int step = 0; step < 80; ++step) {
          const double mid = 0.5 * (lo + hi);
          if (min_arrival_time(d.distance, mid, kin) >= prev_t_min)
            lo = mid;
          else
            hi = mid;
        }
        d.speed = lo;
      }
      prev_t_min = min_arrival_time(d.distance, d.speed, kin);
      queue.push_back(d);
    }
  }

  // Ids are the global rank by distance: the nearest vehicle entered first.
  struct Ranked {
    double distance;
    int lane;
    int slot;
  };
  std::vector<Ranked> ranked;
  ranked.reserve(opts.num_vehicles);
  for (int lane = 1; lane <= kNumLanes; ++lane)
    for (std::size_t i = 0; i < drafts[lane - 1].size(); ++i)
      ranked.push_back({drafts[lane - 1][i].distance, lane, static_cast<int>(i) + 1});
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.lane < b.lane;
  });

  std::array<std::vector<int>, kNumLanes> ids;
  for (int lane = 0; lane < kNumLanes; ++lane)
    ids[lane].resize(drafts[lane].size());
  for (std::size_t rank = 0; rank < ranked.size(); ++rank)
    ids[ranked[rank].lane - 1][ranked[rank].slot - 1] = static_cast<int>(rank) + 1;

  for (int lane = 1; lane <= kNumLanes; ++lane) {
    auto& queue = inst.lanes[lane - 1];
    for (std::size_t i = 0; i < drafts[lane - 1].size(); ++i) {
      const Draft& d = drafts[lane - 1][i];
      Vehicle v;
      v.id = ids[lane - 1][i];
      v.lane = lane;
      v.slot = static_cast<int>(i) + 1;
      v.intention = d.intention;
      v.distance_to_conflict = d.distance;
      v.speed = d.speed;
      v.t_min = min_arrival_time(d.distance, d.speed, kin);
      queue.push_back(v);
    }
  }
  return inst;
}

}  // namespace crossflow
