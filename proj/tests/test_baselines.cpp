// Reference strategies: greedy sequence evaluation against hand-computed
// times, the FIFO baseline, exhaustive enumeration (pruned == unpruned, cap
// enforcement), and the exact sequence-count formula.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "crossflow/baselines.hpp"
#include "crossflow/model.hpp"
#include "crossflow/random_instance.hpp"
#include "crossflow/schedule.hpp"
#include "helpers.hpp"

using namespace crossflow;

namespace {

constexpr Intention S = Intention::kStraight;
constexpr Intention L = Intention::kLeft;

// Independent sequence counter: depth-first merge of the lane queues.
std::uint64_t count_by_walk(std::array<int, kNumLanes> remaining) {
  std::uint64_t total = 0;
  bool leaf = true;
  for (int lane = 0; lane < kNumLanes; ++lane) {
    if (remaining[lane] == 0) continue;
    leaf = false;
    --remaining[lane];
    total += count_by_walk(remaining);
    ++remaining[lane];
  }
  return leaf ? 1 : total;
}

// A uniformly chosen lane-order-consistent sequence.
PassingSequence random_feasible_order(const Instance& inst, std::mt19937_64& rng) {
  std::array<int, kNumLanes> next{1, 1, 1, 1};
  PassingSequence seq;
  for (int n = inst.total_vehicles(); n > 0; --n) {
    std::vector<int> open;
    for (int lane = 1; lane <= kNumLanes; ++lane)
      if (next[lane - 1] <= inst.lane_count(lane)) open.push_back(lane);
    const int lane = open[rng() % open.size()];
    seq.order.push_back(inst.vehicle_at(lane, next[lane - 1]).id);
    ++next[lane - 1];
  }
  return seq;
}

}  // namespace

TEST_CASE("greedy evaluation of a crossing pair, both orders") {
  const Instance inst = testutil::make_instance({
      testutil::veh(1, 1, 1, S, 10.0),
      testutil::veh(2, 2, 1, S, 10.5),
  });
  const Schedule first = evaluate_sequence({{1, 2}}, inst);
  CHECK(first.time_of(1) == 10.0);
  CHECK(first.time_of(2) == 12.0);
  CHECK(first.makespan == 12.0);

  const Schedule second = evaluate_sequence({{2, 1}}, inst);
  CHECK(second.time_of(2) == 10.5);
  CHECK(second.time_of(1) == 12.5);
  CHECK(second.makespan == 12.5);

  CHECK(enumerate_optimal(inst).makespan == 12.0);
}

TEST_CASE("facing vehicles with one intention enter together") {
  const Instance inst = testutil::make_instance({
      testutil::veh(1, 2, 1, L, 10.0),
      testutil::veh(2, 4, 1, L, 10.5),
  });
  const Schedule best = enumerate_optimal(inst);
  CHECK(best.time_of(1) == 10.0);
  CHECK(best.time_of(2) == 10.5);
  CHECK(best.makespan == 10.5);
}

TEST_CASE("single-lane queue chains by the rear-end gap") {
  const Instance inst = testutil::make_instance({
      testutil::veh(1, 1, 1, S, 10.0),
      testutil::veh(2, 1, 2, L, 10.0),
      testutil::veh(3, 1, 3, S, 10.0),
  });
  const Schedule fifo = fifo_schedule(inst);
  CHECK(fifo.time_of(1) == 10.0);
  CHECK(fifo.time_of(2) == 11.5);
  CHECK(fifo.time_of(3) == 13.0);
  CHECK(fifo.makespan == 13.0);
  // One lane admits a single order; the optimum coincides.
  CHECK(enumerate_optimal(inst).makespan == 13.0);
}

TEST_CASE("four facing straights pair up") {
  const Instance inst = testutil::make_instance({
      testutil::veh(1, 1, 1, S, 10.0),
      testutil::veh(2, 2, 1, S, 10.0),
      testutil::veh(3, 3, 1, S, 10.0),
      testutil::veh(4, 4, 1, S, 10.0),
  });
  const Schedule best = enumerate_optimal(inst);
  CHECK(best.makespan == 12.0);
  CHECK(best.time_of(1) == 10.0);
  CHECK(best.time_of(3) == 10.0);
  CHECK(best.time_of(2) == 12.0);
  CHECK(best.time_of(4) == 12.0);
}

TEST_CASE("sequence validation errors") {
  const Instance inst = testutil::make_instance({
      testutil::veh(1, 1, 1, S, 10.0),
      testutil::veh(2, 1, 2, S, 10.0),
  });
  CHECK_THROWS_AS(evaluate_sequence({{1}}, inst), std::invalid_argument);        // coverage
  CHECK_THROWS_AS(evaluate_sequence({{1, 7}}, inst), std::invalid_argument);     // unknown id
  CHECK_THROWS_AS(evaluate_sequence({{2, 1}}, inst), std::invalid_argument);     // lane order
  CHECK_THROWS_AS(evaluate_sequence({{1, 1}}, inst), std::invalid_argument);     // repeat
}

TEST_CASE("empty instance") {
  const Instance inst;
  CHECK(evaluate_sequence({{}}, inst).empty());
  CHECK(fifo_schedule(inst).makespan == 0.0);
  CHECK(enumerate_optimal(inst).empty());
  CHECK(count_sequences(inst) == 1);
}

TEST_CASE("enumeration cap") {
  RandomInstanceOptions opts;
  opts.num_vehicles = 11;
  const Instance inst = random_instance(3, opts);
  CHECK_THROWS_AS(enumerate_optimal(inst), std::length_error);
  EnumerationOptions wide;
  wide.cap = 11;
  CHECK(enumerate_optimal(inst, wide).makespan > 0.0);
}

TEST_CASE("pruning never changes the enumeration result") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    RandomInstanceOptions opts;
    opts.num_vehicles = 7;
    const Instance inst = random_instance(seed, opts);
    EnumerationOptions pruned, full;
    full.prune = false;
    const Schedule a = enumerate_optimal(inst, pruned);
    const Schedule b = enumerate_optimal(inst, full);
    CAPTURE(seed);
    CHECK(a.makespan == b.makespan);
    CHECK(a.sequence() == b.sequence());
  }
}

TEST_CASE("enumeration lower-bounds every feasible order") {
  std::mt19937_64 rng(99);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RandomInstanceOptions opts;
    opts.num_vehicles = 8;
    const Instance inst = random_instance(seed, opts);
    const Schedule best = enumerate_optimal(inst);
    CHECK(validate_schedule(best, inst).ok());
    for (int draw = 0; draw < 20; ++draw) {
      const Schedule sample = evaluate_sequence(random_feasible_order(inst, rng), inst);
      CHECK(best.makespan <= sample.makespan);
      CHECK(validate_schedule(sample, inst).ok());
    }
    CHECK(best.makespan <= fifo_schedule(inst).makespan);
  }
}

TEST_CASE("sequence counts match the exhaustive walk") {
  const auto shaped = [](std::array<int, kNumLanes> shape) {
    std::vector<Vehicle> vs;
    int id = 1;
    for (int lane = 1; lane <= kNumLanes; ++lane)
      for (int slot = 1; slot <= shape[lane - 1]; ++slot)
        vs.push_back(testutil::veh(id++, lane, slot, S, 10.0 + slot));
    return testutil::make_instance(vs);
  };
  for (const std::array<int, kNumLanes>& shape :
       {std::array<int, kNumLanes>{1, 1, 1, 1}, {2, 2, 2, 2}, {2, 1, 0, 0}, {3, 2, 1, 0},
        {0, 0, 0, 0}, {4, 1, 1, 1}}) {
    CAPTURE(shape[0]);
    const Instance inst = shaped(shape);
    CHECK(count_sequences(inst) == count_by_walk(shape));
  }
  CHECK(count_sequences(shaped({1, 1, 1, 1})) == 24);
  CHECK(count_sequences(shaped({2, 2, 2, 2})) == 2520);
  // The largest supported total: 20!/(5!^4) fits comfortably in 64 bits.
  CHECK(count_sequences(shaped({5, 5, 5, 5})) == 11732745024ULL);
}
