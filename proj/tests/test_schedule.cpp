// Schedule container semantics and the independent constraint validator:
// construction, ordering, lookup, and each violation class down to the exact
// floating-point boundary the producers use.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "crossflow/model.hpp"
#include "crossflow/schedule.hpp"
#include "helpers.hpp"

using namespace crossflow;

namespace {

constexpr Intention S = Intention::kStraight;
constexpr Intention L = Intention::kLeft;

bool mentions(const ScheduleCheck& check, const std::string& needle) {
  for (const auto& v : check.violations)
    if (v.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("make_schedule sorts, recomputes, and rejects duplicates") {
  Schedule s = make_schedule({{3, 2, 1, 14.0}, {1, 1, 1, 10.0}, {2, 1, 2, 11.5}});
  REQUIRE(s.assignments.size() == 3);
  CHECK(s.assignments[0].id == 1);
  CHECK(s.assignments[1].id == 2);
  CHECK(s.assignments[2].id == 3);
  CHECK(s.makespan == 14.0);

  CHECK(make_schedule({}).empty());
  CHECK(make_schedule({}).makespan == 0.0);

  CHECK_THROWS_AS(make_schedule({{1, 1, 1, 10.0}, {1, 2, 1, 11.0}}), std::invalid_argument);
}

TEST_CASE("sequence orders by time, then id") {
  const Schedule s = make_schedule({{5, 1, 1, 10.0}, {2, 3, 1, 10.0}, {9, 2, 1, 8.0}});
  const std::vector<int> expected{9, 2, 5};
  CHECK(s.sequence() == expected);
}

TEST_CASE("time_of finds assignments or throws") {
  const Schedule s = make_schedule({{4, 1, 1, 12.25}});
  CHECK(s.time_of(4) == 12.25);
  CHECK_THROWS_AS(s.time_of(5), std::out_of_range);
}

TEST_CASE("validator accepts a feasible schedule") {
  // Lane 1 straight pair, a facing straight (concurrent with both is not
  // claimed — only with its own class), and a crossing left turn.
  const Instance inst = testutil::make_instance({
      testutil::veh(1, 1, 1, S, 10.0),
      testutil::veh(2, 1, 2, S, 10.0),
      testutil::veh(3, 3, 1, S, 10.0),
      testutil::veh(4, 2, 1, L, 10.0),
  });
  const Schedule s = make_schedule({
      {1, 1, 1, 10.0},
      {2, 1, 2, 11.5},   // exactly delta_t1 after its leader
      {3, 3, 1, 10.0},   // concurrent with vehicle 1 (conflict-free)
      {4, 2, 1, 13.5},   // delta_t2 after vehicle 2, later than everything else
  });
  const ScheduleCheck check = validate_schedule(s, inst);
  CHECK(check.ok());
  CHECK(check.to_string().empty());

  CHECK(validate_schedule(Schedule{}, Instance{}).ok());
}

TEST_CASE("validator flags every violation class") {
  const Instance pair = testutil::make_instance({
      testutil::veh(1, 1, 1, S, 10.0),
      testutil::veh(2, 1, 2, S, 10.0),
  });

  SUBCASE("missing assignment") {
    const Schedule s = make_schedule({{1, 1, 1, 10.0}});
    const auto check = validate_schedule(s, pair);
    CHECK(mentions(check, "coverage"));
    CHECK(mentions(check, "never assigned"));
  }
  SUBCASE("unknown vehicle id") {
    const Schedule s = make_schedule({{1, 1, 1, 10.0}, {2, 1, 2, 11.5}, {7, 2, 1, 20.0}});
    CHECK(mentions(validate_schedule(s, pair), "unknown vehicle id 7"));
  }
  SUBCASE("lane/slot mismatch") {
    const Schedule s = make_schedule({{1, 1, 1, 10.0}, {2, 4, 2, 11.5}});
    CHECK(mentions(validate_schedule(s, pair), "disagrees with the instance"));
  }
  SUBCASE("before earliest arrival") {
    const Schedule s = make_schedule({{1, 1, 1, 9.0}, {2, 1, 2, 11.5}});
    CHECK(mentions(validate_schedule(s, pair), "before its earliest arrival"));
  }
  SUBCASE("tampered makespan") {
    Schedule s = make_schedule({{1, 1, 1, 10.0}, {2, 1, 2, 11.5}});
    s.makespan = 99.0;
    CHECK(mentions(validate_schedule(s, pair), "makespan"));
  }
  SUBCASE("nonzero makespan on an empty schedule") {
    Schedule s;
    s.makespan = 1.0;
    CHECK(mentions(validate_schedule(s, Instance{}), "makespan"));
  }
  SUBCASE("rear-end gap, exact boundary") {
    // Equality passes; one representable step below fails.
    Schedule ok = make_schedule({{1, 1, 1, 10.0}, {2, 1, 2, 10.0 + 1.5}});
    CHECK(validate_schedule(ok, pair).ok());
    Schedule bad = make_schedule({{1, 1, 1, 10.0}, {2, 1, 2, std::nextafter(11.5, 0.0)}});
    CHECK(mentions(validate_schedule(bad, pair), "below delta_t1"));
  }
  SUBCASE("rear-end order follows slots, not assignment order") {
    // The follower entering first is a gap violation however large the gap.
    const Schedule s = make_schedule({{1, 1, 1, 20.0}, {2, 1, 2, 10.0}});
    CHECK(mentions(validate_schedule(s, pair), "below delta_t1"));
  }
}

TEST_CASE("cross-conflict gap, exact boundary") {
  const Instance inst = testutil::make_instance({
      testutil::veh(1, 1, 1, S, 10.0),
      testutil::veh(2, 2, 1, S, 10.0),
  });
  Schedule ok = make_schedule({{1, 1, 1, 10.0}, {2, 2, 1, 12.0}});
  CHECK(validate_schedule(ok, inst).ok());
  Schedule bad = make_schedule({{1, 1, 1, 10.0}, {2, 2, 1, std::nextafter(12.0, 0.0)}});
  CHECK(mentions(validate_schedule(bad, inst), "below delta_t2"));
  // Either passing order satisfies the relation.
  Schedule swapped = make_schedule({{1, 1, 1, 12.0}, {2, 2, 1, 10.0}});
  CHECK(validate_schedule(swapped, inst).ok());
}

TEST_CASE("conflict-free pairs may enter simultaneously") {
  const Instance inst = testutil::make_instance({
      testutil::veh(1, 1, 1, L, 10.0),
      testutil::veh(2, 3, 1, L, 10.0),
  });
  const Schedule s = make_schedule({{1, 1, 1, 10.0}, {2, 3, 1, 10.0}});
  CHECK(validate_schedule(s, inst).ok());
}
