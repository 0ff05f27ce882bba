// Closed-form state/transition counts in component form (general per-lane
// sizes) and in the published equal-lane polynomial form, plus the verifier
// comparing them against instrumented graph counts.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crossflow/model.hpp"

namespace crossflow {

using LaneSizes = std::array<int, kNumLanes>;

// 4*prod(n) + 3*sum(triple products) + 2*sum(pair products) + sum(n) + 1.
// Derived for nonempty lanes but exact for empty ones too (verified against
// exhaustive listings); the verifier still flags the extrapolation.
std::uint64_t states_closed_form(const LaneSizes& n);

// Component form of the transition count before any edges are rewired:
// 4*(states - 1) minus the four per-lane infeasible sums, plus 4. Matches the
// measured graph exactly when no opposite-lane pair shares an intention.
// Requires every lane nonempty; throws std::invalid_argument otherwise.
std::uint64_t transitions_lower_closed_form(const LaneSizes& n);

// Component form after non-conflicting edges are replaced by group edges:
// lower count - removed + reproduced. Matches the measured graph exactly when
// every vehicle goes straight. Requires every lane nonempty.
std::uint64_t transitions_upper_closed_form(const LaneSizes& n);

// The published expanded polynomials in the total vehicle count (equal lanes,
// total divisible by 4). Kept verbatim because two of them disagree with the
// component forms; the verifier reports deltas instead of adopting them.
std::uint64_t states_polynomial(int total);              // agrees with component form
std::int64_t transitions_lower_polynomial(int total);    // carries a spurious +4
std::int64_t transitions_upper_polynomial(int total);    // agrees with component form

enum class CountConfig { kAllConflict, kAllStraight, kAsGiven };

const char* to_string(CountConfig config);

// Synthetic instance for counting/benchmarks: per-lane queues with spaced
// positions at cruise speed. kAllConflict puts straight traffic on lanes 1-2
// and left turns on lanes 3-4 so no opposite pair shares an intention;
// kAllStraight makes every vehicle straight.
Instance make_count_instance(const LaneSizes& per_lane, CountConfig config);

struct CountRow {
  LaneSizes per_lane{};
  CountConfig config = CountConfig::kAsGiven;
  std::uint64_t measured_states = 0;
  std::uint64_t formula_states = 0;
  std::uint64_t measured_transitions = 0;
  std::optional<std::uint64_t> formula_lower;  // absent when a lane is empty
  std::optional<std::uint64_t> formula_upper;
  std::vector<std::string> notes;  // flagged discrepancies and caveats
};

// Builds the instance for (per_lane, config), instruments the graph, and
// compares against the closed forms; discrepancies land in `notes`, never in
// exceptions. Equal-lane rows also cross-check the published polynomials and
// flag the lower polynomial's constant-term excess.
CountRow verify_counts(const LaneSizes& per_lane, CountConfig config);

// Same comparison for an existing instance (its intention pattern as given).
CountRow verify_counts_instance(const Instance& inst, CountConfig label);

// CSV with a versioned header comment; one row per report.
std::string count_rows_to_csv(const std::vector<CountRow>& rows);

}  // namespace crossflow
