#include "crossflow/counting.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "crossflow/solver.hpp"

namespace crossflow {

namespace {

std::uint64_t u(int v) { return static_cast<std::uint64_t>(v); }

void require_nonempty(const LaneSizes& n, const char* where) {
  for (int lane = 0; lane < kNumLanes; ++lane)
    if (n[lane] < 1) throw std::invalid_argument(std::string(where) + ": empty lane");
}

// Per-lane infeasible-transition sum: the role lane k contributes its raw
// count, every other lane its count + 1.
std::uint64_t infeasible_sum(const LaneSizes& n, int k) {
  std::uint64_t total = 1;
  for (int j = 0; j < kNumLanes; ++j)
    if (j != k) total *= u(n[j]) + 1;
  for (int j = 0; j < kNumLanes; ++j) {
    if (j == k) continue;
    std::uint64_t prod = u(n[k]);
    for (int i = 0; i < kNumLanes; ++i)
      if (i != k && i != j) prod *= u(n[i]) + 1;
    total += prod;
  }
  return total;
}

}  // namespace

std::uint64_t states_closed_form(const LaneSizes& n) {
  for (int v : n)
    if (v < 0) throw std::invalid_argument("states_closed_form: negative lane size");
  std::uint64_t quads = 1, triples = 0, pairs = 0, singles = 0;
  for (int i = 0; i < kNumLanes; ++i) {
    quads *= u(n[i]);
    singles += u(n[i]);
    std::uint64_t triple = 1;
    for (int j = 0; j < kNumLanes; ++j)
      if (j != i) triple *= u(n[j]);
    triples += triple;
    for (int j = i + 1; j < kNumLanes; ++j) pairs += u(n[i]) * u(n[j]);
  }
  return 4 * quads + 3 * triples + 2 * pairs + singles + 1;
}

std::uint64_t transitions_lower_closed_form(const LaneSizes& n) {
  require_nonempty(n, "transitions_lower_closed_form");
  std::uint64_t infeasible = 0;
  for (int k = 0; k < kNumLanes; ++k) infeasible += infeasible_sum(n, k);
  return 4 * (states_closed_form(n) - 1) - infeasible + 4;
}

std::uint64_t transitions_upper_closed_form(const LaneSizes& n) {
  require_nonempty(n, "transitions_upper_closed_form");
  const std::uint64_t n1 = u(n[0]), n2 = u(n[1]), n3 = u(n[2]), n4 = u(n[3]);
  const std::uint64_t removed =
      2 * n1 * n3 * (n2 + 1) * (n4 + 1) + 2 * n2 * n4 * (n1 + 1) * (n3 + 1);
  const std::uint64_t reproduced =
      (2 * n2 * n4 + n2 + n4) * (n1 * (n1 + 1) * n3 * (n3 + 1) / 4) +
      (2 * n1 * n3 + n1 + n3) * (n2 * (n2 + 1) * n4 * (n4 + 1) / 4) +
      2 * n1 * n3 + 2 * n2 * n4;
  return transitions_lower_closed_form(n) - removed + reproduced;
}

namespace {

std::uint64_t quarter(int total, const char* where) {
  if (total < 0 || total % kNumLanes != 0)
    throw std::invalid_argument(std::string(where) + ": total must be divisible by 4");
  return static_cast<std::uint64_t>(total / kNumLanes);
}

}  // namespace

std::uint64_t states_polynomial(int total) {
  const std::uint64_t m = quarter(total, "states_polynomial");
  return 4 * m * m * m * m + 12 * m * m * m + 12 * m * m + 4 * m + 1;
}

std::int64_t transitions_lower_polynomial(int total) {
  const auto m = static_cast<std::int64_t>(quarter(total, "transitions_lower_polynomial"));
  return 16 * m * m * m * m + 32 * m * m * m + 12 * m * m - 8 * m + 4;
}

std::int64_t transitions_upper_polynomial(int total) {
  const auto m = static_cast<std::int64_t>(quarter(total, "transitions_upper_polynomial"));
  return m * m * m * m * m * m + 3 * m * m * m * m * m + 15 * m * m * m * m +
         25 * m * m * m + 12 * m * m - 8 * m;
}

const char* to_string(CountConfig config) {
  switch (config) {
    case CountConfig::kAllConflict: return "all_conflict";
    case CountConfig::kAllStraight: return "all_straight";
    case CountConfig::kAsGiven: return "as_given";
  }
  return "unknown";
}

Instance make_count_instance(const LaneSizes& per_lane, CountConfig config) {
  if (config == CountConfig::kAsGiven)
    throw std::invalid_argument("make_count_instance: needs a concrete intention pattern");
  Instance inst;
  const double spacing = 20.0;
  int id = 0;
  const int max_slots = std::max(std::max(per_lane[0], per_lane[1]),
                                 std::max(per_lane[2], per_lane[3]));
  for (int slot = 1; slot <= max_slots; ++slot) {
    for (int lane = 1; lane <= kNumLanes; ++lane) {
      if (slot > per_lane[lane - 1]) continue;
      Vehicle v;
      v.id = ++id;
      v.lane = lane;
      v.slot = slot;
      v.intention = (config == CountConfig::kAllConflict && lane >= 3) ? Intention::kLeft
                                                                       : Intention::kStraight;
      v.distance_to_conflict = spacing * slot;
      v.speed = inst.kinematics.v_max;
      v.t_min = min_arrival_time(v.distance_to_conflict, v.speed, inst.kinematics);
      inst.lanes[lane - 1].push_back(v);
    }
  }
  return inst;
}

namespace {

CountRow build_row(const Instance& inst, const LaneSizes& per_lane, CountConfig config) {
  CountRow row;
  row.per_lane = per_lane;
  row.config = config;
  row.formula_states = states_closed_form(per_lane);

  const CountSummary measured = instrument_counts(inst);
  row.measured_states = measured.num_states;
  row.measured_transitions = measured.num_transitions;

  if (row.measured_states != row.formula_states)
    row.notes.push_back("states: measured " + std::to_string(row.measured_states) +
                        " differs from formula " + std::to_string(row.formula_states));

  bool any_empty = false;
  for (int v : per_lane) any_empty |= (v == 0);
  if (any_empty) {
    row.notes.push_back("transition formulas need nonempty lanes; measured only");
    row.notes.push_back("states formula extrapolated to empty lanes");
    return row;
  }

  row.formula_lower = transitions_lower_closed_form(per_lane);
  row.formula_upper = transitions_upper_closed_form(per_lane);

  if (config == CountConfig::kAllConflict && row.measured_transitions != *row.formula_lower)
    row.notes.push_back("all-conflict transitions: measured " +
                        std::to_string(row.measured_transitions) + " differs from lower form " +
                        std::to_string(*row.formula_lower));
  if (config == CountConfig::kAllStraight && row.measured_transitions != *row.formula_upper)
    row.notes.push_back("all-straight transitions: measured " +
                        std::to_string(row.measured_transitions) + " differs from upper form " +
                        std::to_string(*row.formula_upper));

  const bool equal_lanes = per_lane[0] == per_lane[1] && per_lane[1] == per_lane[2] &&
                           per_lane[2] == per_lane[3];
  if (equal_lanes) {
    const int total = 4 * per_lane[0];
    if (states_polynomial(total) != row.formula_states)
      row.notes.push_back("published state polynomial disagrees with component form");
    const std::int64_t lower_poly = transitions_lower_polynomial(total);
    const std::int64_t lower_delta =
        lower_poly - static_cast<std::int64_t>(*row.formula_lower);
    if (lower_delta != 0)
      row.notes.push_back("published lower polynomial off by " + std::to_string(lower_delta) +
                          " (" + std::to_string(lower_poly) + " vs component " +
                          std::to_string(*row.formula_lower) + ")");
    const std::int64_t upper_poly = transitions_upper_polynomial(total);
    if (upper_poly != static_cast<std::int64_t>(*row.formula_upper))
      row.notes.push_back("published upper polynomial disagrees with component form");
  }
  return row;
}

}  // namespace

CountRow verify_counts(const LaneSizes& per_lane, CountConfig config) {
  return build_row(make_count_instance(per_lane, config), per_lane, config);
}

CountRow verify_counts_instance(const Instance& inst, CountConfig label) {
  LaneSizes per_lane;
  for (int lane = 1; lane <= kNumLanes; ++lane) per_lane[lane - 1] = inst.lane_count(lane);
  return build_row(inst, per_lane, label);
}

std::string count_rows_to_csv(const std::vector<CountRow>& rows) {
  std::ostringstream os;
  os << "# crossflow counts v1\n";
  os << "n1,n2,n3,n4,config,measured_states,formula_states,measured_transitions,"
        "formula_lower,formula_upper,notes\n";
  for (const CountRow& row : rows) {
    for (int v : row.per_lane) os << v << ",";
    os << to_string(row.config) << "," << row.measured_states << "," << row.formula_states << ","
       << row.measured_transitions << ",";
    if (row.formula_lower) os << *row.formula_lower;
    os << ",";
    if (row.formula_upper) os << *row.formula_upper;
    os << ",";
    for (std::size_t i = 0; i < row.notes.size(); ++i) {
      if (i > 0) os << "; ";
      os << row.notes[i];
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace crossflow
