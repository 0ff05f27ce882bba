// JSON/CSV ingestion and persistence: scenario files, schedules, and
// simulation configs. Parsing failures carry field names and positions;
// serialization is byte-stable for golden-file comparisons.
#pragma once

#include <stdexcept>
#include <string>

#include "crossflow/model.hpp"
#include "crossflow/schedule.hpp"
#include "crossflow/sim.hpp"

namespace crossflow {

// Malformed or type-mismatched input; the message names the offending field
// or position.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structurally sound input that fails instance invariants; the message is the
// validation report.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scenario document: {"safety": {...}, "kinematics": {...}, "lanes": {"1":
// [{"id","slot","intention","distance","speed"}, ...], ...}}. Earliest
// arrival times are always recomputed from distance and speed, never read.
// Throws ParseError or ValidationError.
Instance instance_from_json(const std::string& text);
std::string instance_to_json(const Instance& inst);

// read_file + instance_from_json; file errors surface as ParseError.
Instance load_instance(const std::string& path);

// {"makespan": ..., "assignments": [...id-ascending...], "sequence": [...]}.
std::string schedule_to_json(const Schedule& schedule);
// Versioned header comment, makespan comment, then id,lane,slot,t_assign rows.
std::string schedule_to_csv(const Schedule& schedule);

// Simulation config document; absent fields keep SimConfig defaults. Throws
// ParseError on malformed input or unknown strategy names.
SimConfig sim_config_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Shortest round-trip decimal form of a double (to_chars), used by every CSV
// writer so numeric cells are byte-stable and exact.
std::string format_double(double value);

}  // namespace crossflow
