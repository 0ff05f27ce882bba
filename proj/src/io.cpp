#include "crossflow/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace crossflow {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

double require_number(const json& obj, const std::string& context, const std::string& key) {
  if (!obj.contains(key))
    throw ParseError(context + ": missing field \"" + key + "\"");
  if (!obj.at(key).is_number())
    throw ParseError(context + ": field \"" + key + "\" must be a number");
  return obj.at(key).get<double>();
}

int require_integer(const json& obj, const std::string& context, const std::string& key) {
  if (!obj.contains(key))
    throw ParseError(context + ": missing field \"" + key + "\"");
  if (!obj.at(key).is_number_integer())
    throw ParseError(context + ": field \"" + key + "\" must be an integer");
  return obj.at(key).get<int>();
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
}

Intention intention_from_string(const std::string& value, const std::string& context) {
  if (value == "straight") return Intention::kStraight;
  if (value == "left") return Intention::kLeft;
  throw ParseError(context + ": field \"intention\" must be \"straight\" or \"left\", got \"" +
                   value + "\"");
}

}  // namespace

Instance instance_from_json(const std::string& text) {
  const json doc = parse_document(text);
  if (!doc.is_object()) throw ParseError("scenario: top level must be an object");

  Instance inst;
  if (doc.contains("safety")) {
    const json& safety = doc.at("safety");
    inst.safety.delta_t1 = require_number(safety, "safety", "delta_t1");
    inst.safety.delta_t2 = require_number(safety, "safety", "delta_t2");
  }
  if (doc.contains("kinematics")) {
    const json& kin = doc.at("kinematics");
    inst.kinematics.a_max = require_number(kin, "kinematics", "a_max");
    inst.kinematics.a_min = require_number(kin, "kinematics", "a_min");
    inst.kinematics.v_max = require_number(kin, "kinematics", "v_max");
    inst.kinematics.v_min = require_number(kin, "kinematics", "v_min");
    inst.kinematics.control_length = require_number(kin, "kinematics", "l_c");
  }

  if (doc.contains("lanes")) {
    const json& lanes = doc.at("lanes");
    if (!lanes.is_object()) throw ParseError("lanes: must be an object keyed by lane number");
    for (const auto& [key, entries] : lanes.items()) {
      if (key.size() != 1 || key[0] < '1' || key[0] > '4')
        throw ParseError("lanes: key \"" + key + "\" is not a lane in 1..4");
      const int lane = key[0] - '0';
      if (!entries.is_array())
        throw ParseError("lanes." + key + ": must be an array of vehicles");
      for (const json& entry : entries) {
        const std::string context = "lanes." + key + "[" + std::to_string(
            inst.lanes[lane - 1].size()) + "]";
        if (!entry.is_object()) throw ParseError(context + ": must be an object");
        Vehicle v;
        v.id = require_integer(entry, context, "id");
        v.lane = lane;
        v.slot = require_integer(entry, context, "slot");
        if (!entry.contains("intention") || !entry.at("intention").is_string())
          throw ParseError(context + ": field \"intention\" must be a string");
        v.intention = intention_from_string(entry.at("intention").get<std::string>(), context);
        v.distance_to_conflict = require_number(entry, context, "distance");
        v.speed = require_number(entry, context, "speed");
        inst.lanes[lane - 1].push_back(v);
      }
      // Files may list vehicles in any order; slots define the queue.
      std::sort(inst.lanes[lane - 1].begin(), inst.lanes[lane - 1].end(),
                [](const Vehicle& a, const Vehicle& b) { return a.slot < b.slot; });
    }
  }

  for (auto& lane : inst.lanes)
    for (Vehicle& v : lane)
      v.t_min = min_arrival_time(v.distance_to_conflict, v.speed, inst.kinematics);

  const ValidationReport report = validate_instance(inst);
  if (!report.ok()) throw ValidationError("scenario invalid:\n" + report.to_string());
  return inst;
}

std::string instance_to_json(const Instance& inst) {
  ordered_json doc;
  doc["safety"] = {{"delta_t1", inst.safety.delta_t1}, {"delta_t2", inst.safety.delta_t2}};
  doc["kinematics"] = {{"a_max", inst.kinematics.a_max},
                       {"a_min", inst.kinematics.a_min},
                       {"v_max", inst.kinematics.v_max},
                       {"v_min", inst.kinematics.v_min},
                       {"l_c", inst.kinematics.control_length}};
  ordered_json lanes = ordered_json::object();
  for (int lane = 1; lane <= kNumLanes; ++lane) {
    if (inst.lanes[lane - 1].empty()) continue;
    ordered_json entries = ordered_json::array();
    for (const Vehicle& v : inst.lanes[lane - 1]) {
      ordered_json entry;
      entry["id"] = v.id;
      entry["slot"] = v.slot;
      entry["intention"] = to_string(v.intention);
      entry["distance"] = v.distance_to_conflict;
      entry["speed"] = v.speed;
      entries.push_back(entry);
    }
    lanes[std::to_string(lane)] = entries;
  }
  doc["lanes"] = lanes;
  return doc.dump(2) + "\n";
}

Instance load_instance(const std::string& path) { return instance_from_json(read_file(path)); }

std::string schedule_to_json(const Schedule& schedule) {
  ordered_json doc;
  doc["makespan"] = schedule.makespan;
  ordered_json assignments = ordered_json::array();
  for (const Assignment& a : schedule.assignments) {
    ordered_json entry;
    entry["id"] = a.id;
    entry["lane"] = a.lane;
    entry["slot"] = a.slot;
    entry["t_assign"] = a.t_assign;
    assignments.push_back(entry);
  }
  doc["assignments"] = assignments;
  doc["sequence"] = schedule.sequence();
  return doc.dump(2) + "\n";
}

std::string schedule_to_csv(const Schedule& schedule) {
  std::ostringstream os;
  os << "# crossflow schedule v1\n";
  os << "# makespan," << format_double(schedule.makespan) << "\n";
  os << "id,lane,slot,t_assign\n";
  for (const Assignment& a : schedule.assignments)
    os << a.id << "," << a.lane << "," << a.slot << "," << format_double(a.t_assign) << "\n";
  return os.str();
}

SimConfig sim_config_from_json(const std::string& text) {
  const json doc = parse_document(text);
  if (!doc.is_object()) throw ParseError("sim config: top level must be an object");
  SimConfig config;
  if (doc.contains("lambda")) config.lambda = require_number(doc, "sim config", "lambda");
  if (doc.contains("duration")) config.duration = require_number(doc, "sim config", "duration");
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned() && !doc.at("seed").is_number_integer())
      throw ParseError("sim config: field \"seed\" must be an integer");
    config.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("straight_fraction"))
    config.straight_fraction = require_number(doc, "sim config", "straight_fraction");
  if (doc.contains("dt")) config.dt = require_number(doc, "sim config", "dt");
  if (doc.contains("strategy")) {
    if (!doc.at("strategy").is_string())
      throw ParseError("sim config: field \"strategy\" must be a string");
    const std::string name = doc.at("strategy").get<std::string>();
    if (name == "dp")
      config.strategy = Strategy::kDp;
    else if (name == "fifo")
      config.strategy = Strategy::kFifo;
    else
      throw ParseError("sim config: unknown strategy \"" + name + "\" (want \"dp\" or \"fifo\")");
  }
  if (doc.contains("safety")) {
    const json& safety = doc.at("safety");
    config.safety.delta_t1 = require_number(safety, "sim config safety", "delta_t1");
    config.safety.delta_t2 = require_number(safety, "sim config safety", "delta_t2");
  }
  if (doc.contains("kinematics")) {
    const json& kin = doc.at("kinematics");
    config.kinematics.a_max = require_number(kin, "sim config kinematics", "a_max");
    config.kinematics.a_min = require_number(kin, "sim config kinematics", "a_min");
    config.kinematics.v_max = require_number(kin, "sim config kinematics", "v_max");
    config.kinematics.v_min = require_number(kin, "sim config kinematics", "v_min");
    config.kinematics.control_length = require_number(kin, "sim config kinematics", "l_c");
  }
  return config;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

}  // namespace crossflow
