// C shim over the scheduler library: opaque handles wrap the C++ types, and
// every entry point funnels exceptions into status codes plus a thread-local
// error message.
#include "crossflow/capi.h"

#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "crossflow/baselines.hpp"
#include "crossflow/counting.hpp"
#include "crossflow/io.hpp"
#include "crossflow/model.hpp"
#include "crossflow/random_instance.hpp"
#include "crossflow/schedule.hpp"
#include "crossflow/sim.hpp"
#include "crossflow/solver.hpp"
#include "crossflow/sweeps.hpp"

struct cf_instance {
  crossflow::Instance value;
};

struct cf_schedule {
  crossflow::Schedule value;
};

namespace {

thread_local std::string t_error;

cf_status fail(cf_status status, const std::string& message) {
  t_error = message;
  return status;
}

// Runs the body and maps exceptions onto status codes. Successes leave the
// previous failure message in place, per the header contract.
template <typename Fn>
cf_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const crossflow::ParseError& e) {
    return fail(CF_ERROR_PARSE, e.what());
  } catch (const crossflow::ValidationError& e) {
    return fail(CF_ERROR_VALIDATION, e.what());
  } catch (const std::length_error& e) {
    return fail(CF_ERROR_UNSUPPORTED, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(CF_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(CF_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(CF_ERROR_INTERNAL, "unrecognized failure");
  }
}

char* dup_string(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

nlohmann::json parse_object(const char* text, const char* what) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw crossflow::ParseError(std::string(what) + ": " + e.what());
  }
  if (!doc.is_object()) throw crossflow::ParseError(std::string(what) + ": expected a JSON object");
  return doc;
}

int int_field(const nlohmann::json& doc, const char* name, int fallback) {
  if (!doc.contains(name)) return fallback;
  const auto& value = doc.at(name);
  if (!value.is_number_integer())
    throw crossflow::ParseError(std::string("field ") + name + ": expected an integer");
  return value.get<int>();
}

double number_field(const nlohmann::json& doc, const char* name, double fallback) {
  if (!doc.contains(name)) return fallback;
  const auto& value = doc.at(name);
  if (!value.is_number())
    throw crossflow::ParseError(std::string("field ") + name + ": expected a number");
  return value.get<double>();
}

}  // namespace

extern "C" {

const char* cf_last_error_message(void) { return t_error.c_str(); }

cf_status cf_instance_from_json(const char* json_text, cf_instance** out) {
  return guarded([&]() -> cf_status {
    if (json_text == nullptr || out == nullptr)
      return fail(CF_ERROR_INVALID_ARGUMENT, "cf_instance_from_json: null argument");
    auto handle = new cf_instance{crossflow::instance_from_json(json_text)};
    *out = handle;
    return CF_OK;
  });
}

cf_status cf_instance_random(uint64_t seed, int num_vehicles, cf_instance** out) {
  return guarded([&]() -> cf_status {
    if (out == nullptr) return fail(CF_ERROR_INVALID_ARGUMENT, "cf_instance_random: null output");
    crossflow::RandomInstanceOptions opts;
    opts.num_vehicles = num_vehicles;
    auto handle = new cf_instance{crossflow::random_instance(seed, opts)};
    *out = handle;
    return CF_OK;
  });
}

cf_status cf_instance_to_json(const cf_instance* inst, char** out) {
  return guarded([&]() -> cf_status {
    if (inst == nullptr || out == nullptr)
      return fail(CF_ERROR_INVALID_ARGUMENT, "cf_instance_to_json: null argument");
    *out = dup_string(crossflow::instance_to_json(inst->value));
    return CF_OK;
  });
}

cf_status cf_instance_lane_counts(const cf_instance* inst, int per_lane[4]) {
  return guarded([&]() -> cf_status {
    if (inst == nullptr || per_lane == nullptr)
      return fail(CF_ERROR_INVALID_ARGUMENT, "cf_instance_lane_counts: null argument");
    for (int lane = 0; lane < crossflow::kNumLanes; ++lane)
      per_lane[lane] = static_cast<int>(inst->value.lanes[lane].size());
    return CF_OK;
  });
}

void cf_instance_free(cf_instance* inst) { delete inst; }

cf_status cf_solve(const cf_instance* inst, const char* strategy, cf_schedule** out) {
  return guarded([&]() -> cf_status {
    if (inst == nullptr || strategy == nullptr || out == nullptr)
      return fail(CF_ERROR_INVALID_ARGUMENT, "cf_solve: null argument");
    crossflow::Schedule schedule;
    const std::string name = strategy;
    if (name == "dp") {
      schedule = crossflow::solve(inst->value);
    } else if (name == "fifo") {
      schedule = crossflow::fifo_schedule(inst->value);
    } else if (name == "enum") {
      schedule = crossflow::enumerate_optimal(inst->value);
    } else {
      return fail(CF_ERROR_INVALID_ARGUMENT, "cf_solve: unknown strategy \"" + name + "\"");
    }
    *out = new cf_schedule{std::move(schedule)};
    return CF_OK;
  });
}

cf_status cf_schedule_makespan(const cf_schedule* schedule, double* out) {
  return guarded([&]() -> cf_status {
    if (schedule == nullptr || out == nullptr)
      return fail(CF_ERROR_INVALID_ARGUMENT, "cf_schedule_makespan: null argument");
    *out = schedule->value.makespan;
    return CF_OK;
  });
}

cf_status cf_schedule_to_json(const cf_schedule* schedule, char** out) {
  return guarded([&]() -> cf_status {
    if (schedule == nullptr || out == nullptr)
      return fail(CF_ERROR_INVALID_ARGUMENT, "cf_schedule_to_json: null argument");
    *out = dup_string(crossflow::schedule_to_json(schedule->value));
    return CF_OK;
  });
}

cf_status cf_schedule_to_csv(const cf_schedule* schedule, char** out) {
  return guarded([&]() -> cf_status {
    if (schedule == nullptr || out == nullptr)
      return fail(CF_ERROR_INVALID_ARGUMENT, "cf_schedule_to_csv: null argument");
    *out = dup_string(crossflow::schedule_to_csv(schedule->value));
    return CF_OK;
  });
}

cf_status cf_schedule_validate(const cf_schedule* schedule, const cf_instance* inst,
                               int* violations, char** report_out) {
  return guarded([&]() -> cf_status {
    if (schedule == nullptr || inst == nullptr || violations == nullptr)
      return fail(CF_ERROR_INVALID_ARGUMENT, "cf_schedule_validate: null argument");
    const crossflow::ScheduleCheck check =
        crossflow::validate_schedule(schedule->value, inst->value);
    *violations = static_cast<int>(check.violations.size());
    if (report_out != nullptr) *report_out = dup_string(check.to_string());
    return CF_OK;
  });
}

void cf_schedule_free(cf_schedule* schedule) { delete schedule; }

cf_status cf_verify_counts(const int per_lane[4], const char* config, char** csv_out) {
  return guarded([&]() -> cf_status {
    if (per_lane == nullptr || config == nullptr || csv_out == nullptr)
      return fail(CF_ERROR_INVALID_ARGUMENT, "cf_verify_counts: null argument");
    const std::string name = config;
    crossflow::CountConfig parsed;
    if (name == "all_conflict") {
      parsed = crossflow::CountConfig::kAllConflict;
    } else if (name == "all_straight") {
      parsed = crossflow::CountConfig::kAllStraight;
    } else {
      return fail(CF_ERROR_INVALID_ARGUMENT,
                  "cf_verify_counts: unknown config \"" + name + "\"");
    }
    crossflow::LaneSizes sizes{};
    for (int lane = 0; lane < crossflow::kNumLanes; ++lane) {
      if (per_lane[lane] < 0)
        return fail(CF_ERROR_INVALID_ARGUMENT, "cf_verify_counts: negative lane size");
      sizes[static_cast<std::size_t>(lane)] = per_lane[lane];
    }
    const crossflow::CountRow row = crossflow::verify_counts(sizes, parsed);
    *csv_out = dup_string(crossflow::count_rows_to_csv({row}));
    return CF_OK;
  });
}

cf_status cf_simulate(const char* config_json, char** metrics_json_out, char** log_csv_out,
                      char** timings_json_out) {
  return guarded([&]() -> cf_status {
    if (config_json == nullptr || metrics_json_out == nullptr)
      return fail(CF_ERROR_INVALID_ARGUMENT, "cf_simulate: null argument");
    const crossflow::SimConfig config = crossflow::sim_config_from_json(config_json);
    const crossflow::SimResult result = crossflow::run_simulation(config);
    *metrics_json_out = dup_string(crossflow::metrics_to_json(config, result.metrics));
    if (log_csv_out != nullptr) *log_csv_out = dup_string(result.log_csv);
    if (timings_json_out != nullptr)
      *timings_json_out = dup_string(crossflow::timings_to_json(result.metrics));
    return CF_OK;
  });
}

cf_status cf_compare(const char* spec_json, char** csv_out, char** timings_csv_out) {
  return guarded([&]() -> cf_status {
    if (spec_json == nullptr || csv_out == nullptr)
      return fail(CF_ERROR_INVALID_ARGUMENT, "cf_compare: null argument");
    const nlohmann::json doc = parse_object(spec_json, "comparison spec");
    crossflow::CompareSpec spec;
    spec.n_min = int_field(doc, "n_min", spec.n_min);
    spec.n_max = int_field(doc, "n_max", spec.n_max);
    spec.seeds = int_field(doc, "seeds", spec.seeds);
    spec.enum_cap = int_field(doc, "enum_cap", spec.enum_cap);
    spec.straight_fraction = number_field(doc, "straight_fraction", spec.straight_fraction);
    if (doc.contains("seed_base")) {
      const auto& value = doc.at("seed_base");
      if (!value.is_number_integer() || value.get<std::int64_t>() < 0)
        throw crossflow::ParseError("field seed_base: expected a non-negative integer");
      spec.seed_base = value.get<std::uint64_t>();
    }
    const crossflow::CompareResult result = crossflow::run_compare(spec);
    *csv_out = dup_string(crossflow::compare_to_csv(result));
    if (timings_csv_out != nullptr)
      *timings_csv_out = dup_string(crossflow::compare_timings_to_csv(result));
    return CF_OK;
  });
}

cf_status cf_bench(const char* spec_json, char** csv_out) {
  return guarded([&]() -> cf_status {
    if (spec_json == nullptr || csv_out == nullptr)
      return fail(CF_ERROR_INVALID_ARGUMENT, "cf_bench: null argument");
    const nlohmann::json doc = parse_object(spec_json, "benchmark spec");
    crossflow::BenchSpec spec;
    if (doc.contains("totals")) {
      const auto& totals = doc.at("totals");
      if (!totals.is_array())
        throw crossflow::ParseError("field totals: expected an array of integers");
      for (const auto& value : totals) {
        if (!value.is_number_integer())
          throw crossflow::ParseError("field totals: expected an array of integers");
        spec.totals.push_back(value.get<int>());
      }
    }
    spec.reps = int_field(doc, "reps", spec.reps);
    const crossflow::BenchResult result = crossflow::run_bench(spec);
    *csv_out = dup_string(crossflow::bench_to_csv(result));
    return CF_OK;
  });
}

void cf_string_free(char* s) { std::free(s); }

}  // extern "C"
