#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ebsched/runtime/run.hpp"
#include "ebsched/verify/patterns.hpp"

namespace ebsched::cli {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// Boolean variables become JSON booleans, ranges integers and
/// enumerations their literal.
json value_json(const kernel::Variable& v, kernel::Value x);
/// {var: value} for a state; post-state variables get a trailing '.
json state_json(const kernel::StateSpace& space, kernel::StateIndex s, const std::string& suffix = {});
json witness_json(const kernel::Verdict& v, const kernel::Witness& w);
json obligation_json(const verify::Obligation& o);

/// One trace step per element: {step, task, event, state}.
json trace_json(const runtime::TaskSystem& sys, const runtime::RunResult& r);

/// Report document shared by all commands.
struct Report {
  json doc;

  Report(const std::string& command, const std::string& model_path, const std::string& digest);
  void add(const verify::Obligation& o);
  void add(const std::vector<verify::Obligation>& os);
  json& summary(const std::string& key) { return doc["summaries"][key]; }
  void finish(int exit_status) { doc["exit_status"] = exit_status; }
};

/// Writes next to the target and renames, so readers never see a partial
/// file. Throws Error on I/O failure.
void write_atomically(const std::string& path, const std::string& content);

}  // namespace ebsched::cli
