#include "ebsched/cli/report.hpp"

#include <filesystem>
#include <fstream>

#include "ebsched/error.hpp"

namespace ebsched::cli {

json value_json(const kernel::Variable& v, kernel::Value x) {
  switch (v.domain.kind) {
    case kernel::Domain::Kind::Boolean: return x != 0;
    case kernel::Domain::Kind::Range: return x;
    case kernel::Domain::Kind::Enumeration: return v.domain.format(x);
  }
  return x;
}

json state_json(const kernel::StateSpace& space, kernel::StateIndex s, const std::string& suffix) {
  json out = json::object();
  const auto values = space.decode(s);
  const auto& vars = space.variables();
  for (std::size_t i = 0; i < vars.size(); ++i) out[vars[i].name + suffix] = value_json(vars[i], values[i]);
  return out;
}

json witness_json(const kernel::Verdict& v, const kernel::Witness& w) {
  if (!v.space) return json::object();
  json out = state_json(*v.space, w.state);
  if (w.post) out.update(state_json(*v.space, *w.post, "'"));
  return out;
}

json obligation_json(const verify::Obligation& o) {
  json ws = json::array();
  for (const auto& w : o.verdict.witnesses) ws.push_back(witness_json(o.verdict, w));
  json out{{"id", o.id},
           {"description", o.description},
           {"status", o.pass() ? "pass" : "fail"},
           {"witnesses", ws},
           {"millis", o.millis}};
  if (!o.pass()) out["message"] = o.verdict.message;
  return out;
}

json trace_json(const runtime::TaskSystem& sys, const runtime::RunResult& r) {
  json out = json::array();
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    const auto& s = r.trace[i];
    out.push_back({{"step", i + 1},
                   {"task", sys.tasks[static_cast<std::size_t>(s.task)].name},
                   {"event", sys.el->events[static_cast<std::size_t>(s.event)].name},
                   {"state", state_json(*sys.el->space, s.pre)}});
  }
  return out;
}

Report::Report(const std::string& command, const std::string& model_path, const std::string& digest) {
  doc = {{"schema_version", kSchemaVersion},
         {"tool", "ebsched"},
         {"version", kToolVersion},
         {"command", command},
         {"model", model_path},
         {"digest", digest},
         {"obligations", json::array()},
         {"summaries", json::object()},
         {"exit_status", nullptr}};
}

void Report::add(const verify::Obligation& o) { doc["obligations"].push_back(obligation_json(o)); }

void Report::add(const std::vector<verify::Obligation>& os) {
  for (const auto& o : os) add(o);
}

void write_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot replace " + path + ": " + ec.message());
  }
}

}  // namespace ebsched::cli
