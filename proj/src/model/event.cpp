#include "ebsched/model/event.hpp"

#include <algorithm>

#include "ebsched/error.hpp"

namespace ebsched::model {

const char* to_string(Convergence c) {
  switch (c) {
    case Convergence::Ordinary:
      return "ordinary";
    case Convergence::Convergent:
      return "convergent";
    case Convergence::Anticipated:
      return "anticipated";
  }
  return "ordinary";
}

std::string Action::to_string() const {
  std::string lhs;
  for (std::size_t i = 0; i < targets.size(); ++i) lhs += (i ? ", " : "") + targets[i];
  switch (kind) {
    case Kind::Becomes:
      return lhs + " := " + model::to_string(expr);
    case Kind::ChooseIn: {
      // Stored as "x in S"; print the set part only.
      std::string whole = model::to_string(expr);
      auto at = whole.find(" in ");
      return lhs + " :: " + whole.substr(at + 4);
    }
    case Kind::Such:
      return lhs + " :| " + model::to_string(expr);
  }
  return lhs;
}

ExprPtr Event::guard() const {
  std::vector<ExprPtr> parts;
  for (const auto& g : guards) parts.push_back(g.expr);
  return conjoin(parts);
}

std::vector<std::string> Event::written() const {
  std::vector<std::string> out;
  for (const auto& a : actions) out.insert(out.end(), a.targets.begin(), a.targets.end());
  return out;
}

std::set<std::string> Event::mentioned() const {
  std::set<std::string> names, primed;
  for (const auto& g : guards) collect_names(*g.expr, names, primed);
  for (const auto& a : actions) {
    collect_names(*a.expr, names, primed);
    names.insert(a.targets.begin(), a.targets.end());
  }
  names.insert(primed.begin(), primed.end());
  return names;
}

std::set<std::string> Event::read() const {
  std::set<std::string> names, primed;
  for (const auto& g : guards) collect_names(*g.expr, names, primed);
  for (const auto& a : actions) {
    std::set<std::string> used;
    collect_names(*a.expr, used, primed);
    if (a.kind == Action::Kind::ChooseIn)
      for (const auto& t : a.targets) used.erase(t);
    names.insert(used.begin(), used.end());
  }
  return names;
}

Event compose_events(const Event& a, const Event& b, const std::string& name) {
  Event out;
  out.name = name.empty() ? a.name : name;
  out.convergence = a.convergence;
  out.guards = a.guards;
  for (const auto& g : b.guards) {
    bool dup = std::any_of(out.guards.begin(), out.guards.end(),
                           [&](const Labelled& l) { return to_string(l.expr) == to_string(g.expr); });
    if (!dup) out.guards.push_back(g);
  }
  out.actions = a.actions;
  for (const auto& act : b.actions) {
    const std::string text = act.to_string();
    bool same = false;
    for (const auto& mine : out.actions) {
      if (mine.to_string() == text) {
        same = true;
        break;
      }
      for (const auto& t : act.targets)
        if (std::find(mine.targets.begin(), mine.targets.end(), t) != mine.targets.end())
          throw ModelError("events " + a.name + " and " + b.name + " both write " + t);
    }
    if (!same) out.actions.push_back(act);
  }
  return out;
}

}  // namespace ebsched::model
