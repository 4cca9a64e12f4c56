#include "ebsched/model/machine.hpp"

#include "ebsched/error.hpp"

namespace ebsched::model {

const Event* Machine::find_event(const std::string& n) const {
  for (const auto& e : events)
    if (e.name == n) return &e;
  return nullptr;
}

const kernel::Variable* Machine::find_variable(const std::string& n) const {
  for (const auto& v : variables)
    if (v.name == n) return &v;
  return nullptr;
}

Scope Machine::scope(kernel::SpacePtr sp) const {
  Scope s;
  s.space = std::move(sp);
  for (const auto& [k, v] : constants) s.constants[k] = v;
  for (const auto& t : tables) s.tables[t.name] = t;
  return s;
}

kernel::SpacePtr Machine::space(std::uint64_t cap) const {
  return kernel::StateSpace::make(variables, cap);
}

kernel::SpacePtr Machine::space_over(const std::set<std::string>& names, std::uint64_t cap) const {
  std::vector<kernel::Variable> vars;
  for (const auto& v : variables)
    if (names.count(v.name)) vars.push_back(v);
  for (const auto& n : names)
    if (!find_variable(n)) throw ModelError("unknown variable " + n);
  return kernel::StateSpace::make(std::move(vars), cap);
}

}  // namespace ebsched::model
