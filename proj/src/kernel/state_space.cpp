#include "ebsched/kernel/state_space.hpp"

#include <set>
#include <sstream>

#include "ebsched/error.hpp"

namespace ebsched::kernel {

Domain Domain::range(Value lo, Value hi) {
  if (hi < lo) throw ModelError("empty range " + std::to_string(lo) + ".." + std::to_string(hi));
  Domain d;
  d.kind = Kind::Range;
  d.lo = lo;
  d.hi = hi;
  return d;
}

Domain Domain::enumeration(std::vector<std::string> literals) {
  if (literals.empty()) throw ModelError("empty enumeration");
  Domain d;
  d.kind = Kind::Enumeration;
  d.lo = 0;
  d.hi = static_cast<Value>(literals.size()) - 1;
  d.literals = std::move(literals);
  return d;
}

std::string Domain::format(Value v) const {
  switch (kind) {
    case Kind::Boolean:
      return v ? "TRUE" : "FALSE";
    case Kind::Range:
      return std::to_string(v);
    case Kind::Enumeration:
      return literals.at(static_cast<std::size_t>(v));
  }
  return {};
}

std::string Domain::to_string() const {
  switch (kind) {
    case Kind::Boolean:
      return "BOOL";
    case Kind::Range:
      return std::to_string(lo) + ".." + std::to_string(hi);
    case Kind::Enumeration: {
      std::string s = "{";
      for (std::size_t i = 0; i < literals.size(); ++i) s += (i ? ", " : "") + literals[i];
      return s + "}";
    }
  }
  return {};
}

SpacePtr StateSpace::make(std::vector<Variable> vars, std::uint64_t cap) {
  std::set<std::string> seen;
  for (const auto& v : vars)
    if (!seen.insert(v.name).second) throw ModelError("duplicate variable '" + v.name + "'");
  auto sp = std::shared_ptr<StateSpace>(new StateSpace());
  sp->strides_.assign(vars.size(), 1);
  std::uint64_t size = 1;
  for (std::size_t i = vars.size(); i-- > 0;) {
    sp->strides_[i] = size;
    size *= vars[i].domain.size();
    if (size > cap)
      throw LimitExceeded("state space exceeds cap of " + std::to_string(cap) + " states");
  }
  sp->size_ = size;
  sp->vars_ = std::move(vars);
  return sp;
}

std::optional<std::size_t> StateSpace::find(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name == name) return i;
  return std::nullopt;
}

StateIndex StateSpace::encode(std::span<const Value> values) const {
  std::uint64_t idx = 0;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    idx += static_cast<std::uint64_t>(values[i] - vars_[i].domain.lo) * strides_[i];
  return static_cast<StateIndex>(idx);
}

std::vector<Value> StateSpace::decode(StateIndex s) const {
  std::vector<Value> out(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) out[i] = value_of(s, i);
  return out;
}

Value StateSpace::value_of(StateIndex s, std::size_t var) const {
  const auto& d = vars_[var].domain;
  return d.lo + static_cast<Value>((s / strides_[var]) % d.size());
}

StateIndex StateSpace::with_value(StateIndex s, std::size_t var, Value v) const {
  const auto& d = vars_[var].domain;
  auto old = static_cast<std::uint64_t>(value_of(s, var) - d.lo);
  auto neu = static_cast<std::uint64_t>(v - d.lo);
  return static_cast<StateIndex>(s - old * strides_[var] + neu * strides_[var]);
}

std::string StateSpace::format(StateIndex s) const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (i) os << ',';
    os << vars_[i].name << '=' << vars_[i].domain.format(value_of(s, i));
  }
  os << '}';
  return os.str();
}

Projection::Projection(SpacePtr from, SpacePtr to) : from_(std::move(from)), to_(std::move(to)) {
  std::vector<bool> used(from_->variables().size(), false);
  for (const auto& v : to_->variables()) {
    auto idx = from_->find(v.name);
    if (!idx) throw ModelError("projection target variable '" + v.name + "' missing in source");
    if (!(from_->variables()[*idx].domain == v.domain))
      throw ModelError("domain conflict for variable '" + v.name + "'");
    map_.push_back(*idx);
    used[*idx] = true;
  }
  for (std::size_t i = 0; i < used.size(); ++i)
    if (!used[i]) hidden_.push_back(i);
}

StateIndex Projection::operator()(StateIndex s) const {
  std::vector<Value> vals(map_.size());
  for (std::size_t i = 0; i < map_.size(); ++i) vals[i] = from_->value_of(s, map_[i]);
  return to_->encode(vals);
}

void require_same_space(const SpacePtr& a, const SpacePtr& b) {
  if (!a || !b || !a->same_as(*b)) throw SpaceMismatch("operands belong to different state spaces");
}

}  // namespace ebsched::kernel
