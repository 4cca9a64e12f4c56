#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ebsched/kernel/bits.hpp"

namespace ebsched::kernel {

using Value = std::int64_t;

/// Finite value domain of one state variable. Booleans are 0/1, enumeration
/// literals are their position in `literals`.
struct Domain {
  enum class Kind { Boolean, Range, Enumeration };

  Kind kind = Kind::Boolean;
  Value lo = 0;
  Value hi = 1;
  std::vector<std::string> literals;

  static Domain boolean() { return {}; }
  static Domain range(Value lo, Value hi);
  static Domain enumeration(std::vector<std::string> literals);

  std::uint64_t size() const { return static_cast<std::uint64_t>(hi - lo + 1); }
  bool contains(Value v) const { return v >= lo && v <= hi; }
  std::string format(Value v) const;
  /// Concrete syntax: BOOL, lo..hi or {a, b}.
  std::string to_string() const;

  bool operator==(const Domain& o) const = default;
};

struct Variable {
  std::string name;
  Domain domain;

  bool operator==(const Variable& o) const = default;
};

class StateSpace;
using SpacePtr = std::shared_ptr<const StateSpace>;

/// Ordered finite-domain variables. A state is one total valuation, encoded
/// in mixed radix with the first variable most significant.
class StateSpace {
 public:
  static constexpr std::uint64_t kDefaultCap = std::uint64_t{1} << 24;

  static SpacePtr make(std::vector<Variable> vars, std::uint64_t cap = kDefaultCap);

  std::size_t size() const { return static_cast<std::size_t>(size_); }
  const std::vector<Variable>& variables() const { return vars_; }
  std::optional<std::size_t> find(const std::string& name) const;

  StateIndex encode(std::span<const Value> values) const;
  std::vector<Value> decode(StateIndex s) const;
  Value value_of(StateIndex s, std::size_t var) const;
  StateIndex with_value(StateIndex s, std::size_t var, Value v) const;

  /// "{x=1,b=TRUE}" in declaration order.
  std::string format(StateIndex s) const;

  bool same_as(const StateSpace& o) const { return this == &o || vars_ == o.vars_; }

 private:
  StateSpace() = default;

  std::vector<Variable> vars_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t size_ = 1;
};

/// Maps states of a space onto a space over a subset of its variables.
class Projection {
 public:
  Projection(SpacePtr from, SpacePtr to);

  StateIndex operator()(StateIndex s) const;
  const SpacePtr& from() const { return from_; }
  const SpacePtr& to() const { return to_; }
  /// Indices (in `from`) of variables that `to` does not have.
  const std::vector<std::size_t>& hidden() const { return hidden_; }

 private:
  SpacePtr from_;
  SpacePtr to_;
  std::vector<std::size_t> map_;  // to-variable -> from-variable
  std::vector<std::size_t> hidden_;
};

void require_same_space(const SpacePtr& a, const SpacePtr& b);

}  // namespace ebsched::kernel
