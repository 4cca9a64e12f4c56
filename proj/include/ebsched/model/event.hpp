#pragma once

#include <string>
#include <vector>

#include "ebsched/model/expr.hpp"

namespace ebsched::model {

enum class Convergence { Ordinary, Convergent, Anticipated };

const char* to_string(Convergence c);

struct Labelled {
  std::string label;
  ExprPtr expr;
};

struct Action {
  enum class Kind {
    Becomes,   // x := e
    ChooseIn,  // x :: {a, b} or x :: lo..hi (the expression is an InSet/InRange over x)
    Such,      // x, y :| P(x, y, x', y')
  };

  Kind kind = Kind::Becomes;
  std::string label;
  std::vector<std::string> targets;
  ExprPtr expr;

  /// Concrete syntax, e.g. "fork1 := 1".
  std::string to_string() const;
};

struct Event {
  std::string name;
  Convergence convergence = Convergence::Ordinary;
  std::vector<Labelled> guards;
  std::vector<Action> actions;

  ExprPtr guard() const;
  std::vector<std::string> written() const;
  /// Every variable the guard or actions mention.
  std::set<std::string> mentioned() const;
  /// Variables the event reads: guard, right-hand sides, unprimed names in
  /// relational predicates.
  std::set<std::string> read() const;
};

/// Parallel composition: conjoined guards, combined actions on disjoint
/// frames. Identical duplicate actions collapse; any other write to the same
/// variable throws ModelError.
Event compose_events(const Event& a, const Event& b, const std::string& name = {});

}  // namespace ebsched::model
