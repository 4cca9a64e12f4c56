#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "ebsched/model/expr.hpp"

namespace ebsched::sched {

enum class NodeKind { Seq, Loop, Choice, Event, Assert };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// Schedule AST. Seq holds (head, tail), Loop its body, Choice any number of
/// alternatives; a Choice with none is the empty schedule `end`.
struct Node {
  NodeKind kind = NodeKind::Choice;
  std::vector<NodePtr> children;
  std::string event;     // Event
  model::ExprPtr expr;   // Assert
  int line = 0;
  int column = 0;

  const NodePtr& head() const { return children.at(0); }
  const NodePtr& tail() const { return children.at(1); }
  bool is_end() const { return kind == NodeKind::Choice && children.empty(); }
};

NodePtr make_event(std::string name, int line = 0, int column = 0);
NodePtr make_assert(model::ExprPtr e, int line = 0, int column = 0);
NodePtr make_seq(NodePtr head, NodePtr tail);
NodePtr make_loop(NodePtr body);
NodePtr make_choice(std::vector<NodePtr> alternatives);
NodePtr make_end();

/// Parses the concrete syntax: `->` sequence (right associative), `[]` choice
/// (looser than `->`), `do S od`, `{ expr }`, parentheses and `end`. The first
/// character of `text` sits at (line, column) for error positions.
NodePtr parse_schedule(const std::string& text, int line = 1, int column = 1);

/// Text that parses back to the same tree.
std::string to_string(const Node& s);
inline std::string to_string(const NodePtr& s) { return to_string(*s); }

/// Structural equality, ignoring source positions.
bool same(const Node& a, const Node& b);

/// e(S): every event named in the schedule.
std::set<std::string> events_of(const Node& s);

/// Head elements of the sequence chain and its final element:
/// A -> B -> C gives {A, B, C}.
std::vector<NodePtr> spine(const NodePtr& s);
/// Rebuilds a sequence from spine elements; `end` when empty.
NodePtr from_spine(const std::vector<NodePtr>& parts);

/// Checks event names against `known` and resolves assertions against scope.
NodePtr resolve(const NodePtr& s, const model::Scope& scope, const std::set<std::string>& known);

}  // namespace ebsched::sched
