#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "ebsched/kernel/state_space.hpp"
#include "ebsched/model/lexer.hpp"

namespace ebsched::model {

using kernel::Domain;
using kernel::Value;

enum class Op {
  Bool,    // literal TRUE/FALSE in `value`
  Int,     // literal number
  Name,    // unresolved identifier
  Var,     // resolved variable; `index` into the space
  Const,   // folded constant or enum literal, `value`
  Primed,  // post-state variable
  Not,
  And,
  Or,
  Implies,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  Add,
  Sub,
  Mul,
  Neg,
  BoolOf,  // bool(p)
  Call,    // table application, `name`
  InSet,   // args[0] ∈ {args[1..]}
  InRange, // args[0] ∈ args[1]..args[2]
  InBool,  // args[0] ∈ BOOL
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  Op op = Op::Int;
  Value value = 0;
  std::string name;
  std::size_t index = 0;
  std::vector<ExprPtr> args;
  int line = 0;
  int column = 0;
};

enum class TypeKind { Bool, Int, Enum };

struct Type {
  TypeKind kind = TypeKind::Int;
  int enum_id = -1;  // index of the enumeration domain

  bool operator==(const Type& o) const = default;
};

/// Finite table from argument tuples to integers.
struct Table {
  std::string name;
  std::vector<Domain> params;
  std::map<std::vector<Value>, Value> entries;
  int line = 0;
};

/// Names an expression can mention.
struct Scope {
  kernel::SpacePtr space;
  std::map<std::string, Value> constants;
  std::map<std::string, Table> tables;
  bool allow_primed = false;
  bool allow_unprimed = true;

  std::optional<std::pair<Type, Value>> literal(const std::string& name) const;
  Type type_of(const Domain& d) const;
};

/// Parses one expression from the stream, stopping at the first token that
/// cannot continue it.
ExprPtr parse_expr(TokenStream& ts);
ExprPtr parse_expr(const std::string& text);

/// Resolves names against `scope` and checks types. Returns the resolved tree
/// and its type.
std::pair<ExprPtr, Type> resolve(const ExprPtr& e, const Scope& scope);
ExprPtr resolve_predicate(const ExprPtr& e, const Scope& scope, const std::string& where);
ExprPtr resolve_integer(const ExprPtr& e, const Scope& scope, const std::string& where);

/// Evaluates a resolved tree. `post` is required only when primed variables
/// occur.
Value eval(const Expr& e, const Scope& scope, std::span<const Value> pre,
           std::span<const Value> post = {});

/// Concrete syntax, with the minimum of parentheses.
std::string to_string(const Expr& e);
inline std::string to_string(const ExprPtr& e) { return to_string(*e); }

/// Variables mentioned, unprimed and primed, by name.
void collect_names(const Expr& e, std::set<std::string>& unprimed, std::set<std::string>& primed);

ExprPtr make_bool(bool v);
ExprPtr make_binary(Op op, ExprPtr a, ExprPtr b);
/// Conjunction of the list; TRUE when empty.
ExprPtr conjoin(const std::vector<ExprPtr>& parts);

/// Set of states of `scope.space` satisfying a resolved predicate.
kernel::Bits states_where(const ExprPtr& resolved, const Scope& scope);

}  // namespace ebsched::model
