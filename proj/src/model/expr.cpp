#include "ebsched/model/expr.hpp"

#include <sstream>

#include "ebsched/error.hpp"

namespace ebsched::model {

namespace {

ExprPtr node(Op op, const Token& at, std::vector<ExprPtr> args = {}) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->line = at.line;
  e->column = at.column;
  e->args = std::move(args);
  return e;
}

ExprPtr parse_implies(TokenStream& ts);

ExprPtr parse_primary(TokenStream& ts) {
  const Token& t = ts.peek();
  if (t.kind == Tok::Number) {
    ts.next();
    auto e = node(Op::Int, t);
    auto* m = const_cast<Expr*>(e.get());
    try {
      m->value = std::stoll(t.text);
    } catch (const std::out_of_range&) {
      ts.fail_at(t, "number out of range");
    }
    return e;
  }
  if (ts.accept("(")) {
    auto e = parse_implies(ts);
    ts.expect(")");
    return e;
  }
  if (t.kind == Tok::Ident) {
    Token id = ts.next();
    if (id.text == "TRUE" || id.text == "FALSE") {
      auto e = node(Op::Bool, id);
      const_cast<Expr*>(e.get())->value = id.text == "TRUE";
      return e;
    }
    if (ts.accept("(")) {
      std::vector<ExprPtr> args;
      if (!ts.is(")")) {
        do args.push_back(parse_implies(ts));
        while (ts.accept(","));
      }
      ts.expect(")");
      if (id.text == "bool") {
        if (args.size() != 1) ts.fail_at(id, "bool takes one argument");
        return node(Op::BoolOf, id, std::move(args));
      }
      auto e = node(Op::Call, id, std::move(args));
      const_cast<Expr*>(e.get())->name = id.text;
      return e;
    }
    auto e = node(ts.accept("'") ? Op::Primed : Op::Name, id);
    const_cast<Expr*>(e.get())->name = id.text;
    return e;
  }
  ts.fail("expected an expression");
}

ExprPtr parse_unary(TokenStream& ts) {
  if (ts.is("-")) {
    Token t = ts.next();
    return node(Op::Neg, t, {parse_unary(ts)});
  }
  return parse_primary(ts);
}

ExprPtr parse_term(TokenStream& ts) {
  auto e = parse_unary(ts);
  while (ts.is("*")) {
    Token t = ts.next();
    e = node(Op::Mul, t, {e, parse_unary(ts)});
  }
  return e;
}

ExprPtr parse_sum(TokenStream& ts) {
  auto e = parse_term(ts);
  while (ts.is("+") || ts.is("-")) {
    Token t = ts.next();
    e = node(t.text == "+" ? Op::Add : Op::Sub, t, {e, parse_term(ts)});
  }
  return e;
}

ExprPtr parse_cmp(TokenStream& ts) {
  auto e = parse_sum(ts);
  static const std::map<std::string, Op> rel = {{"=", Op::Eq}, {"/=", Op::Ne}, {"!=", Op::Ne},
                                                {"<", Op::Lt}, {"<=", Op::Le}, {">", Op::Gt},
                                                {">=", Op::Ge}};
  const Token& t = ts.peek();
  if (t.kind == Tok::Symbol) {
    auto it = rel.find(t.text);
    if (it != rel.end()) {
      Token op = ts.next();
      return node(it->second, op, {e, parse_sum(ts)});
    }
  }
  if (ts.is("in")) {
    Token op = ts.next();
    if (ts.accept("BOOL")) return node(Op::InBool, op, {e});
    if (ts.accept("{")) {
      std::vector<ExprPtr> args{e};
      if (!ts.is("}")) {
        do args.push_back(parse_sum(ts));
        while (ts.accept(","));
      }
      ts.expect("}");
      return node(Op::InSet, op, std::move(args));
    }
    auto lo = parse_sum(ts);
    ts.expect("..");
    auto hi = parse_sum(ts);
    return node(Op::InRange, op, {e, lo, hi});
  }
  return e;
}

ExprPtr parse_not(TokenStream& ts) {
  if (ts.is("not")) {
    Token t = ts.next();
    return node(Op::Not, t, {parse_not(ts)});
  }
  return parse_cmp(ts);
}

ExprPtr parse_and(TokenStream& ts) {
  auto e = parse_not(ts);
  while (ts.is("and")) {
    Token t = ts.next();
    e = node(Op::And, t, {e, parse_not(ts)});
  }
  return e;
}

ExprPtr parse_or(TokenStream& ts) {
  auto e = parse_and(ts);
  while (ts.is("or")) {
    Token t = ts.next();
    e = node(Op::Or, t, {e, parse_and(ts)});
  }
  return e;
}

ExprPtr parse_implies(TokenStream& ts) {
  auto e = parse_or(ts);
  if (ts.is("=>")) {
    Token t = ts.next();
    return node(Op::Implies, t, {e, parse_implies(ts)});
  }
  return e;
}

}  // namespace

ExprPtr parse_expr(TokenStream& ts) { return parse_implies(ts); }

ExprPtr parse_expr(const std::string& text) {
  TokenStream ts(tokenize(text));
  auto e = parse_expr(ts);
  if (!ts.at_end()) ts.fail("unexpected trailing input");
  return e;
}

std::optional<std::pair<Type, Value>> Scope::literal(const std::string& name) const {
  if (auto c = constants.find(name); c != constants.end()) return std::pair{Type{TypeKind::Int}, c->second};
  if (!space) return std::nullopt;
  const auto& vars = space->variables();
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const auto& lits = vars[i].domain.literals;
    for (std::size_t k = 0; k < lits.size(); ++k)
      if (lits[k] == name) return std::pair{type_of(vars[i].domain), static_cast<Value>(k)};
  }
  for (const auto& [tn, table] : tables)
    for (const auto& d : table.params)
      for (std::size_t k = 0; k < d.literals.size(); ++k)
        if (d.literals[k] == name) return std::pair{type_of(d), static_cast<Value>(k)};
  return std::nullopt;
}

Type Scope::type_of(const Domain& d) const {
  switch (d.kind) {
    case Domain::Kind::Boolean:
      return {TypeKind::Bool};
    case Domain::Kind::Range:
      return {TypeKind::Int};
    case Domain::Kind::Enumeration:
      break;
  }
  if (space) {
    const auto& vars = space->variables();
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i].domain.kind == Domain::Kind::Enumeration && vars[i].domain.literals == d.literals)
        return {TypeKind::Enum, static_cast<int>(i)};
  }
  int id = 1000;
  for (const auto& [tn, table] : tables)
    for (const auto& p : table.params) {
      if (p.kind == Domain::Kind::Enumeration && p.literals == d.literals) return {TypeKind::Enum, id};
      ++id;
    }
  return {TypeKind::Enum, -1};
}

namespace {

const char* type_name(const Type& t) {
  switch (t.kind) {
    case TypeKind::Bool:
      return "BOOL";
    case TypeKind::Int:
      return "integer";
    case TypeKind::Enum:
      return "enumeration";
  }
  return "?";
}

[[noreturn]] void type_error(const Expr& e, const std::string& msg) {
  throw ParseError(msg, e.line, e.column);
}

ExprPtr rebuild(const Expr& e, std::vector<ExprPtr> args) {
  auto out = std::make_shared<Expr>(e);
  out->args = std::move(args);
  return out;
}

std::pair<ExprPtr, Type> check(const ExprPtr& ep, const Scope& scope) {
  const Expr& e = *ep;
  auto want = [&](const ExprPtr& a, TypeKind k) {
    auto [r, t] = check(a, scope);
    if (t.kind != k)
      type_error(*a, std::string("expected ") + type_name({k}) + ", got " + type_name(t));
    return r;
  };
  switch (e.op) {
    case Op::Bool:
      return {ep, {TypeKind::Bool}};
    case Op::Int:
      return {ep, {TypeKind::Int}};
    case Op::Const:
      if (e.name.empty()) return {ep, {TypeKind::Int}};
      [[fallthrough]];
    case Op::Var:
    case Op::Name:
    case Op::Primed: {
      auto idx = scope.space ? scope.space->find(e.name) : std::nullopt;
      if (idx) {
        if (e.op == Op::Primed && !scope.allow_primed) type_error(e, "primed variable " + e.name + "' not allowed here");
        if (e.op != Op::Primed && !scope.allow_unprimed)
          type_error(e, "variable " + e.name + " refers to the pre-state, which is not allowed here");
        auto out = std::make_shared<Expr>(e);
        out->op = e.op == Op::Primed ? Op::Primed : Op::Var;
        out->index = *idx;
        return {out, scope.type_of(scope.space->variables()[*idx].domain)};
      }
      if (e.op == Op::Primed) type_error(e, "unknown variable " + e.name);
      if (auto lit = scope.literal(e.name)) {
        auto out = std::make_shared<Expr>(e);
        out->op = Op::Const;
        out->value = lit->second;
        return {out, lit->first};
      }
      type_error(e, "unknown identifier " + e.name);
    }
    case Op::Not:
      return {rebuild(e, {want(e.args[0], TypeKind::Bool)}), {TypeKind::Bool}};
    case Op::And:
    case Op::Or:
    case Op::Implies:
      return {rebuild(e, {want(e.args[0], TypeKind::Bool), want(e.args[1], TypeKind::Bool)}), {TypeKind::Bool}};
    case Op::Eq:
    case Op::Ne: {
      auto [a, ta] = check(e.args[0], scope);
      auto [b, tb] = check(e.args[1], scope);
      if (!(ta == tb)) type_error(e, std::string("cannot compare ") + type_name(ta) + " with " + type_name(tb));
      return {rebuild(e, {a, b}), {TypeKind::Bool}};
    }
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
      return {rebuild(e, {want(e.args[0], TypeKind::Int), want(e.args[1], TypeKind::Int)}), {TypeKind::Bool}};
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
      return {rebuild(e, {want(e.args[0], TypeKind::Int), want(e.args[1], TypeKind::Int)}), {TypeKind::Int}};
    case Op::Neg:
      return {rebuild(e, {want(e.args[0], TypeKind::Int)}), {TypeKind::Int}};
    case Op::BoolOf:
      return {rebuild(e, {want(e.args[0], TypeKind::Bool)}), {TypeKind::Bool}};
    case Op::Call: {
      auto it = scope.tables.find(e.name);
      if (it == scope.tables.end()) type_error(e, "unknown function " + e.name);
      const Table& tab = it->second;
      if (tab.params.size() != e.args.size())
        type_error(e, e.name + " expects " + std::to_string(tab.params.size()) + " arguments");
      std::vector<ExprPtr> args;
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        auto [a, ta] = check(e.args[i], scope);
        if (!(ta == scope.type_of(tab.params[i])))
          type_error(*e.args[i], "argument " + std::to_string(i + 1) + " of " + e.name + " has the wrong type");
        args.push_back(a);
      }
      return {rebuild(e, std::move(args)), {TypeKind::Int}};
    }
    case Op::InSet: {
      auto [a, ta] = check(e.args[0], scope);
      std::vector<ExprPtr> args{a};
      for (std::size_t i = 1; i < e.args.size(); ++i) {
        auto [b, tb] = check(e.args[i], scope);
        if (!(ta == tb)) type_error(*e.args[i], "set element has the wrong type");
        args.push_back(b);
      }
      return {rebuild(e, std::move(args)), {TypeKind::Bool}};
    }
    case Op::InRange:
      return {rebuild(e, {want(e.args[0], TypeKind::Int), want(e.args[1], TypeKind::Int),
                          want(e.args[2], TypeKind::Int)}),
              {TypeKind::Bool}};
    case Op::InBool:
      return {rebuild(e, {want(e.args[0], TypeKind::Bool)}), {TypeKind::Bool}};
  }
  type_error(e, "unknown expression");
}

}  // namespace

std::pair<ExprPtr, Type> resolve(const ExprPtr& e, const Scope& scope) { return check(e, scope); }

ExprPtr resolve_predicate(const ExprPtr& e, const Scope& scope, const std::string& where) {
  auto [r, t] = check(e, scope);
  if (t.kind != TypeKind::Bool) throw ParseError(where + " must be a predicate", e->line, e->column);
  return r;
}

ExprPtr resolve_integer(const ExprPtr& e, const Scope& scope, const std::string& where) {
  auto [r, t] = check(e, scope);
  if (t.kind != TypeKind::Int) throw ParseError(where + " must be integer-valued", e->line, e->column);
  return r;
}

Value eval(const Expr& e, const Scope& scope, std::span<const Value> pre, std::span<const Value> post) {
  auto ev = [&](std::size_t i) { return eval(*e.args[i], scope, pre, post); };
  switch (e.op) {
    case Op::Bool:
    case Op::Int:
    case Op::Const:
      return e.value;
    case Op::Var:
      return pre[e.index];
    case Op::Primed:
      if (post.empty()) throw ModelError("primed variable " + e.name + "' has no post-state here");
      return post[e.index];
    case Op::Name:
      throw ModelError("unresolved name " + e.name);
    case Op::Not:
      return !ev(0);
    case Op::And:
      return ev(0) && ev(1);
    case Op::Or:
      return ev(0) || ev(1);
    case Op::Implies:
      return !ev(0) || ev(1);
    case Op::Eq:
      return ev(0) == ev(1);
    case Op::Ne:
      return ev(0) != ev(1);
    case Op::Lt:
      return ev(0) < ev(1);
    case Op::Le:
      return ev(0) <= ev(1);
    case Op::Gt:
      return ev(0) > ev(1);
    case Op::Ge:
      return ev(0) >= ev(1);
    case Op::Add:
      return ev(0) + ev(1);
    case Op::Sub:
      return ev(0) - ev(1);
    case Op::Mul:
      return ev(0) * ev(1);
    case Op::Neg:
      return -ev(0);
    case Op::BoolOf:
      return ev(0) != 0;
    case Op::Call: {
      const Table& t = scope.tables.at(e.name);
      std::vector<Value> key;
      key.reserve(e.args.size());
      for (std::size_t i = 0; i < e.args.size(); ++i) key.push_back(ev(i));
      auto it = t.entries.find(key);
      if (it == t.entries.end()) {
        std::string args;
        for (std::size_t i = 0; i < key.size(); ++i) args += (i ? "," : "") + t.params[i].format(key[i]);
        throw ModelError("function " + e.name + " is undefined at (" + args + ")");
      }
      return it->second;
    }
    case Op::InSet: {
      Value x = ev(0);
      for (std::size_t i = 1; i < e.args.size(); ++i)
        if (ev(i) == x) return 1;
      return 0;
    }
    case Op::InRange: {
      Value x = ev(0);
      return ev(1) <= x && x <= ev(2);
    }
    case Op::InBool:
      return 1;
  }
  throw ModelError("unknown expression");
}

namespace {

int prec(Op op) {
  switch (op) {
    case Op::Implies:
      return 1;
    case Op::Or:
      return 2;
    case Op::And:
      return 3;
    case Op::Not:
      return 4;
    case Op::Eq:
    case Op::Ne:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
    case Op::InSet:
    case Op::InRange:
    case Op::InBool:
      return 5;
    case Op::Add:
    case Op::Sub:
      return 6;
    case Op::Mul:
      return 7;
    case Op::Neg:
      return 8;
    default:
      return 9;
  }
}

const char* spelling(Op op) {
  switch (op) {
    case Op::Implies:
      return " => ";
    case Op::Or:
      return " or ";
    case Op::And:
      return " and ";
    case Op::Eq:
      return " = ";
    case Op::Ne:
      return " /= ";
    case Op::Lt:
      return " < ";
    case Op::Le:
      return " <= ";
    case Op::Gt:
      return " > ";
    case Op::Ge:
      return " >= ";
    case Op::Add:
      return " + ";
    case Op::Sub:
      return " - ";
    case Op::Mul:
      return " * ";
    default:
      return "?";
  }
}

void print(const Expr& e, std::ostream& os, int min_prec) {
  const int p = prec(e.op);
  const bool paren = p < min_prec;
  if (paren) os << '(';
  switch (e.op) {
    case Op::Bool:
      os << (e.value ? "TRUE" : "FALSE");
      break;
    case Op::Int:
      os << e.value;
      break;
    case Op::Name:
    case Op::Var:
    case Op::Const:
      if (e.name.empty())
        os << e.value;
      else
        os << e.name;
      break;
    case Op::Primed:
      os << e.name << '\'';
      break;
    case Op::Not:
      os << "not ";
      print(*e.args[0], os, p);
      break;
    case Op::Neg:
      os << '-';
      print(*e.args[0], os, p);
      break;
    case Op::Implies:
      print(*e.args[0], os, p + 1);
      os << spelling(e.op);
      print(*e.args[1], os, p);
      break;
    case Op::Or:
    case Op::And:
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
      print(*e.args[0], os, p);
      os << spelling(e.op);
      print(*e.args[1], os, p + 1);
      break;
    case Op::Eq:
    case Op::Ne:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
      print(*e.args[0], os, p + 1);
      os << spelling(e.op);
      print(*e.args[1], os, p + 1);
      break;
    case Op::BoolOf:
    case Op::Call:
      os << (e.op == Op::BoolOf ? "bool" : e.name) << '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) os << ", ";
        print(*e.args[i], os, 0);
      }
      os << ')';
      break;
    case Op::InSet:
      print(*e.args[0], os, p + 1);
      os << " in {";
      for (std::size_t i = 1; i < e.args.size(); ++i) {
        if (i > 1) os << ", ";
        print(*e.args[i], os, 6);
      }
      os << '}';
      break;
    case Op::InRange:
      print(*e.args[0], os, p + 1);
      os << " in ";
      print(*e.args[1], os, 6);
      os << "..";
      print(*e.args[2], os, 6);
      break;
    case Op::InBool:
      print(*e.args[0], os, p + 1);
      os << " in BOOL";
      break;
  }
  if (paren) os << ')';
}

}  // namespace

std::string to_string(const Expr& e) {
  std::ostringstream os;
  print(e, os, 0);
  return os.str();
}

void collect_names(const Expr& e, std::set<std::string>& unprimed, std::set<std::string>& primed) {
  if (e.op == Op::Name || e.op == Op::Var) unprimed.insert(e.name);
  if (e.op == Op::Primed) primed.insert(e.name);
  for (const auto& a : e.args) collect_names(*a, unprimed, primed);
}

ExprPtr make_bool(bool v) {
  auto e = std::make_shared<Expr>();
  e->op = Op::Bool;
  e->value = v;
  return e;
}

ExprPtr make_binary(Op op, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->line = a->line;
  e->column = a->column;
  e->args = {std::move(a), std::move(b)};
  return e;
}

ExprPtr conjoin(const std::vector<ExprPtr>& parts) {
  if (parts.empty()) return make_bool(true);
  ExprPtr e = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) e = make_binary(Op::And, e, parts[i]);
  return e;
}

kernel::Bits states_where(const ExprPtr& resolved, const Scope& scope) {
  const auto& space = *scope.space;
  kernel::Bits out(space.size());
  for (kernel::StateIndex s = 0; s < space.size(); ++s) {
    auto v = space.decode(s);
    if (eval(*resolved, scope, v)) out.set(s);
  }
  return out;
}

}  // namespace ebsched::model
