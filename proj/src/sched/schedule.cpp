#include "ebsched/sched/schedule.hpp"

#include "ebsched/error.hpp"
#include "ebsched/model/lexer.hpp"

namespace ebsched::sched {

using model::Tok;
using model::TokenStream;

NodePtr make_event(std::string name, int line, int column) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Event;
  n->event = std::move(name);
  n->line = line;
  n->column = column;
  return n;
}

NodePtr make_assert(model::ExprPtr e, int line, int column) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Assert;
  n->expr = std::move(e);
  n->line = line;
  n->column = column;
  return n;
}

NodePtr make_seq(NodePtr head, NodePtr tail) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Seq;
  n->line = head->line;
  n->column = head->column;
  n->children = {std::move(head), std::move(tail)};
  return n;
}

NodePtr make_loop(NodePtr body) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Loop;
  n->line = body->line;
  n->column = body->column;
  n->children = {std::move(body)};
  return n;
}

NodePtr make_choice(std::vector<NodePtr> alternatives) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::Choice;
  if (!alternatives.empty()) {
    n->line = alternatives.front()->line;
    n->column = alternatives.front()->column;
  }
  n->children = std::move(alternatives);
  return n;
}

NodePtr make_end() { return make_choice({}); }

namespace {

bool reserved(const std::string& w) { return w == "do" || w == "od" || w == "end"; }

class Parser {
 public:
  explicit Parser(TokenStream ts) : ts_(std::move(ts)) {}

  NodePtr run() {
    if (ts_.at_end()) ts_.fail("empty schedule");
    NodePtr s = choice();
    if (!ts_.at_end()) ts_.fail("expected '->', '[]' or the end of the schedule");
    return s;
  }

 private:
  NodePtr choice() {
    std::vector<NodePtr> alts{seq()};
    while (ts_.accept("[]")) alts.push_back(seq());
    if (alts.size() == 1) return alts.front();
    return make_choice(std::move(alts));
  }

  NodePtr seq() {
    NodePtr head = primary();
    if (ts_.accept("->")) return make_seq(std::move(head), seq());
    return head;
  }

  NodePtr primary() {
    const model::Token t = ts_.peek();
    if (ts_.accept("do")) {
      auto body = choice();
      ts_.expect("od");
      auto n = std::make_shared<Node>(*make_loop(std::move(body)));
      n->line = t.line;
      n->column = t.column;
      return n;
    }
    if (ts_.accept("(")) {
      auto inner = choice();
      ts_.expect(")");
      return inner;
    }
    if (ts_.accept("{")) {
      auto e = model::parse_expr(ts_);
      ts_.expect("}");
      return make_assert(std::move(e), t.line, t.column);
    }
    if (ts_.accept("end")) {
      auto n = std::make_shared<Node>();
      n->line = t.line;
      n->column = t.column;
      return n;
    }
    if (t.kind == Tok::Ident && !reserved(t.text)) {
      ts_.next();
      return make_event(t.text, t.line, t.column);
    }
    ts_.fail("expected an event, '{', 'do', '(' or 'end'");
  }

  TokenStream ts_;
};

enum class Ctx { Top, SeqHead, SeqTail, ChoiceAlt, LoopBody };

void print(const Node& s, Ctx ctx, std::string& out) {
  switch (s.kind) {
    case NodeKind::Event:
      out += s.event;
      return;
    case NodeKind::Assert:
      out += "{" + model::to_string(*s.expr) + "}";
      return;
    case NodeKind::Loop:
      out += "do ";
      print(*s.children[0], Ctx::LoopBody, out);
      out += " od";
      return;
    case NodeKind::Seq: {
      const bool paren = ctx == Ctx::SeqHead;
      if (paren) out += "(";
      print(*s.head(), Ctx::SeqHead, out);
      out += " -> ";
      print(*s.tail(), Ctx::SeqTail, out);
      if (paren) out += ")";
      return;
    }
    case NodeKind::Choice: {
      if (s.children.empty()) {
        out += "end";
        return;
      }
      // A single alternative has no syntax of its own; it prints as its body.
      if (s.children.size() == 1) {
        print(*s.children[0], ctx, out);
        return;
      }
      const bool paren = ctx == Ctx::SeqHead || ctx == Ctx::SeqTail || ctx == Ctx::ChoiceAlt;
      if (paren) out += "(";
      for (std::size_t i = 0; i < s.children.size(); ++i) {
        if (i) out += " [] ";
        print(*s.children[i], Ctx::ChoiceAlt, out);
      }
      if (paren) out += ")";
      return;
    }
  }
}

bool same_expr(const model::Expr& a, const model::Expr& b) { return model::to_string(a) == model::to_string(b); }

void collect(const Node& s, std::set<std::string>& out) {
  if (s.kind == NodeKind::Event) out.insert(s.event);
  for (const auto& c : s.children) collect(*c, out);
}

}  // namespace

NodePtr parse_schedule(const std::string& text, int line, int column) {
  return Parser(TokenStream(model::tokenize(text, line, column))).run();
}

std::string to_string(const Node& s) {
  std::string out;
  print(s, Ctx::Top, out);
  return out;
}

bool same(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.children.size() != b.children.size()) return false;
  if (a.kind == NodeKind::Event && a.event != b.event) return false;
  if (a.kind == NodeKind::Assert && !same_expr(*a.expr, *b.expr)) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!same(*a.children[i], *b.children[i])) return false;
  return true;
}

std::set<std::string> events_of(const Node& s) {
  std::set<std::string> out;
  collect(s, out);
  return out;
}

std::vector<NodePtr> spine(const NodePtr& s) {
  std::vector<NodePtr> out;
  NodePtr cur = s;
  while (cur->kind == NodeKind::Seq) {
    out.push_back(cur->head());
    cur = cur->tail();
  }
  out.push_back(cur);
  return out;
}

NodePtr from_spine(const std::vector<NodePtr>& parts) {
  if (parts.empty()) return make_end();
  NodePtr out = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) out = make_seq(parts[i], out);
  return out;
}

NodePtr resolve(const NodePtr& s, const model::Scope& scope, const std::set<std::string>& known) {
  auto n = std::make_shared<Node>(*s);
  switch (s->kind) {
    case NodeKind::Event:
      if (!known.count(s->event))
        throw ParseError("unknown event " + s->event + " in schedule", s->line, s->column);
      break;
    case NodeKind::Assert:
      try {
        n->expr = model::resolve_predicate(s->expr, scope, "schedule assertion");
      } catch (const ModelError& e) {
        throw ParseError(e.what(), s->line, s->column);
      }
      break;
    default:
      for (auto& c : n->children) c = resolve(c, scope, known);
  }
  return n;
}

}  // namespace ebsched::sched
