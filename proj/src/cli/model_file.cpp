#include "ebsched/cli/model_file.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ebsched/error.hpp"

namespace ebsched::cli {

using namespace model;
using kernel::Domain;

namespace {

const std::set<std::string> kSectionWords = {"machine", "refines", "constants", "constant", "variables",
                                             "functions", "invariant", "variant", "initialisation",
                                             "event", "finalisation", "decomposition", "task", "options"};

class Parser {
 public:
  Parser(const std::string& text, std::string origin) : ts_(tokenize(text)) { file_.origin = std::move(origin); }

  ModelFile run() {
    bool seen_init = false, seen_fin = false;
    while (!ts_.at_end()) {
      const Token& t = ts_.peek();
      if (t.kind != Tok::Ident || !kSectionWords.count(t.text)) ts_.fail("expected a section keyword");
      std::string word = ts_.next().text;
      if (word == "machine") {
        file_.machine.name = ts_.expect_ident("machine name");
      } else if (word == "refines") {
        if (ts_.peek().kind != Tok::String) ts_.fail("expected a quoted file name");
        file_.refines = ts_.next().text;
      } else if (word == "constants") {
        while (!ts_.accept("end")) constant();
      } else if (word == "constant") {
        constant();
      } else if (word == "variables") {
        while (!ts_.accept("end")) variable();
      } else if (word == "functions") {
        while (!ts_.accept("end")) function();
      } else if (word == "invariant") {
        while (!ts_.accept("end")) file_.machine.invariant.push_back(labelled());
      } else if (word == "variant") {
        if (file_.machine.variant) ts_.fail("variant given twice");
        file_.machine.variant = parse_expr(ts_);
        ts_.expect("end");
      } else if (word == "initialisation") {
        if (seen_init) ts_.fail("initialisation given twice");
        seen_init = true;
        file_.machine.init.name = "INITIALISATION";
        ts_.accept("begin") || ts_.accept("then");
        while (!ts_.accept("end")) file_.machine.init.actions.push_back(action());
      } else if (word == "finalisation") {
        if (seen_fin) ts_.fail("finalisation given twice");
        seen_fin = true;
        file_.machine.fin.name = "FINALISATION";
        if (ts_.accept("when"))
          while (!ts_.is("end") && !ts_.is("then")) file_.machine.fin.guards.push_back(labelled());
        if (ts_.accept("then")) ts_.expect("skip");
        ts_.expect("end");
      } else if (word == "event") {
        Event e = event();
        if (file_.machine.find_event(e.name)) ts_.fail("event " + e.name + " declared twice");
        file_.machine.events.push_back(std::move(e));
      } else if (word == "decomposition") {
        decomposition();
      } else if (word == "task") {
        task();
      } else if (word == "options") {
        while (!ts_.accept("end")) {
          std::string key = ts_.expect_ident("option name");
          ts_.expect("=");
          file_.options[key] = ts_.next().text;
        }
      }
    }
    if (!seen_init) throw ParseError("missing initialisation section", 1, 1);
    if (!seen_fin) file_.machine.fin.name = "FINALISATION";
    return std::move(file_);
  }

 private:
  Value number() {
    bool neg = ts_.accept("-");
    const Token& t = ts_.peek();
    if (t.kind != Tok::Number) ts_.fail("expected a number");
    ts_.next();
    Value v = std::stoll(t.text);
    return neg ? -v : v;
  }

  void constant() {
    std::string name = ts_.expect_ident("constant name");
    ts_.expect("=");
    for (const auto& [k, v] : file_.machine.constants)
      if (k == name) ts_.fail("constant " + name + " declared twice");
    file_.machine.constants.emplace_back(name, number());
  }

  Domain domain() {
    if (ts_.accept("BOOL")) return Domain::boolean();
    if (ts_.accept("{")) {
      std::vector<std::string> lits;
      do lits.push_back(ts_.expect_ident("enumeration literal"));
      while (ts_.accept(","));
      ts_.expect("}");
      return Domain::enumeration(std::move(lits));
    }
    Value lo = number();
    ts_.expect("..");
    Value hi = number();
    if (hi < lo) ts_.fail("empty range");
    return Domain::range(lo, hi);
  }

  void variable() {
    std::vector<std::string> names{ts_.expect_ident("variable name")};
    while (ts_.accept(",")) names.push_back(ts_.expect_ident("variable name"));
    ts_.expect(":");
    Domain d = domain();
    for (auto& n : names) {
      if (file_.machine.find_variable(n)) ts_.fail("variable " + n + " declared twice");
      file_.machine.variables.push_back({n, d});
    }
  }

  Value table_value(const Domain& d) {
    const Token& t = ts_.peek();
    if (d.kind == Domain::Kind::Boolean) {
      if (ts_.accept("TRUE")) return 1;
      if (ts_.accept("FALSE")) return 0;
      ts_.fail("expected TRUE or FALSE");
    }
    if (d.kind == Domain::Kind::Enumeration) {
      std::string lit = ts_.expect_ident("enumeration literal");
      for (std::size_t k = 0; k < d.literals.size(); ++k)
        if (d.literals[k] == lit) return static_cast<Value>(k);
      ts_.fail_at(t, "literal " + lit + " is not in " + d.to_string());
    }
    Value v = number();
    if (!d.contains(v)) ts_.fail_at(t, "value outside " + d.to_string());
    return v;
  }

  void function() {
    Table tab;
    tab.line = ts_.peek().line;
    tab.name = ts_.expect_ident("function name");
    ts_.expect("(");
    do tab.params.push_back(domain());
    while (ts_.accept(","));
    ts_.expect(")");
    ts_.expect("=");
    ts_.expect("{");
    if (!ts_.is("}")) {
      do {
        std::vector<Value> key;
        const bool tuple = ts_.accept("(");
        if (!tuple && tab.params.size() != 1) ts_.fail("expected a tuple");
        for (std::size_t i = 0; i < tab.params.size(); ++i) {
          if (i) ts_.expect(",");
          key.push_back(table_value(tab.params[i]));
        }
        if (tuple) ts_.expect(")");
        ts_.expect("|->");
        if (tab.entries.count(key)) ts_.fail("duplicate entry in " + tab.name);
        tab.entries[key] = number();
      } while (ts_.accept(","));
    }
    ts_.expect("}");
    for (const auto& t : file_.machine.tables)
      if (t.name == tab.name) ts_.fail("function " + tab.name + " declared twice");
    file_.machine.tables.push_back(std::move(tab));
  }

  Labelled labelled() {
    Labelled l;
    if (ts_.peek().kind == Tok::Label) l.label = ts_.next().text;
    l.expr = parse_expr(ts_);
    return l;
  }

  Action action() {
    Action a;
    if (ts_.peek().kind == Tok::Label) a.label = ts_.next().text;
    const Token start = ts_.peek();
    a.targets.push_back(ts_.expect_ident("assigned variable"));
    while (ts_.accept(",")) a.targets.push_back(ts_.expect_ident("assigned variable"));
    if (ts_.accept(":=")) {
      if (a.targets.size() != 1) ts_.fail_at(start, "':=' assigns one variable; use ':|' for several");
      a.kind = Action::Kind::Becomes;
      a.expr = parse_expr(ts_);
    } else if (ts_.accept("::")) {
      if (a.targets.size() != 1) ts_.fail_at(start, "'::' assigns one variable");
      a.kind = Action::Kind::ChooseIn;
      // Reuse the membership parser on "x in <set>".
      auto x = std::make_shared<Expr>();
      x->op = Op::Name;
      x->name = a.targets[0];
      x->line = start.line;
      x->column = start.column;
      auto e = std::make_shared<Expr>();
      e->line = start.line;
      e->column = start.column;
      e->args.push_back(x);
      if (ts_.accept("BOOL")) {
        e->op = Op::InBool;
      } else if (ts_.accept("{")) {
        e->op = Op::InSet;
        do e->args.push_back(parse_expr(ts_));
        while (ts_.accept(","));
        ts_.expect("}");
      } else {
        e->op = Op::InRange;
        e->args.push_back(parse_expr(ts_));
        ts_.expect("..");
        e->args.push_back(parse_expr(ts_));
      }
      a.expr = e;
    } else if (ts_.accept(":|")) {
      a.kind = Action::Kind::Such;
      a.expr = parse_expr(ts_);
    } else {
      ts_.fail("expected ':=', '::' or ':|'");
    }
    return a;
  }

  Event event() {
    Event e;
    e.name = ts_.expect_ident("event name");
    if (ts_.accept("convergent")) e.convergence = Convergence::Convergent;
    else if (ts_.accept("anticipated")) e.convergence = Convergence::Anticipated;
    else ts_.accept("ordinary");
    if (ts_.accept("when"))
      while (!ts_.is("then") && !ts_.is("end")) e.guards.push_back(labelled());
    if (ts_.accept("then") || ts_.accept("begin"))
      while (!ts_.is("end")) {
        if (ts_.accept("skip")) continue;
        e.actions.push_back(action());
      }
    ts_.expect("end");
    return e;
  }

  std::vector<std::string> name_list() {
    std::vector<std::string> out;
    while (ts_.is_ident() && !is_block_word()) out.push_back(ts_.next().text);
    return out;
  }

  bool is_block_word() const {
    return ts_.is("end") || ts_.is("variables") || ts_.is("events") || ts_.is("external") ||
           ts_.is("submodel") || ts_.is("shared");
  }

  void decomposition() {
    if (file_.partition) ts_.fail("decomposition given twice");
    Partition p;
    while (!ts_.accept("end")) {
      if (ts_.accept("shared")) {
        auto names = name_list();
        p.shared.insert(p.shared.end(), names.begin(), names.end());
      } else if (ts_.accept("submodel")) {
        Block b;
        b.name = ts_.expect_ident("sub-model name");
        if (p.find(b.name)) ts_.fail("sub-model " + b.name + " declared twice");
        while (!ts_.accept("end")) {
          if (ts_.accept("variables")) {
            auto names = name_list();
            b.variables.insert(b.variables.end(), names.begin(), names.end());
          } else if (ts_.accept("events")) {
            auto names = name_list();
            b.events.insert(b.events.end(), names.begin(), names.end());
          } else if (ts_.accept("external")) {
            ts_.expect("event");
            b.overrides.push_back(event());
          } else {
            ts_.fail("expected variables, events, external or end");
          }
        }
        p.blocks.push_back(std::move(b));
      } else {
        ts_.fail("expected shared, submodel or end");
      }
    }
    file_.partition = std::move(p);
  }

  void task() {
    TaskDecl t;
    t.name = ts_.expect_ident("task name");
    if (file_.find_task(t.name)) ts_.fail("task " + t.name + " declared twice");
    ts_.expect("of");
    t.submodel = ts_.expect_ident("sub-model name");
    bool have_schedule = false;
    while (!ts_.accept("end")) {
      if (ts_.accept("schedule")) {
        const Token& s = ts_.peek();
        if (s.kind != Tok::String) ts_.fail("expected the schedule as a quoted string");
        t.schedule = s.text;
        t.schedule_line = s.line;
        t.schedule_column = s.column + 1;
        ts_.next();
        have_schedule = true;
      } else if (ts_.accept("script")) {
        while (!ts_.accept("end")) {
          ScriptStep st;
          st.line = ts_.peek().line;
          if (ts_.accept("P1")) st.kind = ScriptStep::Kind::P1;
          else if (ts_.accept("P2")) st.kind = ScriptStep::Kind::P2;
          else ts_.fail("expected P1 or P2");
          ts_.expect("(");
          const std::size_t n = st.kind == ScriptStep::Kind::P1 ? 1 : 2;
          for (std::size_t i = 0; i < n; ++i) {
            st.events.push_back(ts_.expect_ident("event name"));
            ts_.expect(",");
          }
          st.h = parse_expr(ts_);
          ts_.expect(")");
          t.script.push_back(std::move(st));
        }
      } else {
        ts_.fail("expected schedule, script or end");
      }
    }
    if (!have_schedule) ts_.fail("task " + t.name + " has no schedule");
    file_.tasks.push_back(std::move(t));
  }

  TokenStream ts_;
  ModelFile file_;
};

void write_labelled(std::ostream& os, const Labelled& l, const char* indent) {
  os << indent;
  if (!l.label.empty()) os << '@' << l.label << ' ';
  os << to_string(l.expr) << '\n';
}

void write_action(std::ostream& os, const Action& a, const char* indent) {
  os << indent;
  if (!a.label.empty()) os << '@' << a.label << ' ';
  os << a.to_string() << '\n';
}

void write_event(std::ostream& os, const Event& e, const char* head, const char* indent) {
  os << head << "event " << e.name << ' ' << to_string(e.convergence) << '\n';
  if (!e.guards.empty()) {
    os << indent << "when\n";
    for (const auto& g : e.guards) write_labelled(os, g, (std::string(indent) + "  ").c_str());
  }
  if (!e.actions.empty()) {
    os << indent << "then\n";
    for (const auto& a : e.actions) write_action(os, a, (std::string(indent) + "  ").c_str());
  }
  os << indent << "end\n";
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

}  // namespace

const TaskDecl* ModelFile::find_task(const std::string& name) const {
  for (const auto& t : tasks)
    if (t.name == name) return &t;
  return nullptr;
}

std::optional<std::string> ModelFile::refines_path() const {
  if (!refines) return std::nullopt;
  std::filesystem::path p(*refines);
  if (p.is_absolute() || origin.empty()) return p.string();
  return (std::filesystem::path(origin).parent_path() / p).string();
}

ModelFile parse_model(const std::string& text, const std::string& origin) { return Parser(text, origin).run(); }

ModelFile load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str(), path);
}

std::string write_model(const ModelFile& f) {
  std::ostringstream os;
  const Machine& m = f.machine;
  if (!m.name.empty()) os << "machine " << m.name << "\n";
  if (f.refines) os << "refines " << quote(*f.refines) << "\n";
  if (!m.constants.empty()) {
    os << "\nconstants\n";
    for (const auto& [k, v] : m.constants) os << "  " << k << " = " << v << '\n';
    os << "end\n";
  }
  os << "\nvariables\n";
  for (const auto& v : m.variables) os << "  " << v.name << " : " << v.domain.to_string() << '\n';
  os << "end\n";
  if (!m.tables.empty()) {
    os << "\nfunctions\n";
    for (const auto& t : m.tables) {
      os << "  " << t.name << '(';
      for (std::size_t i = 0; i < t.params.size(); ++i) os << (i ? ", " : "") << t.params[i].to_string();
      os << ") = {";
      bool first = true;
      for (const auto& [key, val] : t.entries) {
        os << (first ? "\n    " : ",\n    ") << '(';
        for (std::size_t i = 0; i < key.size(); ++i) os << (i ? ", " : "") << t.params[i].format(key[i]);
        os << ") |-> " << val;
        first = false;
      }
      os << "\n  }\n";
    }
    os << "end\n";
  }
  os << "\ninvariant\n";
  for (const auto& l : m.invariant) write_labelled(os, l, "  ");
  os << "end\n";
  if (m.variant) os << "\nvariant\n  " << to_string(m.variant) << "\nend\n";
  os << "\ninitialisation\n";
  for (const auto& a : m.init.actions) write_action(os, a, "  ");
  os << "end\n";
  for (const auto& e : m.events) {
    os << '\n';
    write_event(os, e, "", "");
  }
  os << "\nfinalisation\n";
  if (!m.fin.guards.empty()) {
    os << "when\n";
    for (const auto& g : m.fin.guards) write_labelled(os, g, "  ");
  }
  os << "end\n";
  if (f.partition) {
    os << "\ndecomposition\n";
    if (!f.partition->shared.empty()) {
      os << "  shared";
      for (const auto& s : f.partition->shared) os << ' ' << s;
      os << '\n';
    }
    for (const auto& b : f.partition->blocks) {
      os << "  submodel " << b.name << '\n';
      if (!b.variables.empty()) {
        os << "    variables";
        for (const auto& v : b.variables) os << ' ' << v;
        os << '\n';
      }
      if (!b.events.empty()) {
        os << "    events";
        for (const auto& e : b.events) os << ' ' << e;
        os << '\n';
      }
      for (const auto& o : b.overrides) write_event(os, o, "    external ", "    ");
      os << "  end\n";
    }
    os << "end\n";
  }
  for (const auto& t : f.tasks) {
    os << "\ntask " << t.name << " of " << t.submodel << '\n';
    os << "  schedule " << quote(t.schedule) << '\n';
    if (!t.script.empty()) {
      os << "  script\n";
      for (const auto& s : t.script) {
        os << "    " << (s.kind == ScriptStep::Kind::P1 ? "P1(" : "P2(");
        for (const auto& e : s.events) os << e << ", ";
        os << to_string(s.h) << ")\n";
      }
      os << "  end\n";
    }
    os << "end\n";
  }
  if (!f.options.empty()) {
    os << "\noptions\n";
    for (const auto& [k, v] : f.options) os << "  " << k << " = " << v << '\n';
    os << "end\n";
  }
  return os.str();
}

std::string digest(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ebsched::cli
