#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "ebsched/cli/model_file.hpp"
#include "ebsched/error.hpp"
#include "ebsched/model/compose.hpp"

using namespace ebsched;
using namespace ebsched::model;

namespace {

std::string corpus(const std::string& name) { return std::string(EBSCHED_CORPUS_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string explain(const Verdict& v) {
  std::ostringstream os;
  os << v.id << ": " << v.message;
  for (const auto& w : v.witnesses) os << "\n  " << v.space->format(w.state) << " " << w.note;
  return os.str();
}

struct Forks {
  cli::ModelFile file = cli::load_model(corpus("dining_forks.ebt"));
  Elaboration el = elaborate(file.machine);
};

const Forks& forks() {
  static const Forks f;
  return f;
}

}  // namespace

TEST(Expr, ParsePrintRoundTrip) {
  for (const char* text : {"a = 1 and (b or not c)", "x + 2 * y - 3 >= 4", "p => q => r", "(p => q) => r",
                           "bool(x = 1)", "-x < 0", "f(TRUE, x) = 2", "x in 0..3", "x in {1, 2}"}) {
    const std::string once = to_string(*parse_expr(text));
    EXPECT_EQ(once, to_string(*parse_expr(once))) << text;
  }
  EXPECT_EQ(to_string(*parse_expr("(a and b) or c")), "a and b or c");
  EXPECT_EQ(to_string(*parse_expr("a and (b or c)")), "a and (b or c)");
}

TEST(ModelFile, SyntaxErrorsCarryPositions) {
  try {
    cli::parse_model("machine M\nvariables x : 0..1 end\ninvariant @i x = (1 end\n");
    FAIL();
  } catch (const ebsched::ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("3:"), std::string::npos) << e.what();
  }
}

TEST(ModelFile, WriteParseRoundTrip) {
  const auto& f = forks().file;
  const std::string once = cli::write_model(f);
  const auto again = cli::parse_model(once);
  EXPECT_EQ(once, cli::write_model(again));
  EXPECT_EQ(again.machine.events.size(), 20u);
  EXPECT_EQ(again.tasks.size(), 4u);
}

TEST(Corpus, ForkMachineWellFormed) {
  const auto& el = forks().el;
  EXPECT_EQ(el.space->size(), 10000u);
  EXPECT_EQ(el.events.size(), 20u);
  const auto init = el.init.to_vector();
  ASSERT_EQ(init.size(), 1u);
  EXPECT_EQ(el.variant.at(init[0]), 20);
  const auto inv = check_invariant(el);
  EXPECT_TRUE(inv.pass) << explain(inv);
  const auto var = check_convergence_variant(el);
  EXPECT_TRUE(var.pass) << explain(var);
  const auto sem = check_convergence_semantic(el);
  EXPECT_TRUE(sem.pass) << explain(sem);
}

TEST(Corpus, AbstractMachine) {
  const auto file = cli::load_model(corpus("dining_abstract.ebt"));
  const auto el = elaborate(file.machine);
  EXPECT_EQ(el.space->size(), 16u);
  EXPECT_TRUE(check_invariant(el).pass);
  EXPECT_TRUE(check_convergence_semantic(el).pass);
}

TEST(Corpus, ForksRefineAbstract) {
  const auto& f = forks();
  ASSERT_TRUE(f.file.refines_path());
  const auto abs = cli::load_model(*f.file.refines_path());
  const auto ael = elaborate(abs.machine);
  const auto verdicts = check_machine_refinement(abs.machine, ael, f.file.machine, f.el);
  // init, guard and action per abstract event, skip per new event, variant, fin
  EXPECT_EQ(verdicts.size(), 1u + 4 * 2 + 16 + 1 + 1);
  for (const auto& v : verdicts) EXPECT_TRUE(v.pass) << explain(v);
}

TEST(Corpus, DecompositionTable) {
  const auto& f = forks();
  ASSERT_TRUE(f.file.partition);
  const auto parts = decompose(f.file.machine, *f.file.partition);
  EXPECT_EQ(decomposition_table(parts), slurp(std::string(EBSCHED_GOLDEN_DIR) + "/decomposition.txt"));
}

TEST(Corpus, ExternalAbstraction) {
  const auto& f = forks();
  const auto parts = decompose(f.file.machine, *f.file.partition);
  std::size_t checked = 0;
  for (std::size_t a = 0; a < parts.size(); ++a)
    for (std::size_t b = a + 1; b < parts.size(); ++b)
      for (const auto& v : check_external_abstraction(f.file.machine, parts[a], parts[b])) {
        EXPECT_TRUE(v.pass) << explain(v);
        ++checked;
      }
  EXPECT_EQ(checked, 16u);
}

TEST(Corpus, ComposedSubModelsGiveBackTheMachine) {
  const auto& f = forks();
  const auto parts = decompose(f.file.machine, *f.file.partition);
  const auto whole = compose_all(parts);
  EXPECT_TRUE(whole.externals.empty());
  EXPECT_EQ(whole.events.size(), 20u);
  EXPECT_EQ(whole.variables().size(), 8u);
}

namespace {

const kernel::Witness& first_witness(const Verdict& v) {
  EXPECT_FALSE(v.witnesses.empty()) << v.id;
  return v.witnesses.front();
}

Value value(const Verdict& v, StateIndex s, const std::string& var) {
  return v.space->value_of(s, *v.space->find(var));
}

}  // namespace

TEST(Mutants, BrokenVariant) {
  const auto file = cli::load_model(corpus("mutants/broken_variant.ebt"));
  const auto v = check_convergence_variant(elaborate(file.machine));
  EXPECT_FALSE(v.pass);
  EXPECT_EQ(v.id, "CONV.variant");
  const auto& w = first_witness(v);
  EXPECT_EQ(value(v, w.state, "fork2") == 1 || value(v, w.state, "fork3") == 2 ||
                value(v, w.state, "fork4") == 3 || value(v, w.state, "fork4") == 4,
            true);
}

TEST(Mutants, InvariantBrokenByGetFork1) {
  const auto file = cli::load_model(corpus("mutants/invariant_fork1.ebt"));
  const auto v = check_invariant(elaborate(file.machine));
  EXPECT_FALSE(v.pass);
  const auto& w = first_witness(v);
  ASSERT_TRUE(w.post);
  EXPECT_EQ(value(v, *w.post, "fork1"), 1);
}

TEST(Mutants, AssignmentOutOfDomain) {
  const auto file = cli::load_model(corpus("mutants/out_of_domain.ebt"));
  try {
    elaborate(file.machine);
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_NE(std::string(e.what()).find("Ph1GetFork1"), std::string::npos) << e.what();
  }
}

TEST(Mutants, WeakenedGuardFailsRefinement) {
  const auto file = cli::load_model(corpus("mutants/guard_weakened.ebt"));
  const auto abs = cli::load_model(*file.refines_path());
  const auto verdicts =
      check_machine_refinement(abs.machine, elaborate(abs.machine), file.machine, elaborate(file.machine));
  std::vector<std::string> failed;
  for (const auto& v : verdicts)
    if (!v.pass) {
      failed.push_back(v.id);
      const auto& w = first_witness(v);
      EXPECT_EQ(value(v, w.state, "ph1eaten"), 1);
      EXPECT_EQ(value(v, w.state, "fork1"), 1);
      EXPECT_EQ(value(v, w.state, "fork2"), 1);
    }
  // Eating twice also stops the variant from decreasing.
  EXPECT_EQ(failed, (std::vector<std::string>{"REF.guard.Ph1Eat", "REF.variant"}));
}

TEST(Mutants, SelfLoopIsNotConvergent) {
  const auto file = cli::load_model(corpus("mutants/relfork1_loop.ebt"));
  const auto el = elaborate(file.machine);
  EXPECT_FALSE(check_convergence_variant(el).pass);
  const auto sem = check_convergence_semantic(el);
  EXPECT_FALSE(sem.pass);
  const auto& w = first_witness(sem);
  EXPECT_TRUE(el.invariant.test(w.state)) << sem.space->format(w.state);
}

TEST(Mutants, OverriddenExternalFailsAbstraction) {
  const auto file = cli::load_model(corpus("mutants/external_override.ebt"));
  const auto parts = decompose(file.machine, *file.partition);
  const auto verdicts = check_external_abstraction(file.machine, parts[0], parts[1]);
  std::vector<std::string> failed;
  for (const auto& v : verdicts)
    if (!v.pass) failed.push_back(v.id);
  EXPECT_EQ(failed, std::vector<std::string>{"EXT.Sub1.Ph2GetFork2"});
}

TEST(Mutants, UnbalancedBraces) {
  EXPECT_THROW(cli::load_model(corpus("mutants/unbalanced_braces.ebt")), ebsched::ParseError);
}
