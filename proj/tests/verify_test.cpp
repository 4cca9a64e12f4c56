#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "ebsched/cli/model_file.hpp"
#include "ebsched/verify/verify.hpp"

using namespace ebsched;
using namespace ebsched::verify;

namespace {

std::string corpus(const std::string& name) { return std::string(EBSCHED_CORPUS_DIR) + "/" + name; }

std::string explain(const Obligation& o) {
  std::ostringstream os;
  os << o.id << " " << (o.pass() ? "pass" : "FAIL") << " " << o.verdict.message;
  for (const auto& w : o.verdict.witnesses) {
    os << "\n    " << o.verdict.space->format(w.state);
    if (w.post) os << " -> " << o.verdict.space->format(*w.post);
  }
  return os.str();
}

struct Loaded {
  cli::ModelFile file;
  std::vector<model::SubModel> parts;

  explicit Loaded(const std::string& name)
      : file(cli::load_model(corpus(name))), parts(model::decompose(file.machine, *file.partition)) {}

  const model::SubModel& part(const std::string& n) const {
    for (const auto& p : parts)
      if (p.name == n) return p;
    throw std::runtime_error(n);
  }
  TaskReport task(const std::string& n) const {
    const auto* t = file.find_task(n);
    return verify_task(file.machine, part(t->submodel), *t);
  }
};

const Loaded& forks() {
  static const Loaded l("dining_forks.ebt");
  return l;
}

}  // namespace

TEST(VerifyTask, AllFourTasksPass) {
  for (const char* name : {"Task1", "Task2", "Task3", "Task4"}) {
    const auto rep = forks().task(name);
    for (const auto* o : rep.all()) EXPECT_TRUE(o->pass()) << name << " " << explain(*o);
    EXPECT_EQ(rep.steps.size(), 4u);
    ASSERT_EQ(rep.decomposition.size(), 4u);
    EXPECT_EQ(rep.decomposition[1].size(), 2u);
  }
}

namespace {

std::vector<std::string> failing(const TaskReport& rep) {
  std::vector<std::string> out;
  for (const auto* o : rep.all())
    if (!o->pass()) out.push_back(o->id);
  return out;
}

bool has(const std::vector<std::string>& v, const std::string& id) {
  return std::find(v.begin(), v.end(), id) != v.end();
}

std::int64_t value(const Obligation& o, kernel::StateIndex s, const std::string& var) {
  return o.verdict.space->value_of(s, *o.verdict.space->find(var));
}

const Obligation& find(const TaskReport& rep, const std::string& id) {
  for (const auto* o : rep.all())
    if (o->id == id) return *o;
  throw std::runtime_error("no obligation " + id);
}

}  // namespace

TEST(VerifyTask, FirstStepInstantiation) {
  const auto rep = forks().task("Task1");
  const auto& s = rep.steps.front();
  EXPECT_EQ(s.app.events, std::vector<std::string>{"Ph1GetFork1"});
  EXPECT_EQ(model::to_string(*s.app.h), "fork1 /= 1 and ph1eaten = FALSE");
  EXPECT_EQ(model::to_string(*s.app.g), "fork1 = 1 or ph1eaten = TRUE");
  std::vector<std::string> ids;
  for (const auto& o : s.obligations) ids.push_back(o.id);
  EXPECT_EQ(ids, (std::vector<std::string>{"P1.A1", "P1.A2", "P1.A3", "P1.A4", "P1.A5", "P1.STEP"}));
  std::vector<std::string> p2;
  for (const auto& o : rep.steps[1].obligations) p2.push_back(o.id);
  EXPECT_EQ(p2, (std::vector<std::string>{"P2.A1", "P2.A2", "P2.A3", "P2.A4", "P2.A5", "P2.A6", "P2.A7", "P2.B1",
                                          "P2.B2", "P2.B3"}));
}

TEST(VerifyTask, WeakenedAssertionFailsWithWitness) {
  const Loaded l("mutants/g1_weakened.ebt");
  const auto rep = l.task("Task1");
  const auto bad = failing(rep);
  ASSERT_TRUE(has(bad, "P1.A3") || has(bad, "P1.A5")) << ::testing::PrintToString(bad);
  const auto& a3 = find(rep, "P1.A3");
  ASSERT_FALSE(a3.pass());
  const auto& w = a3.verdict.witnesses.front();
  // Philosopher 1 has eaten and puts fork 1 down, leaving g.
  EXPECT_EQ(value(a3, w.state, "fork1"), 1);
  EXPECT_EQ(value(a3, w.state, "ph1eaten"), 1);
  EXPECT_TRUE(find(rep, "P1.A5").pass());
}

TEST(VerifyTask, InterferingExternalEventFailsP2) {
  const Loaded l("mutants/external_override.ebt");
  const auto bad = failing(l.task("Task1"));
  EXPECT_TRUE(has(bad, "P2.A3") || has(bad, "P2.A4")) << ::testing::PrintToString(bad);
}

TEST(VerifyTask, FiveStepScriptDoesNotTile) {
  auto file = forks().file;
  auto* t = const_cast<model::TaskDecl*>(file.find_task("Task1"));
  // P1, P2, P1, P1, P1: the fifth step finds no event left.
  t->script.push_back(t->script.back());
  const auto rep = verify_task(file.machine, forks().part("Sub1"), *t);
  ASSERT_EQ(failing(rep), std::vector<std::string>{"TASK.tiling"});
  EXPECT_NE(find(rep, "TASK.tiling").verdict.message.find("step 5"), std::string::npos);
}

TEST(VerifyTask, ScriptMustCoverTheSchedule) {
  auto file = forks().file;
  auto* t = const_cast<model::TaskDecl*>(file.find_task("Task1"));
  t->script.pop_back();
  EXPECT_EQ(failing(verify_task(file.machine, forks().part("Sub1"), *t)), std::vector<std::string>{"TASK.tiling"});
}

TEST(VerifyTask, WrongPreconditionIsCaught) {
  auto file = forks().file;
  auto* t = const_cast<model::TaskDecl*>(file.find_task("Task1"));
  // h for the release of fork 2 that forgets the forks are held.
  t->script[2].h = model::parse_expr("ph1eaten = TRUE");
  const auto bad = failing(verify_task(file.machine, forks().part("Sub1"), *t));
  EXPECT_FALSE(bad.empty());
}

TEST(VerifySystem, ForksPass) {
  const auto& l = forks();
  std::vector<TaskReport> reps;
  for (const auto& t : l.file.tasks) reps.push_back(verify_task(l.file.machine, l.part(t.submodel), t));
  const auto el = model::elaborate(l.file.machine);
  const auto sys = verify_system(l.file.machine, el, l.parts, l.file.tasks, reps);
  std::size_t ext = 0;
  for (const auto& o : sys.obligations) {
    EXPECT_TRUE(o.pass()) << explain(o);
    ext += o.id.rfind("SYS.ext.", 0) == 0;
  }
  EXPECT_EQ(ext, 16u);
}

TEST(VerifySystem, BadOrderDeadlocks) {
  const Loaded l("dining_forks_bad.ebt");
  std::vector<TaskReport> reps;
  for (const auto& t : l.file.tasks) {
    reps.push_back(verify_task(l.file.machine, l.part(t.submodel), t));
    EXPECT_TRUE(reps.back().pass()) << t.name;
  }
  const auto el = model::elaborate(l.file.machine);
  const auto sys = verify_system(l.file.machine, el, l.parts, l.file.tasks, reps);
  std::vector<std::string> bad;
  for (const auto& o : sys.obligations)
    if (!o.pass()) bad.push_back(o.id);
  ASSERT_TRUE(has(bad, "SYS.deadlock")) << ::testing::PrintToString(bad);
  const auto cycle = el.space->encode(std::vector<kernel::Value>{1, 2, 3, 4, 0, 0, 0, 0});
  for (const auto& o : sys.obligations) {
    if (o.id != "SYS.deadlock") continue;
    bool found = false;
    for (const auto& w : o.verdict.witnesses) {
      found |= w.state == cycle;
      // Every stuck state has each philosopher holding one fork.
      EXPECT_EQ(value(o, w.state, "fork1"), 1);
      EXPECT_EQ(value(o, w.state, "fork2"), 2);
      EXPECT_EQ(value(o, w.state, "fork3"), 3);
      EXPECT_EQ(value(o, w.state, "fork4"), 4);
    }
    EXPECT_TRUE(found);
  }
}
