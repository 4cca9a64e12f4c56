#include "ebsched/runtime/run.hpp"

#include <condition_variable>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

namespace ebsched::runtime {

std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Completed: return "completed";
    case Outcome::Deadlocked: return "deadlocked";
    case Outcome::AssertionFailed: return "assertion-failed";
    case Outcome::StepLimit: return "step-limit";
  }
  return "?";
}

namespace {

enum class Reply { None, Moved, MovedToEnd, Blocked, Finished, Ready, Failed };

struct Shared {
  std::mutex m;
  std::condition_variable cv;
  StateIndex state = 0;
  std::vector<Step> trace;
  int turn = -1;
  bool stop = false;
  Reply reply = Reply::None;
  std::string message;
};

std::uint64_t pick(std::mt19937_64& rng, std::size_t n) { return rng() % n; }

class Worker {
 public:
  Worker(const TaskSystem& sys, int k, std::uint64_t seed, Shared& sh)
      : sys_(sys), p_(sys.tasks[static_cast<std::size_t>(k)]), k_(k),
        rng_(seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(k) + 1), sh_(sh) {}

  void operator()() {
    std::unique_lock lock(sh_.m);
    bool started = false;
    for (;;) {
      sh_.cv.wait(lock, [&] { return sh_.stop || sh_.turn == k_; });
      if (sh_.stop) return;
      sh_.reply = started ? step() : enter(p_.automaton.initial);
      started = true;
      sh_.turn = -1;
      sh_.cv.notify_all();
    }
  }

 private:
  /// Settles from `loc` in the current state and picks one branch.
  Reply enter(int loc) {
    const auto options = settle(p_, loc, sh_.state);
    const auto& st = options[pick(rng_, options.size())];
    if (st.failed_assert >= 0) {
      const auto& t = p_.automaton.transitions[static_cast<std::size_t>(st.failed_assert)];
      sh_.message = p_.name + ": assertion {" + model::to_string(t.expr) + "} failed";
      return Reply::Failed;
    }
    loc_ = st.location;
    return p_.automaton.out[static_cast<std::size_t>(loc_)].empty() ? Reply::Finished : Reply::Ready;
  }

  Reply step() {
    const auto ms = moves(p_, *sys_.el, loc_, sh_.state);
    if (ms.empty()) return Reply::Blocked;
    const auto& m = ms[pick(rng_, ms.size())];
    sh_.trace.push_back({k_, m.event, sh_.state, m.post});
    sh_.state = m.post;
    const Reply r = enter(p_.automaton.transitions[static_cast<std::size_t>(m.transition)].to);
    if (r == Reply::Failed) return r;
    return r == Reply::Finished ? Reply::MovedToEnd : Reply::Moved;
  }

  const TaskSystem& sys_;
  const TaskProgram& p_;
  int k_;
  std::mt19937_64 rng_;
  Shared& sh_;
  int loc_ = 0;
};

}  // namespace

RunResult run(const TaskSystem& sys, std::uint64_t seed, std::uint64_t step_limit) {
  RunResult r;
  r.seed = seed;
  std::mt19937_64 rng(seed);
  Shared sh;
  const auto inits = sys.el->init.to_vector();
  sh.state = inits.at(pick(rng, inits.size()));
  r.initial = sh.state;

  const std::size_t n = sys.tasks.size();
  std::vector<std::thread> threads;
  threads.reserve(n);
  for (std::size_t k = 0; k < n; ++k) threads.emplace_back(Worker(sys, static_cast<int>(k), seed, sh));

  std::unique_lock lock(sh.m);
  auto grant = [&](std::size_t k) {
    sh.turn = static_cast<int>(k);
    sh.reply = Reply::None;
    sh.cv.notify_all();
    sh.cv.wait(lock, [&] { return sh.turn == -1; });
    return sh.reply;
  };

  std::vector<char> finished(n, 0), blocked(n, 0);
  bool failed = false;
  for (std::size_t k = 0; k < n && !failed; ++k) {
    const Reply rep = grant(k);
    failed = rep == Reply::Failed;
    finished[k] = rep == Reply::Finished;
  }
  if (failed) r.outcome = Outcome::AssertionFailed;
  while (!failed) {
    if (sh.trace.size() >= step_limit) {
      r.outcome = Outcome::StepLimit;
      break;
    }
    std::vector<std::size_t> ready;
    for (std::size_t k = 0; k < n; ++k)
      if (!finished[k] && !blocked[k]) ready.push_back(k);
    if (ready.empty()) {
      const bool fin = sys.el->fin.test(sh.state);
      r.outcome = fin ? Outcome::Completed : Outcome::Deadlocked;
      if (!fin) {
        sh.message = "blocked:";
        for (std::size_t k = 0; k < n; ++k)
          if (blocked[k]) sh.message += " " + sys.tasks[k].name;
      }
      break;
    }
    const std::size_t k = ready[pick(rng, ready.size())];
    switch (grant(k)) {
      case Reply::MovedToEnd:
        finished[k] = 1;
        [[fallthrough]];
      case Reply::Moved:
        std::fill(blocked.begin(), blocked.end(), 0);
        break;
      case Reply::Blocked:
        blocked[k] = 1;
        break;
      case Reply::Failed:
        failed = true;
        r.outcome = Outcome::AssertionFailed;
        break;
      default:
        break;
    }
  }
  sh.stop = true;
  sh.cv.notify_all();
  lock.unlock();
  for (auto& t : threads) t.join();

  r.trace = std::move(sh.trace);
  r.final_state = sh.state;
  r.message = std::move(sh.message);
  return r;
}

std::string trace_text(const TaskSystem& sys, const RunResult& r) {
  std::ostringstream os;
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    const auto& s = r.trace[i];
    os << i + 1 << ' ' << sys.tasks[static_cast<std::size_t>(s.task)].name << ' '
       << sys.el->events[static_cast<std::size_t>(s.event)].name << ' ' << sys.el->space->format(s.pre) << '\n';
  }
  return os.str();
}

}  // namespace ebsched::runtime
