#pragma once

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ebsched/cli/model_file.hpp"
#include "ebsched/model/elaborate.hpp"
#include "ebsched/sched/schedule.hpp"

namespace ebsched::testing {

inline std::string corpus(const std::string& name) { return std::string(EBSCHED_CORPUS_DIR) + "/" + name; }

/// A corpus model with its machine elaborated and partition applied.
struct Loaded {
  cli::ModelFile file;
  std::vector<model::SubModel> parts;
  model::Elaboration el;

  explicit Loaded(const std::string& name)
      : file(cli::load_model(corpus(name))),
        parts(file.partition ? model::decompose(file.machine, *file.partition) : std::vector<model::SubModel>{}),
        el(model::elaborate(file.machine)) {}

  const model::SubModel& part(const std::string& n) const {
    for (const auto& p : parts)
      if (p.name == n) return p;
    throw std::runtime_error(n);
  }
};

/// Random schedule over the given events; assertions are TRUE or FALSE.
inline sched::NodePtr random_schedule(std::mt19937_64& rng, const std::vector<std::string>& events, int depth) {
  const int pick = static_cast<int>(rng() % (depth <= 0 ? 3 : 7));
  switch (pick) {
    case 0: return sched::make_event(events[rng() % events.size()]);
    case 1: return sched::make_assert(model::make_bool(rng() % 2 == 0));
    case 2: return sched::make_end();
    case 3:
    case 4: return sched::make_seq(random_schedule(rng, events, depth - 1), random_schedule(rng, events, depth - 1));
    case 5: return sched::make_loop(random_schedule(rng, events, depth - 1));
    default: {
      std::vector<sched::NodePtr> alts;
      const int n = 2 + static_cast<int>(rng() % 2);
      for (int i = 0; i < n; ++i) alts.push_back(random_schedule(rng, events, depth - 1));
      return sched::make_choice(std::move(alts));
    }
  }
}

}  // namespace ebsched::testing
