#include <set>

#include "ebsched/kernel/kernels.hpp"

namespace ebsched::kernel::serial {

Rows compose(const Rows& a, const Rows& b, const Bits& domain) {
  std::vector<std::vector<StateIndex>> out(a.size());
  for (std::size_t s = 0; s < a.size(); ++s) {
    if (!domain.test(static_cast<StateIndex>(s))) continue;
    std::set<StateIndex> acc;
    for (auto t : a.row(static_cast<StateIndex>(s)))
      for (auto u : b.row(t)) acc.insert(u);
    out[s].assign(acc.begin(), acc.end());
  }
  return Rows::from_lists(std::move(out));
}

Bits successors_within(const Rows& r, const Bits& q) {
  Bits out(r.size());
  for (std::size_t s = 0; s < r.size(); ++s) {
    bool all = true;
    for (auto t : r.row(static_cast<StateIndex>(s))) all = all && q.test(t);
    if (all) out.set(static_cast<StateIndex>(s));
  }
  return out;
}

Bits backward_reach(const Rows& r, const Bits& targets) {
  Bits x = targets;
  for (;;) {
    Bits next = x;
    for (std::size_t s = 0; s < r.size(); ++s)
      for (auto t : r.row(static_cast<StateIndex>(s)))
        if (x.test(t)) next.set(static_cast<StateIndex>(s));
    if (next == x) return x;
    x = std::move(next);
  }
}

Bits well_founded(const Rows& r) {
  Bits x(r.size());
  for (;;) {
    Bits next = successors_within(r, x);
    if (next == x) return x;
    x = std::move(next);
  }
}

Rows closure(const Rows& r, const Bits& sources) {
  Bits everywhere(r.size(), true);
  Rows id = Rows::identity(everywhere);
  Rows c = id;
  for (;;) {
    Rows step = compose(r, c, everywhere);
    std::vector<std::vector<StateIndex>> merged(r.size());
    for (std::size_t s = 0; s < r.size(); ++s) {
      std::set<StateIndex> acc(c.row(static_cast<StateIndex>(s)).begin(),
                               c.row(static_cast<StateIndex>(s)).end());
      for (auto t : step.row(static_cast<StateIndex>(s))) acc.insert(t);
      merged[s].assign(acc.begin(), acc.end());
    }
    Rows next = Rows::from_lists(std::move(merged));
    if (next == c) break;
    c = std::move(next);
  }
  std::vector<std::vector<StateIndex>> out(r.size());
  for (std::size_t s = 0; s < r.size(); ++s)
    if (sources.test(static_cast<StateIndex>(s))) {
      auto row = c.row(static_cast<StateIndex>(s));
      out[s].assign(row.begin(), row.end());
    }
  return Rows::from_lists(std::move(out));
}

}  // namespace ebsched::kernel::serial
