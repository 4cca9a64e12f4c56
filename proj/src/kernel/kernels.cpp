#include "ebsched/kernel/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cassert>
#include <deque>

#include "ebsched/kernel/parallel.hpp"

namespace ebsched::kernel::par {

namespace {

Rows build_sorted(std::vector<std::vector<StateIndex>>& lists) {
  RowsBuilder b(lists.size());
  for (auto& l : lists) b.append_row(l);
  return b.finish();
}

/// Reverse adjacency in compressed form.
struct Reverse {
  std::vector<std::size_t> offsets;
  std::vector<StateIndex> preds;

  explicit Reverse(const Rows& r) : offsets(r.size() + 1, 0) {
    const std::size_t n = r.size();
    for (std::size_t s = 0; s < n; ++s)
      for (auto t : r.row(static_cast<StateIndex>(s))) ++offsets[t + 1];
    for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
    preds.resize(r.pair_count());
    std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
    for (std::size_t s = 0; s < n; ++s)
      for (auto t : r.row(static_cast<StateIndex>(s)))
        preds[fill[t]++] = static_cast<StateIndex>(s);
  }

  std::span<const StateIndex> of(StateIndex t) const {
    return {preds.data() + offsets[t], offsets[t + 1] - offsets[t]};
  }
};

}  // namespace

Rows restrict_domain(const Rows& r, const Bits& domain) {
  assert(r.size() == domain.size());
  RowsBuilder b(r.size());
  for (std::size_t s = 0; s < r.size(); ++s) {
    if (domain.test(static_cast<StateIndex>(s)))
      b.append_row(r.row(static_cast<StateIndex>(s)));
    else
      b.append_row({});
  }
  return b.finish();
}

Rows compose(const Rows& a, const Rows& b, const Bits& domain) {
  const std::size_t n = a.size();
  assert(b.size() == n && domain.size() == n);
  std::vector<std::vector<StateIndex>> out(n);
#pragma omp parallel num_threads(worker_count())
  {
    std::vector<std::uint32_t> stamp(n, 0);
    std::uint32_t gen = 0;
#pragma omp for schedule(dynamic, 64)
    for (long s = 0; s < static_cast<long>(n); ++s) {
      auto st = static_cast<StateIndex>(s);
      if (!domain.test(st)) continue;
      ++gen;
      auto& dst = out[s];
      for (auto t : a.row(st))
        for (auto u : b.row(t))
          if (stamp[u] != gen) {
            stamp[u] = gen;
            dst.push_back(u);
          }
      std::sort(dst.begin(), dst.end());
    }
  }
  return build_sorted(out);
}

Rows unite(const Rows& a, const Rows& b, const Bits& domain) {
  const std::size_t n = a.size();
  assert(b.size() == n && domain.size() == n);
  std::vector<std::vector<StateIndex>> out(n);
#pragma omp parallel for num_threads(worker_count()) schedule(dynamic, 256)
  for (long s = 0; s < static_cast<long>(n); ++s) {
    auto st = static_cast<StateIndex>(s);
    if (!domain.test(st)) continue;
    auto ra = a.row(st);
    auto rb = b.row(st);
    out[s].reserve(ra.size() + rb.size());
    std::set_union(ra.begin(), ra.end(), rb.begin(), rb.end(), std::back_inserter(out[s]));
  }
  return build_sorted(out);
}

Bits successors_within(const Rows& r, const Bits& q) {
  const std::size_t n = r.size();
  assert(q.size() == n);
  std::vector<char> ok(n, 0);
#pragma omp parallel for num_threads(worker_count()) schedule(static)
  for (long s = 0; s < static_cast<long>(n); ++s) {
    bool all = true;
    for (auto t : r.row(static_cast<StateIndex>(s)))
      if (!q.test(t)) {
        all = false;
        break;
      }
    ok[s] = all;
  }
  Bits out(n);
  for (std::size_t s = 0; s < n; ++s)
    if (ok[s]) out.set(static_cast<StateIndex>(s));
  return out;
}

Bits image(const Rows& r, const Bits& from) {
  Bits out(r.size());
  from.for_each([&](StateIndex s) {
    for (auto t : r.row(s)) out.set(t);
  });
  return out;
}

Bits backward_reach(const Rows& r, const Bits& targets) {
  Reverse rev(r);
  Bits seen = targets;
  std::deque<StateIndex> work;
  targets.for_each([&](StateIndex s) { work.push_back(s); });
  while (!work.empty()) {
    auto t = work.front();
    work.pop_front();
    for (auto p : rev.of(t))
      if (!seen.test(p)) {
        seen.set(p);
        work.push_back(p);
      }
  }
  return seen;
}

Bits forward_reach(const Rows& r, const Bits& from) {
  Bits seen = from;
  std::deque<StateIndex> work;
  from.for_each([&](StateIndex s) { work.push_back(s); });
  while (!work.empty()) {
    auto s = work.front();
    work.pop_front();
    for (auto t : r.row(s))
      if (!seen.test(t)) {
        seen.set(t);
        work.push_back(t);
      }
  }
  return seen;
}

Bits well_founded(const Rows& r) {
  const std::size_t n = r.size();
  Reverse rev(r);
  std::vector<std::size_t> pending(n);
  std::vector<StateIndex> work;
  for (std::size_t s = 0; s < n; ++s) {
    pending[s] = r.row(static_cast<StateIndex>(s)).size();
    if (pending[s] == 0) work.push_back(static_cast<StateIndex>(s));
  }
  Bits wf(n);
  while (!work.empty()) {
    auto t = work.back();
    work.pop_back();
    wf.set(t);
    for (auto p : rev.of(t))
      if (--pending[p] == 0) work.push_back(p);
  }
  return wf;
}

Rows closure(const Rows& r, const Bits& sources) {
  const std::size_t n = r.size();
  std::vector<std::vector<StateIndex>> out(n);
#pragma omp parallel num_threads(worker_count())
  {
    std::vector<std::uint32_t> stamp(n, 0);
    std::uint32_t gen = 0;
    std::vector<StateIndex> stack;
#pragma omp for schedule(dynamic, 16)
    for (long s = 0; s < static_cast<long>(n); ++s) {
      auto st = static_cast<StateIndex>(s);
      if (!sources.test(st)) continue;
      ++gen;
      auto& dst = out[s];
      stamp[st] = gen;
      stack.assign(1, st);
      while (!stack.empty()) {
        auto u = stack.back();
        stack.pop_back();
        dst.push_back(u);
        for (auto v : r.row(u))
          if (stamp[v] != gen) {
            stamp[v] = gen;
            stack.push_back(v);
          }
      }
      std::sort(dst.begin(), dst.end());
    }
  }
  return build_sorted(out);
}

std::optional<std::pair<StateIndex, StateIndex>> first_excess(const Rows& sub, const Rows& super,
                                                              const Bits& domain) {
  std::optional<std::pair<StateIndex, StateIndex>> found;
  domain.for_each([&](StateIndex s) {
    if (found) return;
    auto a = sub.row(s);
    auto b = super.row(s);
    for (auto t : a)
      if (!std::binary_search(b.begin(), b.end(), t)) {
        found = std::make_pair(s, t);
        return;
      }
  });
  return found;
}

}  // namespace ebsched::kernel::par
