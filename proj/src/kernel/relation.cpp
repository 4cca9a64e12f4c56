#include "ebsched/kernel/relation.hpp"

#include <algorithm>
#include <cassert>

namespace ebsched::kernel {

Rows Rows::from_lists(std::vector<std::vector<StateIndex>> lists) {
  RowsBuilder b(lists.size());
  for (auto& l : lists) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
    b.append_row(l);
  }
  return b.finish();
}

Rows Rows::from_pairs(std::size_t n,
                      std::vector<std::pair<StateIndex, StateIndex>> pairs) {
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  Rows r;
  r.offsets_.assign(n + 1, 0);
  r.targets_.reserve(pairs.size());
  for (auto& [a, b] : pairs) {
    assert(a < n && b < n);
    ++r.offsets_[a + 1];
    r.targets_.push_back(b);
  }
  for (std::size_t i = 0; i < n; ++i) r.offsets_[i + 1] += r.offsets_[i];
  return r;
}

Rows Rows::identity(const Bits& on) {
  Rows r;
  r.offsets_.assign(on.size() + 1, 0);
  for (std::size_t s = 0; s < on.size(); ++s) {
    r.offsets_[s + 1] = r.offsets_[s];
    if (on.test(static_cast<StateIndex>(s))) {
      r.targets_.push_back(static_cast<StateIndex>(s));
      ++r.offsets_[s + 1];
    }
  }
  return r;
}

bool Rows::contains(StateIndex from, StateIndex to) const {
  auto r = row(from);
  return std::binary_search(r.begin(), r.end(), to);
}

std::vector<std::pair<StateIndex, StateIndex>> Rows::pairs() const {
  std::vector<std::pair<StateIndex, StateIndex>> out;
  out.reserve(targets_.size());
  for (std::size_t s = 0; s < size(); ++s)
    for (auto t : row(static_cast<StateIndex>(s)))
      out.emplace_back(static_cast<StateIndex>(s), t);
  return out;
}

void RowsBuilder::append_row(std::span<const StateIndex> targets) {
  rows_.targets_.insert(rows_.targets_.end(), targets.begin(), targets.end());
  rows_.offsets_.push_back(rows_.targets_.size());
}

Rows RowsBuilder::finish() {
  assert(rows_.offsets_.size() == expected_ + 1);
  return std::move(rows_);
}

}  // namespace ebsched::kernel
