#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ebsched/kernel/bits.hpp"

namespace ebsched::kernel {

/// Immutable binary relation on 0..size-1 in compressed-row form. Every row
/// is sorted and duplicate-free.
class Rows {
 public:
  Rows() : offsets_(1, 0) {}
  explicit Rows(std::size_t n) : offsets_(n + 1, 0) {}

  static Rows from_lists(std::vector<std::vector<StateIndex>> lists);
  static Rows from_pairs(std::size_t n,
                         std::vector<std::pair<StateIndex, StateIndex>> pairs);
  /// Identity pairs (s, s) for every s in `on`.
  static Rows identity(const Bits& on);

  std::size_t size() const { return offsets_.size() - 1; }
  std::size_t pair_count() const { return targets_.size(); }

  std::span<const StateIndex> row(StateIndex s) const {
    return {targets_.data() + offsets_[s], offsets_[s + 1] - offsets_[s]};
  }
  bool row_empty(StateIndex s) const { return offsets_[s] == offsets_[s + 1]; }
  bool contains(StateIndex from, StateIndex to) const;

  bool operator==(const Rows& o) const = default;

  std::vector<std::pair<StateIndex, StateIndex>> pairs() const;

 private:
  friend class RowsBuilder;
  std::vector<std::size_t> offsets_;
  std::vector<StateIndex> targets_;
};

/// Appends rows in order; rows handed in must already be sorted and unique.
class RowsBuilder {
 public:
  explicit RowsBuilder(std::size_t n) { rows_.offsets_.reserve(n + 1); expected_ = n; }
  void append_row(std::span<const StateIndex> targets);
  Rows finish();

 private:
  Rows rows_;
  std::size_t expected_;
};

}  // namespace ebsched::kernel
