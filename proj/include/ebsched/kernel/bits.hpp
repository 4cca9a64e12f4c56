#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace ebsched::kernel {

using StateIndex = std::uint32_t;

/// Fixed-size dense bitset over state indices 0..size-1.
class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t n, bool value = false);

  static Bits single(std::size_t n, StateIndex i);

  std::size_t size() const { return n_; }
  bool test(StateIndex i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(StateIndex i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(StateIndex i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  std::size_t count() const;
  bool none() const;
  bool all() const;

  Bits& operator&=(const Bits& o);
  Bits& operator|=(const Bits& o);
  Bits& operator-=(const Bits& o);
  Bits operator~() const;
  friend Bits operator&(Bits a, const Bits& b) { return a &= b; }
  friend Bits operator|(Bits a, const Bits& b) { return a |= b; }
  friend Bits operator-(Bits a, const Bits& b) { return a -= b; }
  bool operator==(const Bits& o) const = default;

  bool is_subset_of(const Bits& o) const;
  bool intersects(const Bits& o) const;

  /// Lowest member of this \ other, if any.
  std::optional<StateIndex> first_not_in(const Bits& other) const;
  std::optional<StateIndex> first() const;

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t word = words_[w];
      while (word != 0) {
        int bit = __builtin_ctzll(word);
        f(static_cast<StateIndex>(w * 64 + bit));
        word &= word - 1;
      }
    }
  }

  std::vector<StateIndex> to_vector() const;

  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  void trim();

  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace ebsched::kernel
