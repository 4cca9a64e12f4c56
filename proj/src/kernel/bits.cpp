#include "ebsched/kernel/bits.hpp"

#include <cassert>

namespace ebsched::kernel {

Bits::Bits(std::size_t n, bool value)
    : n_(n), words_((n + 63) / 64, value ? ~std::uint64_t{0} : 0) {
  trim();
}

Bits Bits::single(std::size_t n, StateIndex i) {
  Bits b(n);
  b.set(i);
  return b;
}

void Bits::trim() {
  if (n_ % 64 != 0 && !words_.empty()) {
    words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
  }
}

std::size_t Bits::count() const {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
  return c;
}

bool Bits::none() const {
  for (auto w : words_)
    if (w != 0) return false;
  return true;
}

bool Bits::all() const { return count() == n_; }

Bits& Bits::operator&=(const Bits& o) {
  assert(n_ == o.n_);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
  return *this;
}

Bits& Bits::operator|=(const Bits& o) {
  assert(n_ == o.n_);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  return *this;
}

Bits& Bits::operator-=(const Bits& o) {
  assert(n_ == o.n_);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
  return *this;
}

Bits Bits::operator~() const {
  Bits r = *this;
  for (auto& w : r.words_) w = ~w;
  r.trim();
  return r;
}

bool Bits::is_subset_of(const Bits& o) const {
  assert(n_ == o.n_);
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~o.words_[i]) return false;
  return true;
}

bool Bits::intersects(const Bits& o) const {
  assert(n_ == o.n_);
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & o.words_[i]) return true;
  return false;
}

std::optional<StateIndex> Bits::first_not_in(const Bits& other) const {
  assert(n_ == other.n_);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    std::uint64_t w = words_[i] & ~other.words_[i];
    if (w != 0) return static_cast<StateIndex>(i * 64 + __builtin_ctzll(w));
  }
  return std::nullopt;
}

std::optional<StateIndex> Bits::first() const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] != 0)
      return static_cast<StateIndex>(i * 64 + __builtin_ctzll(words_[i]));
  return std::nullopt;
}

std::vector<StateIndex> Bits::to_vector() const {
  std::vector<StateIndex> out;
  out.reserve(count());
  for_each([&](StateIndex i) { out.push_back(i); });
  return out;
}

}  // namespace ebsched::kernel
