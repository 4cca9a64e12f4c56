#pragma once

#include <cstdint>
#include <random>

#include "ebsched/kernel/transformer.hpp"

namespace ebsched::kernel {

/// Seeded generator with a portable bounded draw, so that sequences agree
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in 0..n-1; n must be positive.
  std::uint64_t below(std::uint64_t n);
  bool chance(unsigned percent) { return below(100) < percent; }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// One integer variable x : 0..n-1.
SpacePtr line_space(std::size_t n);
SpacePtr random_space(Rng& rng, std::size_t max_size);

Bits random_bits(Rng& rng, std::size_t n, unsigned percent = 50);
Rows random_rows(Rng& rng, std::size_t n, unsigned percent = 25);

/// Random expression tree of bounded depth over every constructor except
/// EventRef.
Transformer random_transformer(Rng& rng, const SpacePtr& space, int depth = 3);

}  // namespace ebsched::kernel
