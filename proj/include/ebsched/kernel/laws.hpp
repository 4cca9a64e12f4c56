#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ebsched/kernel/checks.hpp"
#include "ebsched/kernel/random.hpp"

namespace ebsched::kernel {

/// Operands of one randomized law instance.
struct LawCase {
  SpacePtr space;
  Transformer S;
  Transformer T;
  Bits g;
  Bits h;

  std::string to_string() const;
};

struct LawOutcome {
  bool vacuous = false;  // premise did not hold
  Verdict verdict;
};

struct Law {
  std::string id;
  std::function<LawOutcome(const NormalFormRules&, const LawCase&)> check;
};

const std::vector<Law>& algebraic_laws();

struct LawOptions {
  std::size_t max_size = 8;
  std::size_t cases = 200;
  std::uint64_t seed = 7;
  int depth = 3;
  const NormalFormRules* rules = nullptr;  // default rules when null
  bool shrink = true;
};

struct LawFailure {
  std::string law;
  std::size_t case_index = 0;
  LawCase counterexample;
  Verdict verdict;
};

struct LawReport {
  std::size_t cases = 0;
  std::size_t checks = 0;
  std::size_t vacuous = 0;
  std::vector<LawFailure> failures;

  bool pass() const { return failures.empty(); }
};

LawCase random_case(Rng& rng, std::size_t max_size, int depth);

/// Greedily simplifies a failing case while the law keeps failing.
LawCase shrink_case(const Law& law, const NormalFormRules& rules, LawCase c);

/// Runs every law on `cases` random instances. Stops collecting after the
/// first failure of each law.
LawReport run_laws(const LawOptions& options);

}  // namespace ebsched::kernel
