#pragma once

#include <cstdint>
#include <string_view>
#include <utility>

#include "ganenc/bitkey.hpp"
#include "ganenc/circuit.hpp"
#include "ganenc/error.hpp"
#include "ganenc/random.hpp"

namespace ganenc {

// Generator/discriminator search. The generator proposes dynamic keys, the
// circuit maps them to the discriminator, and the discriminator reports only
// the Hamming deviation from the target reference key. A proposal is
// accepted once that deviation is zero.

enum class StrategyKind : std::uint8_t {
  kUniformRandom,  // resample the whole key until it matches
  kMemoryGuided,   // single-bit flips kept only when the deviation drops
  kDirectInversion,
};

std::string_view strategy_name(StrategyKind kind);  // "uniform", "memory", "direct"
StrategyKind parse_strategy(std::string_view name);

// min(2^(N+4), 2^32) circuit evaluations.
std::uint64_t default_budget(int width);

struct SearchStrategy {
  StrategyKind kind = StrategyKind::kDirectInversion;
  std::uint64_t budget = 0;  // 0 selects default_budget(width) at call time

  static SearchStrategy uniform(std::uint64_t budget = 0) {
    return {StrategyKind::kUniformRandom, budget};
  }
  static SearchStrategy memory(std::uint64_t budget = 0) {
    return {StrategyKind::kMemoryGuided, budget};
  }
  static SearchStrategy direct() { return {StrategyKind::kDirectInversion, 0}; }
};

struct ConvergenceReport {
  std::uint64_t iterations = 0;  // circuit evaluations
  bool converged = false;
  int final_deviation = 0;
};

// The search ended without reaching deviation zero.
class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const ConvergenceReport& report);
  const ConvergenceReport& report() const { return report_; }

 private:
  ConvergenceReport report_;
};

// Finds g with apply_circuit(c, g) == r. Throws std::invalid_argument on width
// mismatch, std::logic_error for DirectInversion on an irreversible circuit,
// ConvergenceError when the search fails.
std::pair<BitVector, ConvergenceReport> derive_dynamic_key(const CircuitConfig& c,
                                                           const BitVector& r,
                                                           const SearchStrategy& s, Rng& rng);

// Samples a reference key uniformly, then derives its dynamic key.
std::pair<KeyPair, ConvergenceReport> generate_key_pair(const CircuitConfig& c,
                                                        const SearchStrategy& s, Rng& rng);

}  // namespace ganenc
