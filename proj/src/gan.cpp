#include "ganenc/gan.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace ganenc {

namespace {

// The discriminator: circuit image of a candidate versus the target, reduced
// to a single deviation count.
class Discriminator {
 public:
  Discriminator(const CircuitConfig& c, std::uint64_t target) : circuit_(c), target_(target) {}

  int deviation(std::uint64_t candidate) {
    ++evaluations_;
    return std::popcount(apply_circuit_word(circuit_, candidate) ^ target_);
  }

  std::uint64_t evaluations() const { return evaluations_; }

 private:
  const CircuitConfig& circuit_;
  std::uint64_t target_;
  std::uint64_t evaluations_ = 0;
};

std::uint64_t search_uniform(Discriminator& disc, int width, std::uint64_t budget, Rng& rng,
                             ConvergenceReport& report) {
  const std::uint64_t mask = width_mask(width);
  while (disc.evaluations() < budget) {
    const std::uint64_t g = rng() & mask;
    report.final_deviation = disc.deviation(g);
    if (report.final_deviation == 0) {
      report.converged = true;
      return g;
    }
  }
  return 0;
}

// Sweeps the wires in order, keeping a single-bit flip only when it strictly
// lowers the deviation. Stops when a full sweep brings no improvement.
std::uint64_t search_memory(Discriminator& disc, int width, std::uint64_t budget, Rng& rng,
                            ConvergenceReport& report) {
  std::uint64_t g = rng() & width_mask(width);
  int best = disc.deviation(g);
  report.final_deviation = best;
  bool improved = true;
  while (best != 0 && improved) {
    improved = false;
    for (int w = 0; w < width && best != 0; ++w) {
      if (disc.evaluations() >= budget) return 0;
      const std::uint64_t candidate = g ^ (std::uint64_t{1} << w);
      const int d = disc.deviation(candidate);
      if (d < best) {
        g = candidate;
        best = d;
        improved = true;
        report.final_deviation = best;
      }
    }
  }
  report.converged = best == 0;
  return g;
}

}  // namespace

std::string_view strategy_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kUniformRandom: return "uniform";
    case StrategyKind::kMemoryGuided: return "memory";
    case StrategyKind::kDirectInversion: return "direct";
  }
  return "?";
}

StrategyKind parse_strategy(std::string_view name) {
  for (auto k : {StrategyKind::kUniformRandom, StrategyKind::kMemoryGuided,
                 StrategyKind::kDirectInversion}) {
    if (strategy_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown strategy '" + std::string(name) +
                              "' (expected uniform, memory or direct)");
}

std::uint64_t default_budget(int width) {
  return width + 4 >= 32 ? std::uint64_t{1} << 32 : std::uint64_t{1} << (width + 4);
}

ConvergenceError::ConvergenceError(const ConvergenceReport& report)
    : Error("key search did not converge after " + std::to_string(report.iterations) +
            " evaluations (deviation " + std::to_string(report.final_deviation) + ")"),
      report_(report) {}

std::pair<BitVector, ConvergenceReport> derive_dynamic_key(const CircuitConfig& c,
                                                           const BitVector& r,
                                                           const SearchStrategy& s, Rng& rng) {
  if (r.width() != c.width()) {
    throw std::invalid_argument("reference key width " + std::to_string(r.width()) +
                                " does not match circuit width " + std::to_string(c.width()));
  }
  if (s.kind == StrategyKind::kDirectInversion) {
    // invert_image refuses irreversible circuits.
    BitVector g = invert_image(c, r);
    return {g, ConvergenceReport{1, true, 0}};
  }

  const std::uint64_t budget = s.budget != 0 ? s.budget : default_budget(c.width());
  Discriminator disc(c, r.word());
  ConvergenceReport report;
  const std::uint64_t g = s.kind == StrategyKind::kUniformRandom
                              ? search_uniform(disc, c.width(), budget, rng, report)
                              : search_memory(disc, c.width(), budget, rng, report);
  report.iterations = disc.evaluations();
  if (!report.converged) throw ConvergenceError(report);
  return {BitVector(c.width(), g), report};
}

std::pair<KeyPair, ConvergenceReport> generate_key_pair(const CircuitConfig& c,
                                                        const SearchStrategy& s, Rng& rng) {
  const BitVector r = random_bitvector(c.width(), rng);
  auto [g, report] = derive_dynamic_key(c, r, s, rng);
  return {KeyPair{g, r}, report};
}

}  // namespace ganenc
