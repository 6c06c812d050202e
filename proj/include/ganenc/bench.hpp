#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ganenc/circuit.hpp"
#include "ganenc/gan.hpp"
#include "ganenc/random.hpp"

namespace ganenc {

enum class TextLabel : std::uint8_t { kPassword25, kEmail500, kPage3000 };

std::string_view text_label_name(TextLabel label);
TextLabel parse_text_label(std::string_view name);
// Built-in corpus text for a label (printable ASCII only).
std::string_view corpus_text(TextLabel label);

struct BenchCase {
  TextLabel text_label = TextLabel::kPassword25;
  GateKind gate = GateKind::kNot;  // kNot: encrypt/decrypt round trip; kAnd: shred
  int n_bits = 8;
  SearchStrategy strategy = SearchStrategy::memory();
  int trials = 3;

  std::size_t text_length() const { return corpus_text(text_label).size(); }
};

struct BenchRow {
  BenchCase bench_case;
  double mean_iterations_per_key = 0;
  double total_wall_time = 0;  // seconds
  double converged_fraction = 0;

  // M * N bits of reference keys per trial.
  std::uint64_t key_bits() const {
    return bench_case.text_length() * static_cast<std::uint64_t>(bench_case.n_bits);
  }
};

struct BenchOptions {
  // UniformRandom above 24 bits is refused unless set.
  bool allow_large_uniform = false;
  // Runs cases on separate threads; each case stays single-threaded.
  bool parallel = false;
};

inline constexpr int kUniformBitGuard = 24;

// One row per case, sorted by (gate, text label, n_bits). Iteration counts and
// convergence are deterministic for a given rng state; wall times are not.
std::vector<BenchRow> run_bench(const std::vector<BenchCase>& cases, Rng& rng,
                                BenchOptions options = {});

std::string write_csv(const std::vector<BenchRow>& rows);
// Inverse of write_csv for the numeric and label fields (wall time is parsed
// as written).
std::vector<BenchRow> parse_csv(std::string_view csv);

}  // namespace ganenc
