#include "ganenc/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <future>
#include <stdexcept>
#include <tuple>

#include "ganenc/cipher.hpp"

namespace ganenc {

namespace corpus {
extern const std::string_view kPassword25;
extern const std::string_view kEmail500;
extern const std::string_view kPage3000;
}  // namespace corpus

namespace {

constexpr std::string_view kCsvHeader =
    "text_label,text_length,gate,strategy,n_bits,trials,mean_iter,wall_s,converged";

// AND rows run shred, which performs no key search.
constexpr std::string_view kNoSearch = "none";

void validate(const BenchCase& bc, const BenchOptions& options) {
  if (bc.trials < 3) throw std::invalid_argument("bench cases need at least 3 trials");
  if (bc.gate != GateKind::kNot && bc.gate != GateKind::kAnd) {
    throw std::invalid_argument("bench gates are NOT (round trip) or AND (shred)");
  }
  const int min_bits = bc.gate == GateKind::kAnd ? 2 : 1;
  if (bc.n_bits < min_bits || bc.n_bits > kMaxWidth) {
    throw std::invalid_argument("bench n_bits out of range: " + std::to_string(bc.n_bits));
  }
  if (bc.gate == GateKind::kNot && bc.strategy.kind == StrategyKind::kUniformRandom &&
      bc.n_bits > kUniformBitGuard && !options.allow_large_uniform) {
    throw std::invalid_argument("uniform search above " + std::to_string(kUniformBitGuard) +
                                " bits needs the explicit override");
  }
}

BenchRow run_case(const BenchCase& bc, std::uint64_t case_seed) {
  const Alphabet alphabet = Alphabet::printable95();
  std::u32string text;
  for (char ch : corpus_text(bc.text_label)) text.push_back(static_cast<unsigned char>(ch));

  std::uint64_t iterations = 0;
  std::uint64_t keys = 0;
  int ok_trials = 0;
  std::chrono::steady_clock::duration elapsed{};
  for (int t = 0; t < bc.trials; ++t) {
    Rng rng(substream_seed(case_seed, static_cast<std::uint64_t>(t)));
    const CircuitConfig circuit = random_circuit(bc.n_bits, bc.n_bits, {bc.gate}, rng);
    const auto start = std::chrono::steady_clock::now();
    try {
      if (bc.gate == GateKind::kAnd) {
        const Encryption enc = shred_text(text, circuit, alphabet, rng);
        iterations += enc.stats.iterations;
        keys += enc.stats.derivations;
        ++ok_trials;
      } else {
        const Encryption enc = encrypt_text(text, circuit, alphabet, bc.strategy, rng);
        KeyStats dec_stats;
        const std::u32string back = decrypt_text(enc.message, enc.reference_keys, circuit,
                                                 alphabet, bc.strategy, rng(), &dec_stats);
        iterations += enc.stats.iterations + dec_stats.iterations;
        keys += enc.stats.derivations + dec_stats.derivations;
        ok_trials += back == text;
      }
    } catch (const ConvergenceError&) {
      // counted as a non-converged trial
    }
    elapsed += std::chrono::steady_clock::now() - start;
  }

  BenchRow row;
  row.bench_case = bc;
  row.mean_iterations_per_key = keys == 0 ? 0.0 : static_cast<double>(iterations) / keys;
  row.total_wall_time = std::chrono::duration<double>(elapsed).count();
  row.converged_fraction = static_cast<double>(ok_trials) / bc.trials;
  return row;
}

auto sort_key(const BenchRow& r) {
  return std::make_tuple(gate_name(r.bench_case.gate), text_label_name(r.bench_case.text_label),
                         r.bench_case.n_bits, strategy_name(r.bench_case.strategy.kind));
}

void append_number(std::string& out, double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, p);
}

template <typename T>
T parse_number(std::string_view s, std::string_view field) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw FormatError("bench csv: bad " + std::string(field) + " '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

std::string_view text_label_name(TextLabel label) {
  switch (label) {
    case TextLabel::kPassword25: return "password25";
    case TextLabel::kEmail500: return "email500";
    case TextLabel::kPage3000: return "page3000";
  }
  return "?";
}

TextLabel parse_text_label(std::string_view name) {
  for (auto l : {TextLabel::kPassword25, TextLabel::kEmail500, TextLabel::kPage3000}) {
    if (text_label_name(l) == name) return l;
  }
  throw std::invalid_argument("unknown text label '" + std::string(name) + "'");
}

std::string_view corpus_text(TextLabel label) {
  switch (label) {
    case TextLabel::kPassword25: return corpus::kPassword25;
    case TextLabel::kEmail500: return corpus::kEmail500;
    case TextLabel::kPage3000: return corpus::kPage3000;
  }
  return {};
}

std::vector<BenchRow> run_bench(const std::vector<BenchCase>& cases, Rng& rng,
                                BenchOptions options) {
  for (const BenchCase& bc : cases) validate(bc, options);
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < cases.size(); ++i) seeds.push_back(rng());

  std::vector<BenchRow> rows;
  if (options.parallel) {
    std::vector<std::future<BenchRow>> pending;
    for (std::size_t i = 0; i < cases.size(); ++i) {
      pending.push_back(std::async(std::launch::async, run_case, cases[i], seeds[i]));
    }
    for (auto& f : pending) rows.push_back(f.get());
  } else {
    for (std::size_t i = 0; i < cases.size(); ++i) rows.push_back(run_case(cases[i], seeds[i]));
  }
  for (BenchRow& row : rows) {
    if (row.bench_case.gate == GateKind::kAnd) row.bench_case.strategy = SearchStrategy::direct();
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const BenchRow& x, const BenchRow& y) { return sort_key(x) < sort_key(y); });
  return rows;
}

std::string write_csv(const std::vector<BenchRow>& rows) {
  std::string out(kCsvHeader);
  out.push_back('\n');
  for (const BenchRow& r : rows) {
    const BenchCase& bc = r.bench_case;
    out.append(text_label_name(bc.text_label)).push_back(',');
    out.append(std::to_string(bc.text_length())).push_back(',');
    out.append(gate_name(bc.gate)).push_back(',');
    out.append(bc.gate == GateKind::kAnd ? kNoSearch : strategy_name(bc.strategy.kind));
    out.push_back(',');
    out.append(std::to_string(bc.n_bits)).push_back(',');
    out.append(std::to_string(bc.trials)).push_back(',');
    append_number(out, r.mean_iterations_per_key);
    out.push_back(',');
    append_number(out, r.total_wall_time);
    out.push_back(',');
    append_number(out, r.converged_fraction);
    out.push_back('\n');
  }
  return out;
}

std::vector<BenchRow> parse_csv(std::string_view csv) {
  std::vector<BenchRow> rows;
  bool header = true;
  while (!csv.empty()) {
    const std::size_t nl = csv.find('\n');
    const std::string_view line = csv.substr(0, nl);
    csv = nl == std::string_view::npos ? std::string_view{} : csv.substr(nl + 1);
    if (header) {
      if (line != kCsvHeader) throw FormatError("bench csv: unexpected header");
      header = false;
      continue;
    }
    std::vector<std::string_view> f;
    for (std::size_t start = 0;;) {
      const std::size_t comma = line.find(',', start);
      f.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (f.size() != 9) throw FormatError("bench csv: expected 9 fields");
    BenchRow r;
    try {
      r.bench_case.text_label = parse_text_label(f[0]);
      r.bench_case.gate = parse_gate_kind(f[2]);
      r.bench_case.strategy = f[3] == kNoSearch ? SearchStrategy::direct()
                                                : SearchStrategy{parse_strategy(f[3]), 0};
    } catch (const std::invalid_argument& e) {
      throw FormatError(std::string("bench csv: ") + e.what());
    }
    if (parse_number<std::size_t>(f[1], "text_length") != r.bench_case.text_length()) {
      throw FormatError("bench csv: text_length does not match label");
    }
    r.bench_case.n_bits = parse_number<int>(f[4], "n_bits");
    r.bench_case.trials = parse_number<int>(f[5], "trials");
    r.mean_iterations_per_key = parse_number<double>(f[6], "mean_iter");
    r.total_wall_time = parse_number<double>(f[7], "wall_s");
    r.converged_fraction = parse_number<double>(f[8], "converged");
    rows.push_back(r);
  }
  if (header) throw FormatError("bench csv: missing header");
  return rows;
}

}  // namespace ganenc
