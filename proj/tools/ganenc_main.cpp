// ganenc command-line entry point.
//
// Exit codes: 0 success, 1 usage error, 2 crypto/format/protocol error,
// 3 password check failed.

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ganenc/bench.hpp"
#include "ganenc/cipher.hpp"
#include "ganenc/envelope.hpp"
#include "ganenc/password.hpp"
#include "ganenc/transport.hpp"
#include "ganenc/utf8.hpp"

namespace fs = std::filesystem;
using namespace ganenc;

namespace {

constexpr int kDefaultBits = 18;

struct Global {
  std::optional<std::uint64_t> seed;
  std::string passphrase;
  bool verbose = false;

  Rng rng() const { return seed ? Rng(*seed) : entropy_rng(); }

  std::string resolved_passphrase() const {
    if (!passphrase.empty()) return passphrase;
    if (const char* env = std::getenv("GANENC_PASSPHRASE")) return env;
    return {};
  }
};

// Reads a whole file, or standard input for "" or "-".
std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Writes to a sibling temp file and renames it into place, so a failure
// never leaves a partial output. "" or "-" writes to standard output.
void write_output(const std::string& path, std::string_view data) {
  if (path.empty() || path == "-") {
    std::cout.write(data.data(), static_cast<std::streamsize>(data.size()));
    std::cout.flush();
    return;
  }
  const fs::path target(path);
  const fs::path temp = target.string() + ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::invalid_argument("cannot write '" + path + "'");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.close();
    if (!out) {
      fs::remove(temp);
      throw Error("write failed for '" + path + "'");
    }
  }
  fs::rename(temp, target);
}

std::vector<std::uint8_t> as_bytes(const std::string& s) { return {s.begin(), s.end()}; }

std::string as_string(const std::vector<std::uint8_t>& b) { return {b.begin(), b.end()}; }

CircuitConfig load_circuit(const std::string& path, const Global& g) {
  const std::string text = read_input(path);
  if (!is_locked_circuit_text(text)) return CircuitConfig::parse(text);
  const std::string pass = g.resolved_passphrase();
  if (pass.empty()) {
    throw std::invalid_argument("circuit '" + path + "' is locked; pass --passphrase or set GANENC_PASSPHRASE");
  }
  return unlock_circuit(LockedCircuit::parse(text), pass);
}

Alphabet load_alphabet(const std::string& spec) {
  if (auto a = Alphabet::builtin(spec)) return *a;
  if (!fs::exists(spec)) throw std::invalid_argument("unknown alphabet '" + spec + "'");
  return Alphabet::parse(read_input(spec));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (true) {
    const std::size_t j = s.find(sep, i);
    out.emplace_back(s.substr(i, j == std::string_view::npos ? j : j - i));
    if (j == std::string_view::npos) break;
    i = j + 1;
  }
  return out;
}

int parse_int(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

// "6..24", "8,16,24" or "12".
std::vector<int> parse_bit_list(const std::string& s) {
  std::vector<int> out;
  for (const std::string& item : split(s, ',')) {
    const std::size_t dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_int(item));
      continue;
    }
    const int lo = parse_int(item.substr(0, dots));
    const int hi = parse_int(item.substr(dots + 2));
    if (lo > hi) throw std::invalid_argument("empty bit range '" + item + "'");
    for (int n = lo; n <= hi; ++n) out.push_back(n);
  }
  return out;
}

std::vector<GateKind> parse_kinds(const std::string& s) {
  std::vector<GateKind> out;
  for (const std::string& item : split(s, ',')) out.push_back(parse_gate_kind(item));
  return out;
}

void report(const Global& g, const std::string& what, const KeyStats& stats) {
  if (!g.verbose) return;
  std::cerr << what << ": " << stats.derivations << " keys, " << stats.iterations
            << " circuit evaluations, " << stats.converged << " converged\n";
}

struct IoArgs {
  std::string in, out;
};

void add_io(CLI::App* cmd, IoArgs& io) {
  cmd->add_option("--in", io.in, "input file (default: stdin)");
  cmd->add_option("--out", io.out, "output file (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ganenc: keystream cipher keyed through a hidden logic-gate circuit"};
  app.require_subcommand(1);

  Global g;
  app.add_option("--seed", g.seed, "seed for every random draw (reproducible output)");
  app.add_option("--passphrase", g.passphrase, "passphrase for locked circuits (or GANENC_PASSPHRASE)");
  app.add_flag("-v,--verbose", g.verbose, "print search statistics to stderr");

  std::vector<std::function<int()>> actions;
  auto on = [&](CLI::App* cmd, std::function<int()> fn) {
    cmd->fallthrough();
    cmd->callback([&actions, fn] { actions.push_back(fn); });
  };

  // circuit new|inspect|lock|unlock
  auto* circuit = app.add_subcommand("circuit", "create and manage circuit files");
  circuit->require_subcommand(1);
  circuit->fallthrough();

  int new_bits = kDefaultBits, new_gates = -1;
  std::string new_kinds = "NOT", new_out;
  auto* cnew = circuit->add_subcommand("new", "generate a random circuit");
  cnew->add_option("--bits", new_bits, "key width N")->capture_default_str();
  cnew->add_option("--gates", new_gates, "gate count L (default: N)");
  cnew->add_option("--kinds", new_kinds, "gate kinds, e.g. NOT or NOT,AND,XOR")->capture_default_str();
  cnew->add_option("--out", new_out, "output file (default: stdout)");
  on(cnew, [&] {
    Rng rng = g.rng();
    const auto c = random_circuit(new_bits, new_gates < 0 ? new_bits : new_gates, parse_kinds(new_kinds), rng);
    write_output(new_out, c.serialize());
    return 0;
  });

  std::string inspect_in;
  auto* cinspect = circuit->add_subcommand("inspect", "summarize a circuit file");
  cinspect->add_option("circuit", inspect_in, "circuit file")->required();
  on(cinspect, [&] {
    const auto c = load_circuit(inspect_in, g);
    std::map<std::string, int> counts;
    for (const Gate& gate : c.gates()) ++counts[std::string(gate_name(gate.kind))];
    std::cout << "bits        " << c.width() << "\n"
              << "gates       " << c.gates().size() << "\n";
    for (const auto& [name, n] : counts) std::cout << "  " << name << std::string(10 - name.size(), ' ') << n << "\n";
    std::cout << "reversible  " << (is_reversible(c) ? "yes" : "no") << "\n"
              << "config_id   " << c.config_id() << "\n";
    return 0;
  });

  IoArgs lock_io, unlock_io;
  auto* clock = circuit->add_subcommand("lock", "scramble a circuit file under a passphrase");
  add_io(clock, lock_io);
  on(clock, [&] {
    const std::string pass = g.resolved_passphrase();
    if (pass.empty()) throw std::invalid_argument("lock needs --passphrase or GANENC_PASSPHRASE");
    const auto c = CircuitConfig::parse(read_input(lock_io.in));
    Rng rng = g.rng();
    write_output(lock_io.out, lock_circuit(c, pass, rng).serialize());
    return 0;
  });
  auto* cunlock = circuit->add_subcommand("unlock", "restore a locked circuit file");
  add_io(cunlock, unlock_io);
  on(cunlock, [&] {
    write_output(unlock_io.out, load_circuit(unlock_io.in, g).serialize());
    return 0;
  });

  // encrypt / decrypt / shred
  std::string circuit_path, alphabet_spec = "printable95";
  std::string strategy_name_arg;
  bool passthrough = false;
  IoArgs cipher_io;
  auto add_cipher_opts = [&](CLI::App* cmd, const char* default_strategy) {
    cmd->add_option("--circuit", circuit_path, "circuit file (plain or locked)")->required();
    cmd->add_option("--alphabet", alphabet_spec, "builtin alphabet (lower26, printable95) or alphabet file")
        ->capture_default_str();
    cmd->add_option("--strategy", strategy_name_arg,
                    std::string("key search: uniform, memory or direct (default ") + default_strategy + ")");
    add_io(cmd, cipher_io);
  };
  auto strategy_or = [&](StrategyKind fallback) {
    const StrategyKind k = strategy_name_arg.empty() ? fallback : parse_strategy(strategy_name_arg);
    return SearchStrategy{k, 0};
  };

  auto* encrypt = app.add_subcommand("encrypt", "encrypt UTF-8 text into a message envelope");
  add_cipher_opts(encrypt, "memory");
  encrypt->add_flag("--passthrough", passthrough, "copy characters outside the alphabet unencrypted");
  on(encrypt, [&] {
    const auto c = load_circuit(circuit_path, g);
    const Alphabet a = load_alphabet(alphabet_spec);
    const std::u32string text = utf8::decode(read_input(cipher_io.in));
    Rng rng = g.rng();
    const Encryption enc = encrypt_text(text, c, a, strategy_or(StrategyKind::kMemoryGuided), rng, {passthrough});
    write_output(cipher_io.out, as_string(write_envelope(MessageEnvelope::from(enc))));
    report(g, "encrypt", enc.stats);
    return 0;
  });

  auto* decrypt = app.add_subcommand("decrypt", "decrypt a message envelope back to UTF-8 text");
  add_cipher_opts(decrypt, "direct");
  on(decrypt, [&] {
    const auto c = load_circuit(circuit_path, g);
    const Alphabet a = load_alphabet(alphabet_spec);
    const MessageEnvelope e = read_envelope(as_bytes(read_input(cipher_io.in)));
    KeyStats stats;
    const std::u32string text = decrypt_text(e.message(), e.reference_keys, c, a,
                                             strategy_or(StrategyKind::kDirectInversion), g.rng()(), &stats);
    write_output(cipher_io.out, utf8::encode(text));
    report(g, "decrypt", stats);
    return 0;
  });

  auto* shred = app.add_subcommand("shred", "irreversibly encrypt through a non-reversible circuit");
  add_cipher_opts(shred, "none");
  shred->add_flag("--passthrough", passthrough, "copy characters outside the alphabet unencrypted");
  on(shred, [&] {
    const auto c = load_circuit(circuit_path, g);
    const Alphabet a = load_alphabet(alphabet_spec);
    const std::u32string text = utf8::decode(read_input(cipher_io.in));
    Rng rng = g.rng();
    const Encryption enc = shred_text(text, c, a, rng, {passthrough});
    write_output(cipher_io.out, as_string(write_envelope(MessageEnvelope::from(enc))));
    return 0;
  });

  // send / recv
  std::string send_to, send_in;
  auto* send = app.add_subcommand("send", "send a message envelope over TCP");
  send->add_option("--to", send_to, "host:port")->required();
  send->add_option("--in", send_in, "envelope file (default: stdin)");
  on(send, [&] {
    const Endpoint to = Endpoint::parse(send_to);
    send_envelope(read_envelope(as_bytes(read_input(send_in))), to);
    return 0;
  });

  int listen_port = -1;
  std::string recv_out;
  auto* recv = app.add_subcommand("recv", "receive one message envelope over TCP");
  recv->add_option("--listen", listen_port, "port to listen on (0 = ephemeral)")->required()->check(CLI::Range(0, 65535));
  recv->add_option("--out", recv_out, "envelope file (default: stdout)");
  on(recv, [&] {
    Listener listener(static_cast<std::uint16_t>(listen_port));
    std::cerr << "listening on port " << listener.port() << std::endl;
    const MessageEnvelope e = receive_envelope(listener);
    write_output(recv_out, as_string(write_envelope(e)));
    return 0;
  });

  // password gen|check
  auto* password = app.add_subcommand("password", "password generation and validation");
  password->require_subcommand(1);
  password->fallthrough();
  int pw_length = 16;
  std::string pw_classes = "1,2,3", pw_value;
  auto* pgen = password->add_subcommand("gen", "generate a password");
  pgen->add_option("--length", pw_length, "length in characters")->capture_default_str();
  pgen->add_option("--classes", pw_classes, "required classes: 1 special, 2 digit, 3 mixed case")
      ->capture_default_str();
  on(pgen, [&] {
    Rng rng = g.rng();
    std::cout << generate_password(pw_length, ComplexityProfile::parse_classes(pw_classes), rng) << "\n";
    return 0;
  });
  auto* pcheck = password->add_subcommand("check", "classify a password against required classes");
  pcheck->add_option("password", pw_value, "password to check")->required();
  pcheck->add_option("--classes", pw_classes, "required classes")->capture_default_str();
  on(pcheck, [&] {
    const ComplexityProfile required = ComplexityProfile::parse_classes(pw_classes);
    const ComplexityProfile p = classify_password(pw_value);
    const bool ok = p.satisfies(required);
    std::cout << "class1 " << p.class1 << " class2 " << p.class2 << " class3 " << p.class3 << " -> "
              << (ok ? "valid" : "invalid") << "\n";
    return ok ? 0 : 3;
  });

  // bench
  std::string bench_gates = "NOT,AND", bench_bits = "6..12", bench_strategies = "uniform,memory",
              bench_texts = "password25", bench_csv;
  int bench_trials = 10;
  BenchOptions bench_options;
  auto* bench = app.add_subcommand("bench", "run the key-search scaling benchmark");
  bench->add_option("--gates", bench_gates, "NOT (round trip) and/or AND (shred)")->capture_default_str();
  bench->add_option("--bits", bench_bits, "key widths, e.g. 6..24 or 8,16")->capture_default_str();
  bench->add_option("--strategy", bench_strategies, "strategies for NOT cases")->capture_default_str();
  bench->add_option("--texts", bench_texts, "password25, email500, page3000")->capture_default_str();
  bench->add_option("--trials", bench_trials, "trials per case (>= 3)")->capture_default_str();
  bench->add_option("--csv", bench_csv, "CSV output file (default: stdout)");
  bench->add_flag("--allow-large-uniform", bench_options.allow_large_uniform,
                  "permit uniform search above 24 bits");
  bench->add_flag("--parallel", bench_options.parallel, "run cases concurrently");
  on(bench, [&] {
    std::vector<BenchCase> cases;
    const auto bits = parse_bit_list(bench_bits);
    for (const std::string& label : split(bench_texts, ',')) {
      const TextLabel t = parse_text_label(label);
      for (GateKind gate : parse_kinds(bench_gates)) {
        for (int n : bits) {
          if (gate != GateKind::kNot) {
            // shred cases sample keys directly; no search strategy applies
            cases.push_back({t, gate, n, SearchStrategy::direct(), bench_trials});
            continue;
          }
          for (const std::string& s : split(bench_strategies, ',')) {
            cases.push_back({t, gate, n, SearchStrategy{parse_strategy(s), 0}, bench_trials});
          }
        }
      }
    }
    Rng rng = g.rng();
    write_output(bench_csv, write_csv(run_bench(cases, rng, bench_options)));
    return 0;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    int code = 0;
    for (const auto& action : actions) code = action();
    return code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "ganenc: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "ganenc: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ganenc: " << e.what() << "\n";
    return 2;
  }
}
