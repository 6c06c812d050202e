// Python bindings: thin wrappers over the C++ API, with bytes for envelopes
// and str for text.

#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "ganenc/bench.hpp"
#include "ganenc/cipher.hpp"
#include "ganenc/envelope.hpp"
#include "ganenc/password.hpp"
#include "ganenc/utf8.hpp"

namespace py = pybind11;
using namespace ganenc;

namespace {

Rng make_rng(std::optional<std::uint64_t> seed) { return seed ? Rng(*seed) : entropy_rng(); }

// Builtin name, or else the literal symbols of the alphabet in order.
Alphabet resolve_alphabet(const std::string& spec) {
  if (auto a = Alphabet::builtin(spec)) return *a;
  return Alphabet(utf8::decode(spec));
}

py::bytes to_bytes(const std::vector<std::uint8_t>& v) {
  return {reinterpret_cast<const char*>(v.data()), v.size()};
}

std::vector<std::uint8_t> from_bytes(const py::bytes& b) {
  const std::string s = b;
  return {s.begin(), s.end()};
}

SearchStrategy strategy(const std::string& name) { return SearchStrategy{parse_strategy(name), 0}; }

py::tuple profile_tuple(const ComplexityProfile& p) { return py::make_tuple(p.class1, p.class2, p.class3); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Keystream cipher keyed through a hidden logic-gate circuit";

  auto error = py::register_exception<Error>(m, "GanencError", PyExc_RuntimeError);
  py::register_exception<TagMismatchError>(m, "TagMismatchError", error.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", error.ptr());

  py::class_<BitVector>(m, "BitVector")
      .def(py::init<int, std::uint64_t>(), py::arg("width"), py::arg("value"))
      .def_static("parse", &BitVector::parse)
      .def_property_readonly("width", &BitVector::width)
      .def_property_readonly("value", &BitVector::word)
      .def("bit", &BitVector::bit)
      .def("__int__", &BitVector::word)
      .def("__str__", &BitVector::to_string)
      .def("__repr__", [](const BitVector& v) { return "BitVector('" + v.to_string() + "')"; })
      .def(py::self == py::self)
      .def("__hash__", [](const BitVector& v) { return std::hash<std::uint64_t>{}(v.word() ^ mix64(v.width())); });

  py::class_<CircuitConfig>(m, "Circuit")
      .def_static("parse", &CircuitConfig::parse, py::arg("text"))
      .def("serialize", &CircuitConfig::serialize)
      .def_property_readonly("width", &CircuitConfig::width)
      .def_property_readonly("gate_count", [](const CircuitConfig& c) { return c.gates().size(); })
      .def_property_readonly("gates", [](const CircuitConfig& c) {
        py::list out;
        for (const Gate& g : c.gates()) {
          if (g.kind == GateKind::kNot) {
            out.append(py::make_tuple(std::string(gate_name(g.kind)), g.a));
          } else {
            out.append(py::make_tuple(std::string(gate_name(g.kind)), g.a, g.b, g.target));
          }
        }
        return out;
      })
      .def_property_readonly("config_id", &CircuitConfig::config_id)
      .def_property_readonly("is_reversible", [](const CircuitConfig& c) { return is_reversible(c); })
      .def("apply", [](const CircuitConfig& c, const BitVector& g) { return apply_circuit(c, g); })
      .def("apply", [](const CircuitConfig& c, std::uint64_t g) { return apply_circuit(c, BitVector(c.width(), g)).word(); })
      .def(py::self == py::self)
      .def("__repr__", [](const CircuitConfig& c) {
        return "<Circuit bits=" + std::to_string(c.width()) + " gates=" + std::to_string(c.gates().size()) + ">";
      });

  m.def(
      "random_circuit",
      [](int bits, int gates, const std::vector<std::string>& kinds, std::optional<std::uint64_t> seed) {
        std::vector<GateKind> ks;
        for (const auto& k : kinds) ks.push_back(parse_gate_kind(k));
        Rng rng = make_rng(seed);
        return random_circuit(bits, gates, ks, rng);
      },
      py::arg("bits"), py::arg("gates"), py::arg("kinds") = std::vector<std::string>{"NOT"},
      py::arg("seed") = py::none());

  m.def(
      "lock_circuit",
      [](const CircuitConfig& c, const std::string& passphrase, std::optional<std::uint64_t> seed) {
        Rng rng = make_rng(seed);
        return lock_circuit(c, passphrase, rng).serialize();
      },
      py::arg("circuit"), py::arg("passphrase"), py::arg("seed") = py::none());
  m.def(
      "unlock_circuit",
      [](const std::string& text, const std::string& passphrase) {
        return unlock_circuit(LockedCircuit::parse(text), passphrase);
      },
      py::arg("locked_text"), py::arg("passphrase"));

  m.def(
      "encrypt",
      [](const std::string& text, const CircuitConfig& c, const std::string& alphabet,
         const std::string& strategy_name, std::optional<std::uint64_t> seed, bool passthrough) {
        const Alphabet a = resolve_alphabet(alphabet);
        const std::u32string t = utf8::decode(text);
        const SearchStrategy s = strategy(strategy_name);
        Rng rng = make_rng(seed);
        std::vector<std::uint8_t> bytes;
        {
          py::gil_scoped_release release;
          bytes = write_envelope(MessageEnvelope::from(encrypt_text(t, c, a, s, rng, {passthrough})));
        }
        return to_bytes(bytes);
      },
      py::arg("text"), py::arg("circuit"), py::arg("alphabet") = "printable95",
      py::arg("strategy") = "memory", py::arg("seed") = py::none(), py::arg("passthrough") = false,
      "Encrypts text; returns the binary message envelope.");

  m.def(
      "decrypt",
      [](const py::bytes& envelope, const CircuitConfig& c, const std::string& alphabet,
         const std::string& strategy_name, std::uint64_t seed) {
        const Alphabet a = resolve_alphabet(alphabet);
        const MessageEnvelope e = read_envelope(from_bytes(envelope));
        const SearchStrategy s = strategy(strategy_name);
        std::u32string text;
        {
          py::gil_scoped_release release;
          text = decrypt_text(e.message(), e.reference_keys, c, a, s, seed);
        }
        return utf8::encode(text);
      },
      py::arg("envelope"), py::arg("circuit"), py::arg("alphabet") = "printable95",
      py::arg("strategy") = "direct", py::arg("seed") = 0);

  m.def(
      "shred",
      [](const std::string& text, const CircuitConfig& c, const std::string& alphabet,
         std::optional<std::uint64_t> seed, bool passthrough) {
        const Alphabet a = resolve_alphabet(alphabet);
        Rng rng = make_rng(seed);
        return to_bytes(write_envelope(MessageEnvelope::from(shred_text(utf8::decode(text), c, a, rng, {passthrough}))));
      },
      py::arg("text"), py::arg("circuit"), py::arg("alphabet") = "printable95", py::arg("seed") = py::none(),
      py::arg("passthrough") = false);

  m.def(
      "envelope_info",
      [](const py::bytes& envelope) {
        const MessageEnvelope e = read_envelope(from_bytes(envelope));
        py::dict d;
        d["width"] = e.width;
        d["length"] = e.length();
        d["reference_keys"] = e.reference_keys;
        d["cipher_indices"] = e.cipher_indices;
        d["passthrough"] = e.passthrough.size();
        return d;
      },
      py::arg("envelope"));

  m.def("classify_password", [](const std::string& s) { return profile_tuple(classify_password(s)); });
  m.def(
      "generate_password",
      [](int length, const std::string& classes, std::optional<std::uint64_t> seed) {
        Rng rng = make_rng(seed);
        return generate_password(length, ComplexityProfile::parse_classes(classes), rng);
      },
      py::arg("length"), py::arg("classes") = "1,2,3", py::arg("seed") = py::none());
  m.def(
      "validate_password",
      [](const std::string& s, const std::string& classes) {
        return validate_password(s, ComplexityProfile::parse_classes(classes));
      },
      py::arg("password"), py::arg("classes") = "1,2,3");

  m.def(
      "bench",
      [](const std::string& text, const std::string& gate, const std::vector<int>& bits,
         const std::string& strategy_name, int trials, std::optional<std::uint64_t> seed) {
        std::vector<BenchCase> cases;
        for (int n : bits) {
          cases.push_back({parse_text_label(text), parse_gate_kind(gate), n, strategy(strategy_name), trials});
        }
        Rng rng = make_rng(seed);
        std::string csv;
        {
          py::gil_scoped_release release;
          csv = write_csv(run_bench(cases, rng));
        }
        return csv;
      },
      py::arg("text") = "password25", py::arg("gate") = "NOT", py::arg("bits") = std::vector<int>{8},
      py::arg("strategy") = "memory", py::arg("trials") = 3, py::arg("seed") = py::none(),
      "Runs benchmark cases and returns the CSV text.");
}
