#include "ganenc/password.hpp"

#include <stdexcept>

namespace ganenc {

namespace {

bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_special(char c) {
  return c > ' ' && c <= '~' && !is_lower(c) && !is_upper(c) && !is_digit(c);
}

}  // namespace

ComplexityProfile ComplexityProfile::parse_classes(std::string_view list) {
  ComplexityProfile p;
  std::size_t i = 0;
  while (i < list.size()) {
    const std::size_t comma = list.find(',', i);
    const std::string_view item = list.substr(i, comma == std::string_view::npos ? comma : comma - i);
    if (item == "1") {
      p.class1 = true;
    } else if (item == "2") {
      p.class2 = true;
    } else if (item == "3") {
      p.class3 = true;
    } else {
      throw std::invalid_argument("password classes are 1, 2 and 3; got '" + std::string(item) + "'");
    }
    if (comma == std::string_view::npos) break;
    i = comma + 1;
  }
  return p;
}

bool ComplexityProfile::satisfies(const ComplexityProfile& required) const {
  return (class1 || !required.class1) && (class2 || !required.class2) &&
         (class3 || !required.class3);
}

ComplexityProfile classify_password(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("cannot classify an empty password");
  bool special = false, digit = false, lower = false, upper = false;
  for (char c : s) {
    special |= is_special(c);
    digit |= is_digit(c);
    lower |= is_lower(c);
    upper |= is_upper(c);
  }
  return {special, digit, lower && upper};
}

std::string generate_password(int length, const ComplexityProfile& required, Rng& rng) {
  if (length < 1 || length > kMaxPasswordLength) {
    throw std::invalid_argument("password length must be in 1..256");
  }
  if (length < required.min_length()) {
    throw std::invalid_argument("length " + std::to_string(length) +
                                " cannot satisfy the requested classes (need at least " +
                                std::to_string(required.min_length()) + ")");
  }
  // printable ASCII without space: '!' .. '~'
  constexpr int kFirst = '!';
  constexpr int kCount = '~' - '!' + 1;
  std::string out(static_cast<std::size_t>(length), ' ');
  do {
    for (char& c : out) c = static_cast<char>(kFirst + uniform_below(rng, kCount));
  } while (!classify_password(out).satisfies(required));
  return out;
}

bool validate_password(std::string_view s, const ComplexityProfile& required) {
  if (s.empty()) return required == ComplexityProfile{};
  return classify_password(s).satisfies(required);
}

}  // namespace ganenc
