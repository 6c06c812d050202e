#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "ganenc/random.hpp"

namespace ganenc {

// class1: a special character (printable ASCII, not alphanumeric, not space)
// class2: a decimal digit
// class3: at least one lowercase and one uppercase letter
struct ComplexityProfile {
  bool class1 = false;
  bool class2 = false;
  bool class3 = false;

  static ComplexityProfile all() { return {true, true, true}; }
  // "1,2,3", "2", "" ...; throws std::invalid_argument on anything else.
  static ComplexityProfile parse_classes(std::string_view list);
  // True iff every flag set in `required` is set here.
  bool satisfies(const ComplexityProfile& required) const;
  // Minimum number of characters able to satisfy these requirements.
  int min_length() const { return int{class1} + int{class2} + 2 * int{class3}; }

  friend bool operator==(const ComplexityProfile&, const ComplexityProfile&) = default;
};

inline constexpr int kMaxPasswordLength = 256;

// Throws std::invalid_argument for an empty string.
ComplexityProfile classify_password(std::string_view s);

// Uniform draws from printable ASCII without space, resampled until the
// requirements hold. Throws std::invalid_argument if length is outside
// [required.min_length(), 256] or zero.
std::string generate_password(int length, const ComplexityProfile& required, Rng& rng);

bool validate_password(std::string_view s, const ComplexityProfile& required);

}  // namespace ganenc
