#pragma once

#include <string>
#include <string_view>

namespace ganenc::utf8 {

// Decodes UTF-8 into scalar values. Throws FormatError on malformed input
// (overlong forms, surrogates, truncated sequences).
std::u32string decode(std::string_view bytes);

void append(std::string& out, char32_t cp);
std::string encode(std::u32string_view text);

}  // namespace ganenc::utf8
