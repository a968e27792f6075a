#ifndef AMBISPOT_UTF8_HPP
#define AMBISPOT_UTF8_HPP

#include <string>
#include <string_view>

namespace ambispot::utf8 {

// Strict UTF-8 <-> scalar-value conversion. Transcripts and labels are
// sequences of Unicode scalar values; all text processing happens on the
// decoded form. Invalid input (overlong forms, surrogates, truncation,
// out-of-range code points) throws Error(parse_error).
std::u32string decode(std::string_view text);
std::string encode(std::u32string_view scalars);
std::string encode(char32_t scalar);

}  // namespace ambispot::utf8

#endif
