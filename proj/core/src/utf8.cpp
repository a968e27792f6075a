#include "ambispot/utf8.hpp"

#include "ambispot/error.hpp"

namespace ambispot::utf8 {

namespace {

[[noreturn]] void bad(const char* what, std::size_t pos) {
  throw Error(ErrorKind::parse_error,
              std::string("invalid UTF-8 (") + what + ") at byte " +
                  std::to_string(pos));
}

}  // namespace

std::u32string decode(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char b0 = static_cast<unsigned char>(text[i]);
    char32_t cp = 0;
    std::size_t len = 0;
    if (b0 < 0x80) {
      cp = b0;
      len = 1;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      len = 2;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      len = 3;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      len = 4;
    } else {
      bad("bad leading byte", i);
    }
    if (i + len > text.size()) bad("truncated sequence", i);
    for (std::size_t j = 1; j < len; ++j) {
      unsigned char bj = static_cast<unsigned char>(text[i + j]);
      if ((bj & 0xC0) != 0x80) bad("bad continuation byte", i + j);
      cp = (cp << 6) | (bj & 0x3F);
    }
    static constexpr char32_t kMinForLen[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (len > 1 && cp < kMinForLen[len]) bad("overlong encoding", i);
    if (cp >= 0xD800 && cp <= 0xDFFF) bad("surrogate code point", i);
    if (cp > 0x10FFFF) bad("code point out of range", i);
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string encode(char32_t scalar) {
  if ((scalar >= 0xD800 && scalar <= 0xDFFF) || scalar > 0x10FFFF) {
    throw Error(ErrorKind::internal, "cannot encode non-scalar value");
  }
  std::string out;
  if (scalar < 0x80) {
    out.push_back(static_cast<char>(scalar));
  } else if (scalar < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (scalar >> 6)));
    out.push_back(static_cast<char>(0x80 | (scalar & 0x3F)));
  } else if (scalar < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (scalar >> 12)));
    out.push_back(static_cast<char>(0x80 | ((scalar >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (scalar & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (scalar >> 18)));
    out.push_back(static_cast<char>(0x80 | ((scalar >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((scalar >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (scalar & 0x3F)));
  }
  return out;
}

std::string encode(std::u32string_view scalars) {
  std::string out;
  out.reserve(scalars.size() * 3);
  for (char32_t c : scalars) out += encode(c);
  return out;
}

}  // namespace ambispot::utf8
