#pragma once

// Strict UTF-8 <-> Unicode scalar values. Malformed input is an error, never
// replaced, since match offsets are reported in code points.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "capprox/error.hpp"

namespace capprox {

struct DecodedText {
  std::u32string code_points;
  // Byte offset of each code point, plus one trailing entry for the end.
  // Empty unless requested.
  std::vector<std::size_t> byte_offsets;
};

inline DecodedText decode_utf8(std::string_view bytes, bool keep_offsets = false) {
  DecodedText out;
  out.code_points.reserve(bytes.size());
  if (keep_offsets) out.byte_offsets.reserve(bytes.size() + 1);

  std::size_t i = 0;
  while (i < bytes.size()) {
    const std::size_t start = i;
    const auto lead = static_cast<unsigned char>(bytes[i]);
    char32_t cp = 0;
    std::size_t extra = 0;
    char32_t min = 0;
    if (lead < 0x80) {
      cp = lead;
    } else if ((lead & 0xe0) == 0xc0) {
      cp = lead & 0x1f;
      extra = 1;
      min = 0x80;
    } else if ((lead & 0xf0) == 0xe0) {
      cp = lead & 0x0f;
      extra = 2;
      min = 0x800;
    } else if ((lead & 0xf8) == 0xf0) {
      cp = lead & 0x07;
      extra = 3;
      min = 0x10000;
    } else {
      throw DecodeError("invalid UTF-8 lead byte", start);
    }
    ++i;
    for (std::size_t k = 0; k < extra; ++k, ++i) {
      if (i >= bytes.size()) throw DecodeError("truncated UTF-8 sequence", start);
      const auto cont = static_cast<unsigned char>(bytes[i]);
      if ((cont & 0xc0) != 0x80) throw DecodeError("invalid UTF-8 continuation byte", i);
      cp = (cp << 6) | (cont & 0x3f);
    }
    if (cp < min) throw DecodeError("overlong UTF-8 encoding", start);
    if (cp > 0x10ffff) throw DecodeError("code point beyond U+10FFFF", start);
    if (cp >= 0xd800 && cp <= 0xdfff) throw DecodeError("UTF-8 encoded surrogate", start);

    out.code_points.push_back(cp);
    if (keep_offsets) out.byte_offsets.push_back(start);
  }
  if (keep_offsets) out.byte_offsets.push_back(bytes.size());
  return out;
}

inline std::u32string to_code_points(std::string_view utf8) {
  return decode_utf8(utf8).code_points;
}

inline std::string to_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else {
      out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    }
  }
  return out;
}

}  // namespace capprox
