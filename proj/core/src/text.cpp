// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

#include "reident/text.hpp"

#include <algorithm>

namespace reident::text {
namespace {

constexpr char32_t kReplacement = 0xFFFD;

std::size_t sequence_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 0;
}

// Decodes one scalar at `pos`, advancing it. Returns U+FFFD on bad input.
char32_t next(std::string_view s, std::size_t& pos) {
  auto lead = static_cast<unsigned char>(s[pos]);
  std::size_t len = sequence_length(lead);
  if (len == 0 || pos + len > s.size()) {
    ++pos;
    return kReplacement;
  }
  if (len == 1) {
    ++pos;
    return lead;
  }
  char32_t cp = lead & (0x7F >> len);
  for (std::size_t i = 1; i < len; ++i) {
    auto cont = static_cast<unsigned char>(s[pos + i]);
    if ((cont & 0xC0) != 0x80) {
      ++pos;
      return kReplacement;
    }
    cp = (cp << 6) | (cont & 0x3F);
  }
  pos += len;
  constexpr char32_t kMinForLength[] = {0, 0, 0x80, 0x800, 0x10000};
  if (cp < kMinForLength[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    return kReplacement;
  }
  return cp;
}

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

}  // namespace

std::u32string decode(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  std::size_t pos = 0;
  while (pos < utf8.size()) out.push_back(next(utf8, pos));
  return out;
}

std::string encode(std::u32string_view chars) {
  std::string out;
  out.reserve(chars.size());
  for (char32_t c : chars) append(out, c);
  return out;
}

std::size_t char_count(std::string_view utf8) {
  std::size_t n = 0;
  std::size_t pos = 0;
  while (pos < utf8.size()) {
    next(utf8, pos);
    ++n;
  }
  return n;
}

std::size_t byte_offset(std::string_view utf8, std::size_t index) {
  std::size_t pos = 0;
  for (std::size_t i = 0; i < index && pos < utf8.size(); ++i) next(utf8, pos);
  return pos;
}

char32_t fold(char32_t c) noexcept {
  if (c < 0x80) return (c >= 'A' && c <= 'Z') ? c + 0x20 : c;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
  if (c >= 0x100 && c <= 0x17F) {
    if (c == 0x178) return 0xFF;
    if (c == 0x130) return 'i';
    bool even_upper = (c <= 0x137) || (c >= 0x14A && c <= 0x177);
    bool odd_upper = (c >= 0x139 && c <= 0x148) || (c >= 0x179 && c <= 0x17E);
    if (even_upper && c % 2 == 0) return c + 1;
    if (odd_upper && c % 2 == 1) return c + 1;
    return c;
  }
  if (c >= 0x391 && c <= 0x3A9 && c != 0x3A2) return c + 0x20;
  if (c >= 0x410 && c <= 0x42F) return c + 0x20;
  if (c >= 0x400 && c <= 0x40F) return c + 0x50;
  return c;
}

std::u32string fold(std::u32string_view s) {
  std::u32string out(s);
  for (auto& c : out) c = fold(c);
  return out;
}

std::string lower(std::string_view utf8) { return encode(fold(decode(utf8))); }

bool is_space(char32_t c) noexcept {
  switch (c) {
    case ' ': case '\t': case '\n': case '\v': case '\f': case '\r':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000: case 0xFEFF:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200B;
  }
}

bool is_letter(char32_t c) noexcept {
  if (c < 0x80) return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  if (c < 0xC0) return c == 0xAA || c == 0xB5 || c == 0xBA;
  if (c == 0xD7 || c == 0xF7) return false;
  if (is_space(c)) return false;
  if (c >= 0x2000 && c <= 0x2BFF) return false;  // punctuation, symbols, arrows
  if (c >= 0x3000 && c <= 0x303F) return false;
  return c != 0xFFFD;
}

bool is_upper(char32_t c) noexcept { return fold(c) != c; }

bool is_alnum(char32_t c) noexcept { return is_letter(c) || (c >= '0' && c <= '9'); }

std::string_view trim(std::string_view utf8) {
  auto chars = decode(utf8);
  std::size_t first = 0;
  while (first < chars.size() && is_space(chars[first])) ++first;
  std::size_t last = chars.size();
  while (last > first && is_space(chars[last - 1])) --last;
  std::size_t begin = byte_offset(utf8, first);
  std::size_t end = byte_offset(utf8, last);
  return utf8.substr(begin, end - begin);
}

std::vector<std::string> split_whitespace(std::string_view utf8) {
  std::vector<std::string> out;
  std::u32string current;
  for (char32_t c : decode(utf8)) {
    if (is_space(c)) {
      if (!current.empty()) out.push_back(encode(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) out.push_back(encode(current));
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
  auto h = fold(decode(haystack));
  auto n = fold(decode(needle));
  return h.find(n) != std::u32string::npos;
}

std::vector<std::size_t> find_all(std::u32string_view haystack, std::u32string_view needle) {
  std::vector<std::size_t> out;
  if (needle.empty()) return out;
  std::size_t pos = haystack.find(needle);
  while (pos != std::u32string_view::npos) {
    out.push_back(pos);
    pos = haystack.find(needle, pos + needle.size());
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state) noexcept {
  for (unsigned char b : bytes) {
    state ^= b;
    state *= 0x100000001b3ULL;
  }
  return state;
}

}  // namespace reident::text
