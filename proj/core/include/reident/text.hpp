// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

// UTF-8 helpers. All "character" counts and offsets in the toolkit are in
// Unicode scalar values; bytes only appear at I/O boundaries.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace reident::text {

/// Decodes UTF-8; malformed sequences become U+FFFD one byte at a time.
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view chars);

std::size_t char_count(std::string_view utf8);

/// Byte offset of the character at `index`, or utf8.size() past the end.
std::size_t byte_offset(std::string_view utf8, std::size_t index);

/// Simple one-to-one case folding covering Latin, Greek and Cyrillic.
char32_t fold(char32_t c) noexcept;
std::u32string fold(std::u32string_view s);
std::string lower(std::string_view utf8);

bool is_space(char32_t c) noexcept;
bool is_letter(char32_t c) noexcept;
bool is_upper(char32_t c) noexcept;
bool is_alnum(char32_t c) noexcept;

std::string_view trim(std::string_view utf8);
std::vector<std::string> split_whitespace(std::string_view utf8);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Case-insensitive substring test. An empty needle is contained everywhere.
bool contains_ci(std::string_view haystack, std::string_view needle);

/// Start offsets (in characters) of every non-overlapping occurrence.
std::vector<std::size_t> find_all(std::u32string_view haystack, std::u32string_view needle);

std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t state = 0xcbf29ce484222325ULL) noexcept;

}  // namespace reident::text
