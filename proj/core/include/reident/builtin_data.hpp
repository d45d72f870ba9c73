// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

// Name lists shipped with the library (one entry per line). The same files
// live in core/data/ for inspection.

#pragma once

#include <string_view>

namespace reident::builtin {

/// 50 "First Last" names for the random guessing baseline.
std::string_view random_pool();
/// Most common first names, ordered by commonness (male/female interleaved).
std::string_view majority_first_names();
/// Most common surnames, ordered by commonness.
std::string_view majority_last_names();
/// Lowercase name tokens used to tell names from other words.
std::string_view gazetteer();

}  // namespace reident::builtin
