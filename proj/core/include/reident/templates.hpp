// Copyright 2026 The reident Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>
#include <vector>

#include "reident/backends.hpp"

namespace reident::templates {

/// Prompt templates shipped with the toolkit:
///   instruct            instruction-tuned models (### Instruction / ### Response)
///   who_is              chat models, asks for the name of <mask> after the text
///   name_is             completion models, ends mid-sentence before the name
///   fill_mask           the bare masked text
///   qa                  question answering ("who is <mask>?")
///   rag_summary         ruling summarizer, keeps <mask> placeholders
///   rag_summary_strict  retry prompt when a summary lost every mask
///   rag_reidentify      reader prompt over retrieved passages + summary
const std::vector<PromptTemplate>& builtin();

/// Throws UnknownBackend for an unknown id.
const PromptTemplate& get(std::string_view id);

}  // namespace reident::templates
