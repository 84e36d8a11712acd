// Copyright 2026 The Perturbol Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include "perturbol/lexer.hpp"
#include "perturbol/source.hpp"

namespace perturbol {

/// One element of the normalized token stream: kind plus case-folded text
/// (words uppercased, everything else verbatim).
struct NormalToken {
    TokenKind kind;
    std::string text;

    bool operator==(const NormalToken& other) const {
        return kind == other.kind && text == other.text;
    }
};

/// Normalized view of a unit: the free-form token stream with comments and
/// blank lines dropped, word case folded, and whitespace collapsed (tokens
/// only, no gaps). Two units with equal streams have the same meaning under
/// every whitespace / line-break / empty-line / case / comment variation.
std::vector<NormalToken> normal_stream(const CobolUnit& unit);

/// Raw text of the non-comment lines, in order (used by the comment-method
/// oracle, which requires the code lines byte-identical).
std::vector<std::string> non_comment_lines(const CobolUnit& unit);

} // namespace perturbol
