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
#include <string_view>
#include <vector>

#include "perturbol/source.hpp"

namespace perturbol {

enum class TokenKind { Word, NonnumericLiteral, NumericLiteral, Picture, Period, Separator };

const char* to_string(TokenKind kind);

struct Token {
    TokenKind kind = TokenKind::Separator;
    std::string text;
    std::size_t begin = 0; // span in the lexed text
    std::size_t end = 0;

    bool operator==(const Token& other) const {
        return kind == other.kind && text == other.text && begin == other.begin &&
               end == other.end;
    }
};

/// Lexes free-form code text (newlines act as whitespace; continuation lines
/// are a fixed-form concept and must be joined first). Spans are lossless:
/// concatenating token texts with the original inter-token gaps reproduces
/// the input exactly. Throws UnterminatedLiteral.
std::vector<Token> tokenize(std::string_view text);

/// A token located on a specific line of a unit, with the span relative to
/// that line's content.
struct UnitToken {
    std::size_t line = 0;
    Token token;
};

/// Tokens of every code and directive line of a free-form unit, in order.
std::vector<UnitToken> unit_tokens(const CobolUnit& unit);

/// Case-insensitive ASCII helpers used across the token-level methods.
std::string to_upper(std::string_view text);
std::string to_lower(std::string_view text);
bool equals_ci(std::string_view a, std::string_view b);

/// Half-open index ranges into a token vector covering EXEC ... END-EXEC
/// blocks, which are treated as opaque.
std::vector<std::pair<std::size_t, std::size_t>>
exec_ranges(const std::vector<UnitToken>& tokens);

bool in_ranges(const std::vector<std::pair<std::size_t, std::size_t>>& ranges,
               std::size_t index);

} // namespace perturbol
