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

#include "perturbol/lexer.hpp"

#include <algorithm>
#include <cctype>

namespace perturbol {

const char* to_string(TokenKind kind) {
    switch (kind) {
    case TokenKind::Word: return "word";
    case TokenKind::NonnumericLiteral: return "nonnumeric-literal";
    case TokenKind::NumericLiteral: return "numeric-literal";
    case TokenKind::Picture: return "picture";
    case TokenKind::Period: return "period";
    case TokenKind::Separator: return "separator";
    }
    return "?";
}

std::string to_upper(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool equals_ci(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::toupper(static_cast<unsigned char>(a[i])) !=
            std::toupper(static_cast<unsigned char>(b[i])))
            return false;
    return true;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_letter(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
}
bool is_word_char(char c) { return is_letter(c) || is_digit(c) || c == '-'; }

Token make(TokenKind kind, std::string_view text, std::size_t begin, std::size_t end) {
    return Token{kind, std::string(text), begin, end};
}

// A picture string ends at whitespace, or at '.', ',' or ';' immediately
// followed by whitespace or end of text.
std::size_t picture_end(std::string_view s, std::size_t i) {
    while (i < s.size()) {
        char c = s[i];
        if (is_space(c)) break;
        if ((c == '.' || c == ',' || c == ';') &&
            (i + 1 == s.size() || is_space(s[i + 1])))
            break;
        ++i;
    }
    return i;
}

} // namespace

std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    bool pic_pending = false;
    std::size_t i = 0;
    while (i < s.size()) {
        if (is_space(s[i])) {
            ++i;
            continue;
        }
        const std::size_t begin = i;
        const char c = s[i];

        if (c == '\'' || c == '"') {
            std::size_t j = i + 1;
            bool closed = false;
            while (j < s.size()) {
                if (s[j] == '\n') break; // free-form literals do not span lines
                if (s[j] == c) {
                    if (j + 1 < s.size() && s[j + 1] == c) {
                        j += 2;
                        continue;
                    }
                    ++j;
                    closed = true;
                    break;
                }
                ++j;
            }
            if (!closed)
                fail(ErrorCode::UnterminatedLiteral,
                     "literal opened at offset " + std::to_string(begin));
            out.push_back(make(TokenKind::NonnumericLiteral, s.substr(begin, j - begin), begin, j));
            pic_pending = false;
            i = j;
            continue;
        }

        if (pic_pending) {
            if (is_word_char(c)) {
                // allow the optional IS between PICTURE and the string
                std::size_t j = i;
                while (j < s.size() && is_word_char(s[j])) ++j;
                if (equals_ci(s.substr(i, j - i), "IS")) {
                    out.push_back(make(TokenKind::Word, s.substr(i, j - i), i, j));
                    i = j;
                    continue;
                }
            }
            std::size_t j = picture_end(s, i);
            out.push_back(make(TokenKind::Picture, s.substr(begin, j - begin), begin, j));
            pic_pending = false;
            i = j;
            continue;
        }

        // numeric literal, possibly signed, possibly with one decimal point
        const bool signed_start =
            (c == '+' || c == '-') && i + 1 < s.size() && is_digit(s[i + 1]) &&
            (out.empty() || out.back().end < begin || s[begin - 1] == '(');
        if (is_digit(c) || signed_start) {
            std::size_t j = i + (signed_start ? 1 : 0);
            while (j < s.size() && is_digit(s[j])) ++j;
            if (j < s.size() && s[j] == '.' && j + 1 < s.size() && is_digit(s[j + 1])) {
                ++j;
                while (j < s.size() && is_digit(s[j])) ++j;
            }
            // a digit run followed by letters or hyphen is a word, e.g. 1ST-TIME
            if (j >= s.size() || !is_word_char(s[j])) {
                out.push_back(make(TokenKind::NumericLiteral, s.substr(begin, j - begin), begin, j));
                i = j;
                continue;
            }
        }

        if (is_word_char(c) && !(c == '-')) {
            std::size_t j = i;
            bool has_letter = false;
            while (j < s.size() && is_word_char(s[j])) {
                has_letter = has_letter || is_letter(s[j]);
                ++j;
            }
            std::string_view text = s.substr(begin, j - begin);
            TokenKind kind = has_letter ? TokenKind::Word : TokenKind::Separator;
            out.push_back(make(kind, text, begin, j));
            if (kind == TokenKind::Word &&
                (equals_ci(text, "PIC") || equals_ci(text, "PICTURE")))
                pic_pending = true;
            i = j;
            continue;
        }

        if (c == '.') {
            out.push_back(make(TokenKind::Period, s.substr(begin, 1), begin, begin + 1));
            ++i;
            continue;
        }

        if (c == '*' && i + 1 < s.size() && s[i + 1] == '>') {
            // inline comment: keep the rest of the line as one opaque token
            std::size_t j = s.find('\n', i);
            if (j == std::string_view::npos) j = s.size();
            out.push_back(make(TokenKind::Separator, s.substr(begin, j - begin), begin, j));
            i = j;
            continue;
        }

        // punctuation; recognize the common two-character operators
        static constexpr std::string_view two_char_ops[] = {"**", ">=", "<=", "<>", "=="};
        std::size_t len = 1;
        if (i + 1 < s.size()) {
            std::string_view pair = s.substr(i, 2);
            for (std::string_view op : two_char_ops)
                if (pair == op) { len = 2; break; }
        }
        out.push_back(make(TokenKind::Separator, s.substr(begin, len), begin, begin + len));
        i += len;
    }
    return out;
}

std::vector<UnitToken> unit_tokens(const CobolUnit& unit) {
    if (unit.form != SourceForm::Free)
        fail(ErrorCode::FormViolation, "unit_tokens expects a free-form unit");
    std::vector<UnitToken> out;
    for (std::size_t li = 0; li < unit.lines.size(); ++li) {
        const CobolLine& line = unit.lines[li];
        if (line.cls != LineClass::Code && line.cls != LineClass::Directive) continue;
        for (Token& t : tokenize(line.raw))
            out.push_back(UnitToken{li, std::move(t)});
    }
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>>
exec_ranges(const std::vector<UnitToken>& tokens) {
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    std::size_t open = tokens.size();
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const Token& t = tokens[i].token;
        if (t.kind != TokenKind::Word) continue;
        if (open == tokens.size()) {
            if (equals_ci(t.text, "EXEC")) open = i;
        } else if (equals_ci(t.text, "END-EXEC")) {
            ranges.emplace_back(open, i + 1);
            open = tokens.size();
        }
    }
    if (open != tokens.size()) ranges.emplace_back(open, tokens.size());
    return ranges;
}

bool in_ranges(const std::vector<std::pair<std::size_t, std::size_t>>& ranges,
               std::size_t index) {
    for (const auto& [b, e] : ranges)
        if (index >= b && index < e) return true;
    return false;
}

} // namespace perturbol
