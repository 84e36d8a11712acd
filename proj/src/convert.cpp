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

#include "perturbol/convert.hpp"

#include <algorithm>
#include <cassert>

#include "perturbol/lexer.hpp"

namespace perturbol {

namespace {

constexpr std::string_view kContinuationPrefix = "      -    "; // hyphen col 7, resume col 12

std::string_view rstripped(std::string_view s) {
    std::size_t i = s.find_last_not_of(' ');
    return i == std::string_view::npos ? std::string_view{} : s.substr(0, i + 1);
}

std::string_view lstripped(std::string_view s) {
    std::size_t i = s.find_first_not_of(' ');
    return i == std::string_view::npos ? std::string_view{} : s.substr(i);
}

} // namespace

std::pair<CobolUnit, ConversionTrace> fixed_to_free(const CobolUnit& unit) {
    if (unit.form != SourceForm::Fixed)
        fail(ErrorCode::FormViolation, "fixed_to_free expects a fixed-form unit");

    CobolUnit out;
    out.form = SourceForm::Free;
    out.kind = unit.kind;
    out.trailing_newline = unit.trailing_newline;
    ConversionTrace trace;

    auto push = [&](std::string_view raw) {
        out.lines.push_back(classify_line(raw, SourceForm::Free));
    };

    std::size_t i = 0;
    const std::size_t n = unit.lines.size();
    while (i < n) {
        const CobolLine& line = unit.lines[i];
        switch (line.cls) {
        case LineClass::Blank:
            push(line.content());
            ++i;
            break;
        case LineClass::Comment: {
            std::string text = "*>";
            text += line.content();
            ++trace.comments_restyled;
            push(text);
            ++i;
            break;
        }
        case LineClass::Directive: {
            if (line.raw.size() > 6 && line.raw[6] == '$')
                push(std::string_view(line.raw).substr(6));
            else
                push(line.content());
            ++i;
            break;
        }
        case LineClass::Continuation:
            fail(ErrorCode::MalformedContinuation,
                 "continuation line " + std::to_string(i + 1) +
                     " does not follow a code line");
        case LineClass::Code: {
            std::string logical(line.content());
            ++i;
            while (i < n && unit.lines[i].cls == LineClass::Continuation) {
                std::string_view cont = unit.lines[i].content();
                LiteralState state = scan_literal_state(logical);
                if (state.inside) {
                    std::string_view resumed = lstripped(cont);
                    if (resumed.empty() || resumed.front() != state.quote)
                        fail(ErrorCode::MalformedContinuation,
                             "literal continuation on line " + std::to_string(i + 1) +
                                 " does not resume with " + std::string(1, state.quote));
                    logical += resumed.substr(1);
                } else {
                    logical += lstripped(cont);
                }
                ++trace.joined_continuations;
                ++i;
            }
            if (!logical.empty() && (logical.back() == ',' || logical.back() == ';')) {
                logical += ' ';
                ++trace.comma_spaces_inserted;
            }
            push(logical);
            break;
        }
        }
    }
    return {std::move(out), trace};
}

SplitPoints legal_split_points(std::string_view content) {
    SplitPoints points;
    std::vector<Token> tokens = tokenize(content);
    for (std::size_t t = 1; t < tokens.size(); ++t)
        points.token_starts.push_back(tokens[t].begin);
    for (const Token& tok : tokens) {
        if (tok.kind != TokenKind::NonnumericLiteral) continue;
        const char q = tok.text.front();
        // positions between the two characters of a doubled quote are not
        // splittable: the re-joined quote scan would misread the state
        std::vector<bool> blocked(tok.text.size(), false);
        for (std::size_t i = 1; i + 1 < tok.text.size();) {
            if (tok.text[i] == q && tok.text[i + 1] == q) {
                blocked[i + 1] = true;
                i += 2;
            } else {
                ++i;
            }
        }
        for (std::size_t k = 1; k + 1 <= tok.text.size() - 1; ++k) {
            if (blocked[k]) continue;
            points.literal_interiors.push_back(tok.begin + k);
        }
    }
    return points;
}

std::vector<std::string> split_fixed_segments(std::string_view content,
                                              std::string_view first_prefix,
                                              const std::vector<std::size_t>& force_splits) {
    SplitPoints points = legal_split_points(content);
    std::vector<std::size_t> legal;
    legal.reserve(points.token_starts.size() + points.literal_interiors.size());
    legal.insert(legal.end(), points.token_starts.begin(), points.token_starts.end());
    legal.insert(legal.end(), points.literal_interiors.begin(), points.literal_interiors.end());
    std::sort(legal.begin(), legal.end());

    std::vector<std::size_t> forced(force_splits);
    std::sort(forced.begin(), forced.end());

    std::vector<std::string> segments;
    std::size_t pos = 0;
    LiteralState state; // state at `pos`
    bool first = true;

    while (true) {
        const bool resume_quote = state.inside;
        const std::size_t overhead =
            (first ? first_prefix.size() : kContinuationPrefix.size()) + (resume_quote ? 1 : 0);
        assert(overhead < kFixedLineMax);
        const std::size_t cap = kFixedLineMax - overhead;

        auto next_forced_it = std::upper_bound(forced.begin(), forced.end(), pos);
        const std::size_t target =
            next_forced_it != forced.end() ? *next_forced_it : content.size();
        const bool forced_cut = next_forced_it != forced.end();

        std::size_t cut = target;
        if (target - pos > cap) {
            // highest legal split with segment length <= cap
            std::size_t best = 0;
            for (auto it = std::upper_bound(legal.begin(), legal.end(), pos);
                 it != legal.end() && *it <= pos + cap; ++it)
                best = *it;
            if (best == 0)
                fail(ErrorCode::UnsplittableLine,
                     "no legal split point within " + std::to_string(cap) +
                         " characters at offset " + std::to_string(pos));
            cut = best;
        }

        std::string rendered;
        rendered.reserve(overhead + (cut - pos));
        rendered += first ? first_prefix : kContinuationPrefix;
        if (resume_quote) rendered += state.quote;
        rendered.append(content.substr(pos, cut - pos));
        segments.push_back(std::move(rendered));

        state = scan_literal_state(content.substr(pos, cut - pos), state);
        pos = cut;
        first = false;
        if (pos >= content.size()) break;
        (void)forced_cut;
    }
    return segments;
}

namespace {

// Renders one free-form line into fixed-form lines, appending to `out`.
void render_fixed_line(const CobolLine& line, std::vector<std::string>& out,
                       ConversionTrace& trace) {
    switch (line.cls) {
    case LineClass::Blank:
        if (!line.raw.empty()) ++trace.trailing_spaces_trimmed;
        out.emplace_back();
        return;
    case LineClass::Comment: {
        std::string_view rest = lstripped(line.raw);
        rest.remove_prefix(2); // the *> marker
        ++trace.comments_restyled;
        if (rest.size() > kFixedContentMax && rstripped(rest).size() <= kFixedContentMax) {
            rest = rest.substr(0, kFixedContentMax);
            ++trace.trailing_spaces_trimmed;
        }
        if (rest.empty()) {
            out.emplace_back("      *");
            return;
        }
        std::size_t chunks = 0;
        for (std::size_t pos = 0; pos < rest.size(); pos += kFixedContentMax) {
            out.push_back("      *" + std::string(rest.substr(pos, kFixedContentMax)));
            ++chunks;
        }
        if (chunks > 1) trace.lines_split += chunks - 1;
        return;
    }
    case LineClass::Code:
    case LineClass::Directive: {
        std::string_view content = line.raw;
        if (content.size() > kFixedContentMax &&
            rstripped(content).size() <= kFixedContentMax) {
            content = content.substr(0, kFixedContentMax);
            ++trace.trailing_spaces_trimmed;
        }
        if (content.size() <= kFixedContentMax) {
            out.push_back("       " + std::string(content));
            return;
        }
        std::vector<std::string> segments = split_fixed_segments(content, "       ");
        trace.lines_split += segments.size() - 1;
        for (std::string& s : segments) out.push_back(std::move(s));
        return;
    }
    case LineClass::Continuation:
        fail(ErrorCode::FormViolation, "free-form unit contains a continuation line");
    }
}

} // namespace

std::pair<CobolUnit, ConversionTrace> free_to_fixed_sfx_traced(const CobolUnit& unit) {
    if (unit.form != SourceForm::Free)
        fail(ErrorCode::FormViolation, "free_to_fixed_sfx expects a free-form unit");

    CobolUnit out;
    out.form = SourceForm::Fixed;
    out.kind = unit.kind;
    out.trailing_newline = unit.trailing_newline;
    ConversionTrace trace;

    std::vector<std::string> raws;
    for (const CobolLine& line : unit.lines) render_fixed_line(line, raws, trace);
    out.lines.reserve(raws.size());
    for (const std::string& raw : raws)
        out.lines.push_back(classify_line(raw, SourceForm::Fixed));
    return {std::move(out), trace};
}

CobolUnit free_to_fixed_sfx(const CobolUnit& unit) {
    return free_to_fixed_sfx_traced(unit).first;
}

bool is_sfx(const CobolUnit& unit) {
    if (unit.form != SourceForm::Fixed)
        fail(ErrorCode::FormViolation, "is_sfx expects a fixed-form unit");
    CobolUnit round = free_to_fixed_sfx(fixed_to_free(unit).first);
    return unit_text(round) == unit_text(unit);
}

} // namespace perturbol
