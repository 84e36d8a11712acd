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

#include <algorithm>

#include "perturbol/convert.hpp"
#include "perturbol/methods.hpp"
#include "perturbol/methods_internal.hpp"

namespace perturbol {

namespace {

std::string_view rstripped(std::string_view s) {
    std::size_t i = s.find_last_not_of(' ');
    return i == std::string_view::npos ? std::string_view{} : s.substr(0, i + 1);
}

std::string_view lstripped(std::string_view s) {
    std::size_t i = s.find_first_not_of(' ');
    return i == std::string_view::npos ? std::string_view{} : s.substr(i);
}

std::size_t leading_spaces(std::string_view s) {
    std::size_t i = s.find_first_not_of(' ');
    return i == std::string_view::npos ? s.size() : i;
}

bool ends_sentence(const std::vector<Token>& tokens) {
    return !tokens.empty() && tokens.back().kind == TokenKind::Period;
}

} // namespace

namespace detail {

std::optional<CobolUnit> lb_join_sentence_lines_impl(const CobolUnit& unit, RngStream& rng,
                                                     const ApplyContext& context) {
    const std::vector<bool> opaque = exec_block_lines(unit);
    bool any_candidate = false;
    std::vector<CobolLine> out_lines;
    std::optional<std::string> current; // accumulating code line

    auto flush = [&]() {
        if (current) {
            out_lines.push_back(classify_line(*current, SourceForm::Free));
            current.reset();
        }
    };

    for (std::size_t i = 0; i < unit.lines.size(); ++i) {
        const CobolLine& line = unit.lines[i];
        if (line.cls != LineClass::Code || opaque[i]) {
            flush();
            out_lines.push_back(line);
            continue;
        }
        if (!current) {
            current = line.raw;
            continue;
        }
        std::vector<Token> head = tokenize(*current);
        std::vector<Token> tail = tokenize(line.raw);
        const bool joinable = !head.empty() && !tail.empty() && !ends_sentence(head);
        if (!joinable) {
            flush();
            current = line.raw;
            continue;
        }
        std::string joined(rstripped(*current));
        joined += ' ';
        joined += lstripped(line.raw);
        if (context.destination_form == SourceForm::Fixed &&
            joined.size() > kFixedContentMax) {
            flush();
            current = line.raw;
            continue;
        }
        any_candidate = true;
        if (rng.coin())
            current = joined;
        else {
            flush();
            current = line.raw;
        }
    }
    flush();

    if (!any_candidate) return std::nullopt;
    CobolUnit out = unit;
    out.lines = std::move(out_lines);
    return out;
}

std::optional<CobolUnit> lb_split_token_boundary_impl(const CobolUnit& unit, RngStream& rng,
                                                      const ApplyContext& context) {
    const std::vector<bool> opaque = exec_block_lines(unit);
    bool any_candidate = false;
    std::vector<CobolLine> out_lines;
    for (std::size_t i = 0; i < unit.lines.size(); ++i) {
        const CobolLine& line = unit.lines[i];
        if (line.cls != LineClass::Code || opaque[i]) {
            out_lines.push_back(line);
            continue;
        }
        std::vector<Token> tokens = tokenize(line.raw);
        const std::size_t indent = leading_spaces(line.raw) + 4;
        std::vector<std::size_t> cuts;
        for (std::size_t t = 1; t < tokens.size(); ++t) {
            std::size_t cut = tokens[t].begin;
            if (context.destination_form == SourceForm::Fixed) {
                if (cut > kFixedContentMax) continue;
                if (indent + line.raw.size() - cut > kFixedContentMax) continue;
            }
            cuts.push_back(cut);
        }
        if (cuts.empty()) {
            out_lines.push_back(line);
            continue;
        }
        any_candidate = true;
        if (!rng.coin()) {
            out_lines.push_back(line);
            continue;
        }
        const std::size_t cut = cuts[rng.below(cuts.size())];
        out_lines.push_back(classify_line(line.raw.substr(0, cut), SourceForm::Free));
        out_lines.push_back(classify_line(
            std::string(indent, ' ') + line.raw.substr(cut), SourceForm::Free));
    }
    if (!any_candidate) return std::nullopt;
    CobolUnit out = unit;
    out.lines = std::move(out_lines);
    return out;
}

std::optional<CobolUnit> period_newline_impl(const CobolUnit& unit) {
    const std::vector<bool> opaque = exec_block_lines(unit);
    bool any_target = false;
    std::vector<CobolLine> out_lines;
    for (std::size_t i = 0; i < unit.lines.size(); ++i) {
        const CobolLine& line = unit.lines[i];
        if (line.cls != LineClass::Code || opaque[i]) {
            out_lines.push_back(line);
            continue;
        }
        const std::size_t indent = std::max<std::size_t>(leading_spaces(line.raw), 4);
        std::string rest = line.raw;
        bool first_part = true;
        while (true) {
            std::vector<Token> tokens = tokenize(rest);
            std::size_t cut = rest.size();
            for (std::size_t t = 0; t + 1 < tokens.size(); ++t) {
                if (tokens[t].kind == TokenKind::Period) {
                    cut = tokens[t].end;
                    break;
                }
            }
            if (cut == rest.size()) {
                out_lines.push_back(classify_line(rest, SourceForm::Free));
                break;
            }
            any_target = true;
            out_lines.push_back(classify_line(rest.substr(0, cut), SourceForm::Free));
            rest = std::string(indent, ' ') + std::string(lstripped(rest.substr(cut)));
            first_part = false;
        }
        (void)first_part;
    }
    if (!any_target) return std::nullopt;
    CobolUnit out = unit;
    out.lines = std::move(out_lines);
    return out;
}

namespace {

// Shared line walker for the two continuation-split methods. Returns nullopt
// when the unit has no eligible line at all; `split_one` returns forced split
// offsets for a line's content (empty = leave the line alone).
template <typename SplitFn>
std::optional<CobolUnit> continuation_split_walk(const CobolUnit& unit, SplitFn split_one,
                                                 bool& any_split) {
    const std::vector<bool> opaque = exec_block_lines(unit);
    const bool fixed_in = unit.form == SourceForm::Fixed;

    bool any_target = false;
    any_split = false;
    std::vector<std::string> raws;

    for (std::size_t i = 0; i < unit.lines.size(); ++i) {
        const CobolLine& line = unit.lines[i];
        const bool in_block =
            fixed_in && (line.cls == LineClass::Continuation ||
                         (i + 1 < unit.lines.size() &&
                          unit.lines[i + 1].cls == LineClass::Continuation));
        bool eligible = line.cls == LineClass::Code && !opaque[i] && !in_block;
        if (eligible && scan_literal_state(line.content()).inside)
            eligible = false; // open literal: the line is not self-contained

        std::string_view content = line.content();
        std::string first_prefix =
            fixed_in ? line.raw.substr(0, std::min<std::size_t>(7, line.raw.size()))
                     : std::string(7, ' ');
        if (fixed_in && first_prefix.size() < 7)
            first_prefix.resize(7, ' ');

        if (!eligible) {
            if (fixed_in) {
                raws.push_back(line.raw);
            } else {
                // non-target free lines still need a fixed rendering
                CobolUnit one;
                one.form = SourceForm::Free;
                one.lines.push_back(line);
                CobolUnit rendered = free_to_fixed_sfx(one);
                for (const CobolLine& r : rendered.lines) raws.push_back(r.raw);
            }
            continue;
        }

        bool target_here = false;
        std::vector<std::size_t> forced = split_one(content, target_here);
        any_target = any_target || target_here;
        if (forced.empty() && fixed_in && content.size() + first_prefix.size() <= kFixedLineMax) {
            raws.push_back(line.raw);
            continue;
        }
        if (!forced.empty()) any_split = true;
        for (std::string& seg : split_fixed_segments(content, first_prefix, forced))
            raws.push_back(std::move(seg));
    }

    if (!any_target) return std::nullopt;
    CobolUnit out;
    out.form = SourceForm::Fixed;
    out.kind = unit.kind;
    out.trailing_newline = unit.trailing_newline;
    out.lines.reserve(raws.size());
    for (const std::string& raw : raws)
        out.lines.push_back(classify_line(raw, SourceForm::Fixed));
    return out;
}

} // namespace

std::optional<CobolUnit> split_literal_continuation_impl(const CobolUnit& unit,
                                                         RngStream& rng) {
    bool any_split = false;
    auto split_one = [&rng](std::string_view content, bool& target_here) {
        std::vector<std::size_t> forced;
        for (const Token& tok : tokenize(content)) {
            if (tok.kind != TokenKind::NonnumericLiteral) continue;
            const std::size_t body = tok.text.size() >= 2 ? tok.text.size() - 2 : 0;
            if (body < 2) continue;
            target_here = true;
            // interior positions leave at least one body character on each side
            const char q = tok.text.front();
            std::vector<std::size_t> valid;
            for (std::size_t k = tok.begin + 2; k + 2 <= tok.end; ++k) {
                if (content[k - 1] == q && content[k] == q) continue; // escape pair
                valid.push_back(k);
            }
            if (valid.empty()) continue;
            forced.push_back(valid[rng.below(valid.size())]);
        }
        return forced;
    };
    std::optional<CobolUnit> out = continuation_split_walk(unit, split_one, any_split);
    if (out && !any_split) return unit; // had literal targets but none splittable
    return out;
}

std::optional<CobolUnit> random_line_continuation_split_impl(const CobolUnit& unit,
                                                             RngStream& rng) {
    bool any_split = false;
    auto split_one = [&rng](std::string_view content, bool& target_here) {
        std::vector<std::size_t> forced;
        SplitPoints points = legal_split_points(content);
        std::vector<std::size_t> candidates = points.token_starts;
        candidates.insert(candidates.end(), points.literal_interiors.begin(),
                          points.literal_interiors.end());
        if (candidates.empty()) return forced;
        target_here = true;
        if (!rng.coin()) return forced;
        forced.push_back(candidates[rng.below(candidates.size())]);
        return forced;
    };
    std::optional<CobolUnit> out = continuation_split_walk(unit, split_one, any_split);
    if (out && !any_split) return unit; // all coin tosses declined this try
    return out;
}

} // namespace detail

PerturbOutcome split_literal_continuation(const CobolUnit& unit, RngStream& rng) {
    return apply_method(*find_method("split_literal_continuation"), unit, rng,
                        ApplyContext{SourceForm::Fixed});
}

PerturbOutcome random_line_continuation_split(const CobolUnit& unit, RngStream& rng) {
    return apply_method(*find_method("random_line_continuation_split"), unit, rng,
                        ApplyContext{SourceForm::Fixed});
}

} // namespace perturbol
