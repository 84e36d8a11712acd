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

#include "perturbol/methods.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <map>
#include <set>

#include "perturbol/convert.hpp"
#include "perturbol/lexer.hpp"
#include "perturbol/methods_internal.hpp"
#include "perturbol/structure.hpp"

namespace perturbol {

const char* to_string(MethodCategory category) {
    switch (category) {
    case MethodCategory::EndBlock: return "end_block";
    case MethodCategory::WithinLineWhitespace: return "within_line_whitespace";
    case MethodCategory::LineBreaks: return "line_breaks";
    case MethodCategory::Distraction: return "distraction";
    case MethodCategory::EmptyLines: return "empty_lines";
    case MethodCategory::Comments: return "comments";
    case MethodCategory::Case: return "case";
    case MethodCategory::IdentifierRenamingObfuscation:
        return "identifier_renaming_obfuscation";
    case MethodCategory::IdentifierRenamingPreserve:
        return "identifier_renaming_preserve";
    }
    return "?";
}

std::optional<MethodCategory> category_from_string(std::string_view name) {
    static const std::map<std::string, MethodCategory, std::less<>> table = {
        {"end_block", MethodCategory::EndBlock},
        {"within_line_whitespace", MethodCategory::WithinLineWhitespace},
        {"line_breaks", MethodCategory::LineBreaks},
        {"distraction", MethodCategory::Distraction},
        {"empty_lines", MethodCategory::EmptyLines},
        {"comments", MethodCategory::Comments},
        {"case", MethodCategory::Case},
        {"identifier_renaming_obfuscation", MethodCategory::IdentifierRenamingObfuscation},
        {"identifier_renaming_preserve", MethodCategory::IdentifierRenamingPreserve},
    };
    auto it = table.find(name);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

namespace {

std::vector<MethodDescriptor> build_catalog() {
    using C = MethodCategory;
    using D = Determinism;
    using S = MethodScope;
    std::vector<MethodDescriptor> methods = {
        // id, category, determinism, requires_free_parse, scope, fixed_output_only
        {"end_if_to_period", C::EndBlock, D::Deterministic, true, S::AnyUnit, false},
        {"end_if_drop_keep_period", C::EndBlock, D::Deterministic, true, S::AnyUnit, false},
        {"end_evaluate_to_period", C::EndBlock, D::Deterministic, true, S::AnyUnit, false},
        {"end_evaluate_drop_keep_period", C::EndBlock, D::Deterministic, true, S::AnyUnit, false},
        {"end_perform_to_period", C::EndBlock, D::Deterministic, true, S::AnyUnit, false},
        {"end_perform_drop_keep_period", C::EndBlock, D::Deterministic, true, S::AnyUnit, false},

        {"ws_collapse_single", C::WithinLineWhitespace, D::Deterministic, true, S::AnyUnit, false},
        {"ws_expand_random", C::WithinLineWhitespace, D::Probabilistic, true, S::AnyUnit, false},
        {"ws_reindent_within_area", C::WithinLineWhitespace, D::Probabilistic, false, S::AnyUnit, false},
        {"ws_trailing_pad", C::WithinLineWhitespace, D::Probabilistic, false, S::AnyUnit, false},

        {"lb_join_sentence_lines", C::LineBreaks, D::Probabilistic, true, S::AnyUnit, false},
        {"lb_split_token_boundary", C::LineBreaks, D::Probabilistic, true, S::AnyUnit, false},
        {"period_newline_end_of_sent", C::LineBreaks, D::Deterministic, true, S::AnyUnit, false},
        {"split_literal_continuation", C::LineBreaks, D::Probabilistic, false, S::AnyUnit, true},
        {"random_line_continuation_split", C::LineBreaks, D::Probabilistic, false, S::AnyUnit, true},

        {"insert_noise_then", C::Distraction, D::Deterministic, true, S::AnyUnit, false},

        {"empty_insert_random", C::EmptyLines, D::Probabilistic, false, S::AnyUnit, false},
        {"empty_insert_every_line", C::EmptyLines, D::Deterministic, false, S::AnyUnit, false},
        {"empty_remove_all", C::EmptyLines, D::Deterministic, false, S::AnyUnit, false},

        {"comments_remove_all", C::Comments, D::Deterministic, false, S::AnyUnit, false},
        {"comments_blank_content", C::Comments, D::Deterministic, false, S::AnyUnit, false},
        {"comments_randomize_content", C::Comments, D::Probabilistic, false, S::AnyUnit, false},

        {"identifiers_lowercase", C::Case, D::Deterministic, true, S::AnyUnit, false},
        {"identifiers_uppercase", C::Case, D::Deterministic, true, S::AnyUnit, false},
        {"identifiers_random_case", C::Case, D::Probabilistic, true, S::AnyUnit, false},
        {"keywords_lowercase", C::Case, D::Deterministic, true, S::AnyUnit, false},

        {"rename_gibberish", C::IdentifierRenamingObfuscation, D::Probabilistic, true, S::ProgramOnly, false},
        {"rename_sequential", C::IdentifierRenamingObfuscation, D::Deterministic, true, S::ProgramOnly, false},
        {"rename_hash", C::IdentifierRenamingObfuscation, D::Deterministic, true, S::ProgramOnly, false},
        {"rename_permute", C::IdentifierRenamingObfuscation, D::Probabilistic, true, S::ProgramOnly, false},

        {"rename_suffix", C::IdentifierRenamingPreserve, D::Deterministic, true, S::ProgramOnly, false},
        {"rename_hyphen_strip", C::IdentifierRenamingPreserve, D::Deterministic, true, S::ProgramOnly, false},
        {"rename_prefix", C::IdentifierRenamingPreserve, D::Deterministic, true, S::ProgramOnly, false},
    };
    std::sort(methods.begin(), methods.end(),
              [](const MethodDescriptor& a, const MethodDescriptor& b) { return a.id < b.id; });
    return methods;
}

const std::vector<MethodDescriptor>& catalog() {
    static const std::vector<MethodDescriptor> methods = build_catalog();
    return methods;
}

} // namespace

std::vector<MethodDescriptor> list_methods(const MethodFilter& filter) {
    std::vector<MethodDescriptor> out;
    for (const MethodDescriptor& m : catalog()) {
        if (filter.category && m.category != *filter.category) continue;
        if (filter.scope && *filter.scope == MethodScope::AnyUnit &&
            m.scope == MethodScope::ProgramOnly)
            continue;
        if (filter.output_form && *filter.output_form == SourceForm::Free &&
            m.fixed_output_only)
            continue;
        out.push_back(m);
    }
    return out;
}

std::optional<MethodDescriptor> find_method(std::string_view id) {
    for (const MethodDescriptor& m : catalog())
        if (m.id == id) return m;
    return std::nullopt;
}

std::vector<bool> exec_block_lines(const CobolUnit& unit) {
    std::vector<bool> marked(unit.lines.size(), false);
    bool inside = false;
    for (std::size_t i = 0; i < unit.lines.size(); ++i) {
        const CobolLine& line = unit.lines[i];
        if (line.cls != LineClass::Code && line.cls != LineClass::Continuation) {
            marked[i] = inside;
            continue;
        }
        // word scan outside literals; continuation contents are scanned raw
        std::string_view content = line.content();
        bool opened_here = false, closed_here = false;
        LiteralState state;
        std::size_t k = 0;
        while (k < content.size()) {
            if (state.inside) {
                state = scan_literal_state(content.substr(k, 1), state);
                ++k;
                continue;
            }
            char c = content[k];
            if (c == '\'' || c == '"') {
                state = scan_literal_state(content.substr(k, 1), state);
                ++k;
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '-') {
                std::size_t e = k;
                while (e < content.size() &&
                       (std::isalnum(static_cast<unsigned char>(content[e])) ||
                        content[e] == '-'))
                    ++e;
                std::string_view word = content.substr(k, e - k);
                if (equals_ci(word, "EXEC")) opened_here = true;
                if (equals_ci(word, "END-EXEC")) closed_here = true;
                k = e;
                continue;
            }
            ++k;
        }
        if (inside || opened_here) marked[i] = true;
        if (opened_here) inside = true;
        if (closed_here) inside = false;
    }
    return marked;
}

namespace detail {

void apply_edits(CobolUnit& unit, std::vector<SpliceEdit> edits) {
    std::sort(edits.begin(), edits.end(), [](const SpliceEdit& a, const SpliceEdit& b) {
        return a.line != b.line ? a.line < b.line : a.begin > b.begin;
    });
    // per line, apply right-to-left so earlier offsets stay valid
    for (const SpliceEdit& e : edits) {
        std::string raw = unit.lines[e.line].raw;
        assert(e.begin <= e.end && e.end <= raw.size());
        raw.replace(e.begin, e.end - e.begin, e.replacement);
        unit.lines[e.line] = classify_line(raw, unit.form);
    }
}

FreeView::FreeView(const CobolUnit& unit) : tokens(unit_tokens(unit)) {
    opaque = exec_ranges(tokens);
}

bool FreeView::is_opaque(std::size_t index) const { return in_ranges(opaque, index); }

} // namespace detail

namespace {

using detail::FreeView;
using detail::SpliceEdit;

// ---------------------------------------------------------------- end-block

struct EndBlockSite {
    std::size_t token_index;
    bool followed_by_period;
    std::size_t enclosing_scopes; // open scopes below the matched opener
};

std::vector<EndBlockSite> end_block_sites(const FreeView& view, std::string_view end_word) {
    std::vector<EndBlockSite> sites;
    const auto& tokens = view.tokens;

    // Sentence spans (period to period), needed to pre-scan which END words
    // actually occur so optional-scope verbs do not inflate the stack.
    std::size_t start = 0;
    while (start < tokens.size()) {
        std::size_t stop = start;
        while (stop < tokens.size() && tokens[stop].token.kind != TokenKind::Period) ++stop;
        const std::size_t sentence_end = std::min(stop + 1, tokens.size());

        std::set<std::string> closed_kws;
        for (std::size_t i = start; i < stop; ++i) {
            const Token& t = tokens[i].token;
            if (t.kind == TokenKind::Word && equals_ci(t.text.substr(0, 4), "END-"))
                closed_kws.insert(to_upper(t.text).substr(4));
        }

        std::vector<std::string> stack;
        for (std::size_t i = start; i < stop; ++i) {
            if (view.is_opaque(i)) continue;
            const Token& t = tokens[i].token;
            if (t.kind != TokenKind::Word) continue;
            std::string up = to_upper(t.text);
            if (up.rfind("END-", 0) == 0) {
                std::string kw = up.substr(4);
                // match the nearest opener of the same keyword
                auto it = std::find(stack.rbegin(), stack.rend(), kw);
                if (it == stack.rend()) continue; // unknown block: ineligible
                const std::size_t opener_pos =
                    stack.size() - 1 - static_cast<std::size_t>(it - stack.rbegin());
                if (equals_ci(up, end_word)) {
                    bool period_next = i + 1 < tokens.size() &&
                                       tokens[i + 1].token.kind == TokenKind::Period;
                    sites.push_back(EndBlockSite{i, period_next, opener_pos});
                }
                stack.erase(stack.begin() + static_cast<std::ptrdiff_t>(opener_pos),
                            stack.end());
                continue;
            }
            if (up == "IF" || up == "EVALUATE") {
                stack.push_back(up);
                continue;
            }
            if (up == "PERFORM") {
                // inline PERFORM heuristic: an inline block is eventually
                // closed by END-PERFORM within the sentence
                if (closed_kws.count("PERFORM")) stack.push_back(up);
                continue;
            }
            if (statement_verbs().count(up) && closed_kws.count(up))
                stack.push_back(up);
        }
        start = sentence_end;
    }
    return sites;
}

std::optional<CobolUnit> end_block_impl(const CobolUnit& unit, EndBlockKeyword keyword,
                                        EndBlockMode mode) {
    const char* word = keyword == EndBlockKeyword::If         ? "END-IF"
                       : keyword == EndBlockKeyword::Evaluate ? "END-EVALUATE"
                                                              : "END-PERFORM";
    FreeView view(unit);
    std::vector<SpliceEdit> edits;
    for (const EndBlockSite& site : end_block_sites(view, word)) {
        const UnitToken& ut = view.tokens[site.token_index];
        if (mode == EndBlockMode::ReplaceWithPeriod) {
            if (site.followed_by_period || site.enclosing_scopes > 0) continue;
            edits.push_back(SpliceEdit{ut.line, ut.token.begin, ut.token.end, "."});
        } else {
            if (!site.followed_by_period) continue;
            edits.push_back(SpliceEdit{ut.line, ut.token.begin, ut.token.end, ""});
        }
    }
    if (edits.empty()) return std::nullopt;
    CobolUnit out = unit;
    detail::apply_edits(out, std::move(edits));
    return out;
}

// ------------------------------------------------------------- whitespace

std::optional<CobolUnit> ws_collapse_single_impl(const CobolUnit& unit) {
    FreeView view(unit);
    std::vector<SpliceEdit> edits;
    for (std::size_t i = 0; i + 1 < view.tokens.size(); ++i) {
        const UnitToken& a = view.tokens[i];
        const UnitToken& b = view.tokens[i + 1];
        if (a.line != b.line) continue;
        if (view.is_opaque(i) || view.is_opaque(i + 1)) continue;
        if (b.token.begin - a.token.end >= 2)
            edits.push_back(SpliceEdit{a.line, a.token.end, b.token.begin, " "});
    }
    if (edits.empty()) return std::nullopt;
    CobolUnit out = unit;
    detail::apply_edits(out, std::move(edits));
    return out;
}

std::optional<CobolUnit> ws_expand_random_impl(const CobolUnit& unit, RngStream& rng,
                                               const ApplyContext& context) {
    FreeView view(unit);
    // running length delta per line so the fixed-form bound can be respected
    std::map<std::size_t, std::ptrdiff_t> line_delta;
    std::map<std::size_t, std::size_t> line_len;
    for (std::size_t li = 0; li < unit.lines.size(); ++li)
        line_len[li] = unit.lines[li].raw.size();

    bool any_gap = false;
    std::vector<SpliceEdit> edits;
    for (std::size_t i = 0; i + 1 < view.tokens.size(); ++i) {
        const UnitToken& a = view.tokens[i];
        const UnitToken& b = view.tokens[i + 1];
        if (a.line != b.line) continue;
        if (view.is_opaque(i) || view.is_opaque(i + 1)) continue;
        any_gap = true;
        if (!rng.coin()) continue;
        const std::size_t gap = b.token.begin - a.token.end;
        const std::size_t width = rng.in_range(2, 6);
        if (width == gap) continue;
        if (context.destination_form == SourceForm::Fixed) {
            const std::ptrdiff_t delta =
                static_cast<std::ptrdiff_t>(width) - static_cast<std::ptrdiff_t>(gap);
            const std::ptrdiff_t new_len =
                static_cast<std::ptrdiff_t>(line_len[a.line]) + line_delta[a.line] + delta;
            if (new_len > static_cast<std::ptrdiff_t>(kFixedContentMax)) continue;
            line_delta[a.line] += delta;
        }
        edits.push_back(SpliceEdit{a.line, a.token.end, b.token.begin,
                                   std::string(width, ' ')});
    }
    if (!any_gap) return std::nullopt;
    CobolUnit out = unit;
    detail::apply_edits(out, std::move(edits));
    return out;
}

std::optional<CobolUnit> ws_reindent_impl(const CobolUnit& unit, RngStream& rng) {
    const std::vector<bool> opaque = exec_block_lines(unit);
    bool any_target = false;
    CobolUnit out = unit;
    for (std::size_t i = 0; i < unit.lines.size(); ++i) {
        const CobolLine& line = unit.lines[i];
        if (line.cls != LineClass::Code || opaque[i]) continue;
        std::optional<std::size_t> indent = content_indent(line);
        if (!indent || !line.area) continue;

        const std::size_t cur = *indent;
        std::size_t lo, hi;
        if (*line.area == Area::A) {
            lo = 0; hi = 3;
        } else {
            lo = 4; hi = std::max<std::size_t>(12, cur);
        }
        std::string_view content = line.content();
        std::string_view body = content.substr(cur);
        // stay within the fixed-form line bound; lo always fits when the
        // current indent does, so the range never empties
        const std::size_t prefix = line.content_begin;
        while (hi > lo && unit.form == SourceForm::Fixed &&
               prefix + hi + body.size() > kFixedLineMax)
            --hi;
        if (hi == lo && cur == lo) continue;
        any_target = true;
        if (!rng.coin()) continue;
        std::size_t pick = rng.in_range(lo, hi);
        if (pick == cur) continue;
        std::string raw = line.raw.substr(0, prefix);
        raw += std::string(pick, ' ');
        raw += body;
        out.lines[i] = classify_line(raw, unit.form);
    }
    if (!any_target) return std::nullopt;
    return out;
}

std::optional<CobolUnit> ws_trailing_pad_impl(const CobolUnit& unit, RngStream& rng,
                                              const ApplyContext& context) {
    const std::vector<bool> opaque = exec_block_lines(unit);
    bool any_target = false;
    CobolUnit out = unit;
    for (std::size_t i = 0; i < unit.lines.size(); ++i) {
        const CobolLine& line = unit.lines[i];
        if (line.cls != LineClass::Code || opaque[i]) continue;
        // a line that ends inside a literal continues it; padding would grow
        // the literal itself
        if (scan_literal_state(line.content()).inside) continue;
        std::size_t limit;
        if (unit.form == SourceForm::Fixed)
            limit = kFixedLineMax;
        else if (context.destination_form == SourceForm::Fixed)
            limit = kFixedContentMax;
        else
            limit = line.raw.size() + 8;
        if (line.raw.size() >= limit) continue;
        any_target = true;
        if (!rng.coin()) continue;
        std::size_t pad = rng.in_range(1, 8);
        pad = std::min(pad, limit - line.raw.size());
        out.lines[i] = classify_line(line.raw + std::string(pad, ' '), unit.form);
    }
    if (!any_target) return std::nullopt;
    return out;
}

// ------------------------------------------------------------- distraction

std::optional<CobolUnit> insert_noise_then_impl(const CobolUnit& unit) {
    FreeView view(unit);
    std::vector<SpliceEdit> edits;
    for (std::size_t i = 0; i < view.tokens.size(); ++i) {
        if (view.is_opaque(i)) continue;
        const Token& t = view.tokens[i].token;
        if (t.kind != TokenKind::Word || !equals_ci(t.text, "IF")) continue;
        // the condition ends where the first statement verb begins
        std::size_t j = i + 1;
        bool has_then = false;
        std::size_t verb_at = view.tokens.size();
        for (; j < view.tokens.size(); ++j) {
            const Token& u = view.tokens[j].token;
            if (u.kind == TokenKind::Period) break;
            if (u.kind != TokenKind::Word) continue;
            std::string up = to_upper(u.text);
            if (up == "THEN") { has_then = true; break; }
            if (up == "ELSE") break;
            if (statement_verbs().count(up)) { verb_at = j; break; }
        }
        if (has_then || verb_at == view.tokens.size()) continue;
        const UnitToken& verb = view.tokens[verb_at];
        edits.push_back(SpliceEdit{verb.line, verb.token.begin, verb.token.begin, "THEN "});
    }
    if (edits.empty()) return std::nullopt;
    CobolUnit out = unit;
    detail::apply_edits(out, std::move(edits));
    return out;
}

// ------------------------------------------------------------- empty lines

std::vector<std::size_t> insertable_gaps(const CobolUnit& unit) {
    const std::vector<bool> opaque = exec_block_lines(unit);
    std::vector<std::size_t> gaps; // insert before line index
    for (std::size_t i = 1; i < unit.lines.size(); ++i) {
        if (unit.lines[i].cls == LineClass::Continuation) continue;
        if (opaque[i] && (i == 0 || opaque[i - 1])) continue;
        gaps.push_back(i);
    }
    return gaps;
}

CobolUnit insert_blanks_before(const CobolUnit& unit, const std::vector<std::size_t>& before) {
    CobolUnit out = unit;
    out.lines.clear();
    std::size_t next = 0;
    for (std::size_t i = 0; i < unit.lines.size(); ++i) {
        while (next < before.size() && before[next] == i) {
            out.lines.push_back(classify_line("", unit.form));
            ++next;
        }
        out.lines.push_back(unit.lines[i]);
    }
    return out;
}

std::optional<CobolUnit> empty_insert_random_impl(const CobolUnit& unit, RngStream& rng) {
    std::vector<std::size_t> gaps = insertable_gaps(unit);
    if (gaps.empty()) return std::nullopt;
    std::vector<std::size_t> chosen;
    for (std::size_t g : gaps)
        if (rng.coin()) chosen.push_back(g);
    return insert_blanks_before(unit, chosen);
}

std::optional<CobolUnit> empty_insert_every_line_impl(const CobolUnit& unit) {
    std::vector<std::size_t> gaps = insertable_gaps(unit);
    if (gaps.empty()) return std::nullopt;
    return insert_blanks_before(unit, gaps);
}

std::optional<CobolUnit> empty_remove_all_impl(const CobolUnit& unit) {
    const std::vector<bool> opaque = exec_block_lines(unit);
    bool found = false;
    CobolUnit out = unit;
    out.lines.clear();
    for (std::size_t i = 0; i < unit.lines.size(); ++i) {
        if (unit.lines[i].cls == LineClass::Blank && !opaque[i]) {
            found = true;
            continue;
        }
        out.lines.push_back(unit.lines[i]);
    }
    if (!found) return std::nullopt;
    return out;
}

// ---------------------------------------------------------------- comments

struct CommentShape {
    std::size_t content_from; // offset where editable content starts
};

std::optional<CommentShape> comment_shape(const CobolLine& line, SourceForm form) {
    if (line.cls != LineClass::Comment) return std::nullopt;
    if (form == SourceForm::Fixed) return CommentShape{7};
    std::size_t marker = line.raw.find("*>");
    return CommentShape{marker + 2};
}

std::optional<CobolUnit> comments_remove_all_impl(const CobolUnit& unit) {
    bool found = false;
    CobolUnit out = unit;
    out.lines.clear();
    for (const CobolLine& line : unit.lines) {
        if (line.cls == LineClass::Comment) {
            found = true;
            continue;
        }
        out.lines.push_back(line);
    }
    if (!found) return std::nullopt;
    return out;
}

std::optional<CobolUnit> comments_blank_content_impl(const CobolUnit& unit) {
    bool found = false;
    CobolUnit out = unit;
    for (std::size_t i = 0; i < unit.lines.size(); ++i) {
        auto shape = comment_shape(unit.lines[i], unit.form);
        if (!shape) continue;
        found = true;
        std::string raw = unit.lines[i].raw.substr(0, shape->content_from);
        out.lines[i] = classify_line(raw, unit.form);
    }
    if (!found) return std::nullopt;
    return out;
}

std::string random_words_of_length(std::size_t length, RngStream& rng) {
    std::string text;
    while (text.size() < length) {
        if (!text.empty()) text += ' ';
        std::size_t word_len = rng.in_range(2, 7);
        for (std::size_t i = 0; i < word_len && text.size() < length; ++i)
            text += static_cast<char>('a' + rng.below(26));
    }
    if (!text.empty() && text.back() == ' ')
        text.back() = static_cast<char>('a' + rng.below(26));
    return text;
}

std::optional<CobolUnit> comments_randomize_content_impl(const CobolUnit& unit,
                                                         RngStream& rng) {
    bool found = false;
    CobolUnit out = unit;
    for (std::size_t i = 0; i < unit.lines.size(); ++i) {
        auto shape = comment_shape(unit.lines[i], unit.form);
        if (!shape) continue;
        const std::string& raw = unit.lines[i].raw;
        if (raw.size() <= shape->content_from) continue; // nothing to rewrite
        found = true;
        std::string replaced = raw.substr(0, shape->content_from);
        replaced += random_words_of_length(raw.size() - shape->content_from, rng);
        out.lines[i] = classify_line(replaced, unit.form);
    }
    if (!found) return std::nullopt;
    return out;
}

// -------------------------------------------------------------------- case

enum class CaseTarget { Identifiers, Keywords };

std::optional<CobolUnit> change_case_impl(const CobolUnit& unit, CaseTarget target,
                                          bool to_upper_case, RngStream* per_occurrence) {
    FreeView view(unit);
    bool any_target = false;
    std::vector<SpliceEdit> edits;
    for (std::size_t i = 0; i < view.tokens.size(); ++i) {
        if (view.is_opaque(i)) continue;
        const UnitToken& ut = view.tokens[i];
        if (ut.token.kind != TokenKind::Word) continue;
        const bool reserved = is_reserved_word(ut.token.text);
        if ((target == CaseTarget::Identifiers) == reserved) continue;
        any_target = true;
        bool upper = per_occurrence ? per_occurrence->coin() : to_upper_case;
        std::string folded = upper ? to_upper(ut.token.text) : to_lower(ut.token.text);
        if (folded == ut.token.text) continue;
        edits.push_back(SpliceEdit{ut.line, ut.token.begin, ut.token.end, folded});
    }
    if (!any_target) return std::nullopt;
    CobolUnit out = unit;
    detail::apply_edits(out, std::move(edits));
    return out;
}

} // namespace

PerturbOutcome end_block_edit(const CobolUnit& unit, EndBlockKeyword keyword,
                              EndBlockMode mode, RngStream& rng) {
    (void)rng; // the edit is deterministic; the stream is part of the method ABI
    PerturbOutcome outcome;
    outcome.tries_used = 1;
    std::optional<CobolUnit> result = end_block_impl(unit, keyword, mode);
    if (result && !(*result == unit)) {
        outcome.changed = true;
        outcome.output = std::move(*result);
    } else {
        outcome.output = unit;
    }
    return outcome;
}

namespace detail {

std::optional<MethodResult> run_method_once(const MethodDescriptor& method,
                                            const CobolUnit& unit, RngStream& rng,
                                            const ApplyContext& context) {
    const std::string& id = method.id;
    std::optional<CobolUnit> unit_result;

    if (id == "end_if_to_period")
        unit_result = end_block_impl(unit, EndBlockKeyword::If, EndBlockMode::ReplaceWithPeriod);
    else if (id == "end_if_drop_keep_period")
        unit_result = end_block_impl(unit, EndBlockKeyword::If, EndBlockMode::RemoveKeepPeriod);
    else if (id == "end_evaluate_to_period")
        unit_result = end_block_impl(unit, EndBlockKeyword::Evaluate, EndBlockMode::ReplaceWithPeriod);
    else if (id == "end_evaluate_drop_keep_period")
        unit_result = end_block_impl(unit, EndBlockKeyword::Evaluate, EndBlockMode::RemoveKeepPeriod);
    else if (id == "end_perform_to_period")
        unit_result = end_block_impl(unit, EndBlockKeyword::Perform, EndBlockMode::ReplaceWithPeriod);
    else if (id == "end_perform_drop_keep_period")
        unit_result = end_block_impl(unit, EndBlockKeyword::Perform, EndBlockMode::RemoveKeepPeriod);
    else if (id == "ws_collapse_single")
        unit_result = ws_collapse_single_impl(unit);
    else if (id == "ws_expand_random")
        unit_result = ws_expand_random_impl(unit, rng, context);
    else if (id == "ws_reindent_within_area")
        unit_result = ws_reindent_impl(unit, rng);
    else if (id == "ws_trailing_pad")
        unit_result = ws_trailing_pad_impl(unit, rng, context);
    else if (id == "lb_join_sentence_lines")
        unit_result = lb_join_sentence_lines_impl(unit, rng, context);
    else if (id == "lb_split_token_boundary")
        unit_result = lb_split_token_boundary_impl(unit, rng, context);
    else if (id == "period_newline_end_of_sent")
        unit_result = period_newline_impl(unit);
    else if (id == "split_literal_continuation")
        unit_result = split_literal_continuation_impl(unit, rng);
    else if (id == "random_line_continuation_split")
        unit_result = random_line_continuation_split_impl(unit, rng);
    else if (id == "insert_noise_then")
        unit_result = insert_noise_then_impl(unit);
    else if (id == "empty_insert_random")
        unit_result = empty_insert_random_impl(unit, rng);
    else if (id == "empty_insert_every_line")
        unit_result = empty_insert_every_line_impl(unit);
    else if (id == "empty_remove_all")
        unit_result = empty_remove_all_impl(unit);
    else if (id == "comments_remove_all")
        unit_result = comments_remove_all_impl(unit);
    else if (id == "comments_blank_content")
        unit_result = comments_blank_content_impl(unit);
    else if (id == "comments_randomize_content")
        unit_result = comments_randomize_content_impl(unit, rng);
    else if (id == "identifiers_lowercase")
        unit_result = change_case_impl(unit, CaseTarget::Identifiers, false, nullptr);
    else if (id == "identifiers_uppercase")
        unit_result = change_case_impl(unit, CaseTarget::Identifiers, true, nullptr);
    else if (id == "identifiers_random_case")
        unit_result = change_case_impl(unit, CaseTarget::Identifiers, false, &rng);
    else if (id == "keywords_lowercase")
        unit_result = change_case_impl(unit, CaseTarget::Keywords, false, nullptr);
    else if (id.rfind("rename_", 0) == 0)
        return rename_once(id, unit, rng);
    else
        fail(ErrorCode::InvalidRequest, "unknown method id " + id);

    if (!unit_result) return std::nullopt;
    return MethodResult{std::move(*unit_result), std::nullopt};
}

} // namespace detail

PerturbOutcome apply_method(const MethodDescriptor& method, const CobolUnit& unit,
                            RngStream& rng, const ApplyContext& context) {
    if (method.scope == MethodScope::ProgramOnly && unit.kind != UnitKind::Program)
        fail(ErrorCode::ScopeViolation, method.id + " applies to whole programs only");
    if (method.requires_free_parse && unit.form != SourceForm::Free)
        fail(ErrorCode::FormViolation, method.id + " requires a free-form unit");

    PerturbOutcome outcome;
    outcome.output = unit;
    const int tries = method.determinism == Determinism::Deterministic ? 1 : kMaxTries;
    for (int attempt = 1; attempt <= tries; ++attempt) {
        outcome.tries_used = attempt;
        std::optional<detail::MethodResult> result =
            detail::run_method_once(method, unit, rng, context);
        if (!result) break; // no target features: no retry can help
        if (!(result->unit == unit)) {
            outcome.changed = true;
            outcome.output = std::move(result->unit);
            if (method.is_renaming()) outcome.rename_map = std::move(result->rename_map);
            break;
        }
    }
    return outcome;
}

} // namespace perturbol
