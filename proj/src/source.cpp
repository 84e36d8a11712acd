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

#include "perturbol/source.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace perturbol {

const char* to_string(SourceForm form) {
    return form == SourceForm::Fixed ? "fixed" : "free";
}

const char* to_string(LineClass cls) {
    switch (cls) {
    case LineClass::Code: return "code";
    case LineClass::Comment: return "comment";
    case LineClass::Blank: return "blank";
    case LineClass::Continuation: return "continuation";
    case LineClass::Directive: return "directive";
    }
    return "?";
}

const char* to_string(Area area) { return area == Area::A ? "A" : "B"; }

namespace {

bool all_spaces(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c == ' '; });
}

std::string_view lstripped(std::string_view s) {
    std::size_t i = s.find_first_not_of(' ');
    return i == std::string_view::npos ? std::string_view{} : s.substr(i);
}

std::optional<Area> area_of_span(std::string_view content) {
    std::size_t i = content.find_first_not_of(' ');
    if (i == std::string_view::npos) return std::nullopt;
    return i <= 3 ? Area::A : Area::B;
}

} // namespace

CobolLine classify_line(std::string_view raw, SourceForm form) {
    if (raw.find('\n') != std::string_view::npos)
        fail(ErrorCode::BadInput, "line contains a newline");

    CobolLine line;
    line.raw.assign(raw);

    if (form == SourceForm::Fixed) {
        if (raw.size() > kFixedLineMax)
            fail(ErrorCode::FixedLineTooLong,
                 "fixed-form line has " + std::to_string(raw.size()) + " characters");
        line.content_begin = std::min(raw.size(), kFixedContentStart);
        line.content_end = raw.size();
        const char indicator = raw.size() > 6 ? raw[6] : ' ';
        std::string_view content = line.content();
        switch (indicator) {
        case '*':
        case '/':
            line.cls = LineClass::Comment;
            return line;
        case '-':
            line.cls = LineClass::Continuation;
            return line;
        case '$':
            line.cls = LineClass::Directive;
            return line;
        case 'D':
        case 'd':
            line.cls = LineClass::Code; // debug line, treated as code
            break;
        default:
            if (all_spaces(content)) {
                line.cls = LineClass::Blank;
                return line;
            }
            if (lstripped(content).substr(0, 2) == ">>") {
                line.cls = LineClass::Directive;
                return line;
            }
            line.cls = LineClass::Code;
            break;
        }
        line.area = area_of_span(content);
        return line;
    }

    line.content_begin = 0;
    line.content_end = raw.size();
    std::string_view stripped = lstripped(raw);
    if (stripped.empty()) {
        line.cls = LineClass::Blank;
        return line;
    }
    if (stripped.substr(0, 2) == "*>") {
        line.cls = LineClass::Comment;
        return line;
    }
    if (stripped.substr(0, 2) == ">>") {
        line.cls = LineClass::Directive;
        return line;
    }
    line.cls = LineClass::Code;
    line.area = area_of_span(raw);
    return line;
}

Area detect_area(const CobolLine& line) {
    if (line.cls != LineClass::Code || !line.area)
        fail(ErrorCode::NotCodeLine, "area is defined for code lines only");
    return *line.area;
}

std::optional<std::size_t> content_indent(const CobolLine& line) {
    std::string_view content = line.content();
    std::size_t i = content.find_first_not_of(' ');
    if (i == std::string_view::npos) return std::nullopt;
    return i;
}

CobolUnit unit_from_text(std::string_view text, SourceForm form, UnitKind kind) {
    CobolUnit unit;
    unit.form = form;
    unit.kind = kind;
    unit.trailing_newline = !text.empty() && text.back() == '\n';
    std::size_t pos = 0;
    std::string_view body = unit.trailing_newline ? text.substr(0, text.size() - 1) : text;
    if (!body.empty() || !text.empty()) {
        while (true) {
            std::size_t nl = body.find('\n', pos);
            std::string_view raw =
                nl == std::string_view::npos ? body.substr(pos) : body.substr(pos, nl - pos);
            unit.lines.push_back(classify_line(raw, form));
            if (nl == std::string_view::npos) break;
            pos = nl + 1;
        }
    }
    if (text.empty()) unit.lines.clear();
    return unit;
}

std::string unit_text(const CobolUnit& unit) {
    std::string out;
    for (std::size_t i = 0; i < unit.lines.size(); ++i) {
        out += unit.lines[i].raw;
        if (i + 1 < unit.lines.size()) out += '\n';
    }
    if (unit.trailing_newline && !unit.lines.empty()) out += '\n';
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::IoError, "cannot write " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

CobolUnit load_unit(const std::string& path, SourceForm form, UnitKind kind) {
    return unit_from_text(read_file(path), form, kind);
}

void save_unit(const CobolUnit& unit, const std::string& path) {
    write_file(path, unit_text(unit));
}

SourceForm detect_form(std::string_view text) {
    bool within_72 = true;
    bool col7_indicator = false;
    bool free_comment = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view raw =
            nl == std::string_view::npos ? text.substr(pos) : text.substr(pos, nl - pos);
        if (raw.size() > kFixedLineMax) within_72 = false;
        if (raw.size() > 6 && (raw[6] == '*' || raw[6] == '-' || raw[6] == '/'))
            col7_indicator = true;
        std::string_view stripped = lstripped(raw);
        if (stripped.substr(0, 2) == "*>") free_comment = true;
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    if (free_comment || !within_72) return SourceForm::Free;
    if (col7_indicator) return SourceForm::Fixed;
    return within_72 ? SourceForm::Fixed : SourceForm::Free;
}

LiteralState scan_literal_state(std::string_view text, LiteralState state) {
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (state.inside) {
            if (c == state.quote) {
                if (i + 1 < text.size() && text[i + 1] == state.quote) {
                    i += 2; // doubled quote stays inside
                    continue;
                }
                state.inside = false;
                state.quote = '\0';
            }
            ++i;
            continue;
        }
        if (c == '\'' || c == '"') {
            state.inside = true;
            state.quote = c;
            ++i;
            continue;
        }
        if (c == '*' && i + 1 < text.size() && text[i + 1] == '>')
            break; // inline comment: quotes after it are not literals
        ++i;
    }
    return state;
}

} // namespace perturbol
