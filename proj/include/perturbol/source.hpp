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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "perturbol/error.hpp"

namespace perturbol {

enum class SourceForm { Fixed, Free };

enum class LineClass { Code, Comment, Blank, Continuation, Directive };

enum class Area { A, B };

enum class UnitKind { Program, Paragraph, Section };

const char* to_string(SourceForm form);
const char* to_string(LineClass cls);
const char* to_string(Area area);

/// One physical source line. `raw` is preserved verbatim; classification and
/// the content span derive from it. Fixed form: content is columns 8-72
/// (0-based offsets 7..72); free form: the whole line.
struct CobolLine {
    std::string raw;
    LineClass cls = LineClass::Blank;
    std::optional<Area> area;     // Code lines with visible content only
    std::size_t content_begin = 0;
    std::size_t content_end = 0;

    std::string_view content() const {
        return std::string_view(raw).substr(content_begin, content_end - content_begin);
    }

    bool operator==(const CobolLine& other) const { return raw == other.raw; }
};

/// A program, paragraph, or section as an ordered list of classified lines.
struct CobolUnit {
    std::vector<CobolLine> lines;
    SourceForm form = SourceForm::Fixed;
    UnitKind kind = UnitKind::Program;
    bool trailing_newline = true;

    bool operator==(const CobolUnit& other) const {
        return form == other.form && lines == other.lines;
    }
};

inline constexpr std::size_t kFixedLineMax = 72;
inline constexpr std::size_t kFixedContentStart = 7;   // column 8, 0-based
inline constexpr std::size_t kFixedContentMax = kFixedLineMax - kFixedContentStart; // 65
inline constexpr std::size_t kContinuationContentStart = 11; // column 12, 0-based
inline constexpr std::size_t kContinuationContentMax = kFixedLineMax - kContinuationContentStart; // 61

/// Classify one physical line. Total over all fixed lines of length <= 72 and
/// all free lines; throws FixedLineTooLong beyond that.
CobolLine classify_line(std::string_view raw, SourceForm form);

/// Area of a code line: offsets 0-3 from the content start are Area A
/// (columns 8-11 in fixed form, i.e. 7-10 leading spaces), >= 4 are Area B.
Area detect_area(const CobolLine& line);

/// Leading-space count within the content span; nullopt when the content is
/// all spaces.
std::optional<std::size_t> content_indent(const CobolLine& line);

CobolUnit unit_from_text(std::string_view text, SourceForm form,
                         UnitKind kind = UnitKind::Program);

/// Joins raws with newlines; reproduces the original text byte-for-byte.
std::string unit_text(const CobolUnit& unit);

CobolUnit load_unit(const std::string& path, SourceForm form,
                    UnitKind kind = UnitKind::Program);
void save_unit(const CobolUnit& unit, const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

/// Convenience heuristic only: column-7 indicators plus a 72-char bound
/// suggest fixed form. The callers of record always declare the form.
SourceForm detect_form(std::string_view text);

/// Quote-scanner state used when deciding whether a line ends inside a
/// nonnumeric literal (and with which quote character).
struct LiteralState {
    bool inside = false;
    char quote = '\0';
};

/// Advances `state` across `text`, honoring doubled-quote escapes and
/// stopping literal detection at a free-form inline comment marker.
LiteralState scan_literal_state(std::string_view text, LiteralState state = {});

} // namespace perturbol
