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

#include "perturbol/structure.hpp"

#include <algorithm>

#include "perturbol/convert.hpp"

namespace perturbol {

const char* to_string(IdentifierOrigin origin) {
    switch (origin) {
    case IdentifierOrigin::DataDivision: return "data-division";
    case IdentifierOrigin::SpecialRegister: return "special-register";
    case IdentifierOrigin::CopybookFixed: return "copybook-fixed";
    case IdentifierOrigin::Filler: return "filler";
    }
    return "?";
}

const std::set<std::string>& reserved_words() {
    static const std::set<std::string> words = {
        "ACCEPT", "ACCESS", "ADD", "ADDRESS", "ADVANCING", "AFTER", "ALL", "ALPHABET",
        "ALPHABETIC", "ALPHANUMERIC", "ALSO", "ALTER", "ALTERNATE", "AND", "ANY", "ARE",
        "AREA", "AREAS", "ASCENDING", "ASSIGN", "AT", "AUTHOR", "BEFORE", "BINARY",
        "BLANK", "BLOCK", "BOTTOM", "BY", "CALL", "CANCEL", "CHARACTER", "CHARACTERS",
        "CLASS", "CLOSE", "COBOL", "CODE", "CODE-SET", "COLLATING", "COLUMN", "COMMA",
        "COMMON", "COMP", "COMP-1", "COMP-2", "COMP-3", "COMP-4", "COMP-5",
        "COMPUTATIONAL", "COMPUTE", "CONFIGURATION", "CONTAINS", "CONTENT", "CONTINUE",
        "CONTROL", "CONVERTING", "COPY", "CORR", "CORRESPONDING", "COUNT", "CURRENCY",
        "DATA", "DATE", "DATE-COMPILED", "DATE-WRITTEN", "DAY", "DAY-OF-WEEK", "DE",
        "DECIMAL-POINT", "DECLARATIVES", "DELETE", "DELIMITED", "DELIMITER", "DEPENDING",
        "DESCENDING", "DISPLAY", "DIVIDE", "DIVISION", "DOWN", "DUPLICATES", "DYNAMIC",
        "ELSE", "END", "END-ADD", "END-CALL", "END-COMPUTE", "END-DELETE", "END-DIVIDE",
        "END-EVALUATE", "END-EXEC", "END-IF", "END-MULTIPLY", "END-OF-PAGE",
        "END-PERFORM", "END-READ", "END-RETURN", "END-REWRITE", "END-SEARCH",
        "END-START", "END-STRING", "END-SUBTRACT", "END-UNSTRING", "END-WRITE",
        "ENTRY", "ENVIRONMENT", "EQUAL", "ERROR", "EVALUATE", "EVERY", "EXCEPTION",
        "EXEC", "EXECUTE", "EXIT", "EXTEND", "EXTERNAL", "FALSE", "FD", "FILE",
        "FILE-CONTROL", "FILLER", "FIRST", "FOOTING", "FOR", "FROM", "FUNCTION",
        "GENERATE", "GIVING", "GLOBAL", "GO", "GOBACK", "GREATER", "HIGH-VALUE",
        "HIGH-VALUES", "I-O", "I-O-CONTROL", "ID", "IDENTIFICATION", "IF", "IN",
        "INDEX", "INDEXED", "INITIAL", "INITIALIZE", "INPUT", "INPUT-OUTPUT",
        "INSPECT", "INSTALLATION", "INTO", "INVALID", "INVOKE", "IS", "JUST",
        "JUSTIFIED", "KEY", "LABEL", "LEADING", "LEFT", "LENGTH", "LESS", "LINAGE",
        "LINE", "LINES", "LINKAGE", "LOCK", "LOW-VALUE", "LOW-VALUES", "MEMORY",
        "MERGE", "MODE", "MOVE", "MULTIPLE", "MULTIPLY", "NATIVE", "NEGATIVE", "NEXT",
        "NO", "NOT", "NUMERIC", "OBJECT-COMPUTER", "OCCURS", "OF", "OFF", "OMITTED",
        "ON", "OPEN", "OPTIONAL", "OR", "ORDER", "ORGANIZATION", "OTHER", "OUTPUT",
        "OVERFLOW", "PACKED-DECIMAL", "PADDING", "PAGE", "PERFORM", "PIC", "PICTURE",
        "POINTER", "POSITION", "POSITIVE", "PROCEDURE", "PROCEDURES", "PROCEED",
        "PROGRAM", "PROGRAM-ID", "QUOTE", "QUOTES", "RANDOM", "READ", "RECORD",
        "RECORDS", "REDEFINES", "REEL", "REFERENCE", "RELATIVE", "RELEASE",
        "REMAINDER", "REMOVAL", "RENAMES", "REPLACE", "REPLACING", "RERUN", "RESERVE",
        "RESET", "RETURN", "RETURNING", "REVERSED", "REWIND", "REWRITE", "RIGHT",
        "ROUNDED", "RUN", "SAME", "SD", "SEARCH", "SECTION", "SECURITY", "SEGMENT",
        "SEGMENT-LIMIT", "SELECT", "SENTENCE", "SEPARATE", "SEQUENCE", "SEQUENTIAL",
        "SET", "SIGN", "SIZE", "SORT", "SORT-MERGE", "SOURCE", "SOURCE-COMPUTER",
        "SPACE", "SPACES", "SPECIAL-NAMES", "STANDARD", "STANDARD-1", "STANDARD-2",
        "START", "STATUS", "STOP", "STRING", "SUBTRACT", "SUPPRESS", "SYMBOLIC",
        "SYNC", "SYNCHRONIZED", "TABLE", "TALLYING", "TAPE", "TEST", "THAN", "THEN",
        "THROUGH", "THRU", "TIME", "TIMES", "TO", "TOP", "TRAILING", "TRUE", "TYPE",
        "UNIT", "UNSTRING", "UNTIL", "UP", "UPON", "USAGE", "USE", "USING", "VALUE",
        "VALUES", "VARYING", "WHEN", "WITH", "WORDS", "WORKING-STORAGE", "WRITE",
        "ZERO", "ZEROES", "ZEROS",
    };
    return words;
}

const std::set<std::string>& special_registers() {
    static const std::set<std::string> registers = {
        "RETURN-CODE", "SORT-CORE-SIZE", "SORT-CONTROL", "SORT-FILE-SIZE", "SORT-MESSAGE",
        "SORT-MODE-SIZE", "SORT-RETURN", "TALLY", "WHEN-COMPILED", "DEBUG-ITEM",
        "DEBUG-LINE", "DEBUG-NAME", "DEBUG-CONTENTS", "LINAGE-COUNTER", "SHIFT-OUT",
        "SHIFT-IN", "JNIENVPTR", "XML-CODE", "XML-EVENT", "XML-NTEXT", "XML-TEXT",
        "JSON-CODE", "JSON-STATUS",
    };
    return registers;
}

const std::set<std::string>& statement_verbs() {
    static const std::set<std::string> verbs = {
        "ACCEPT", "ADD", "ALTER", "CALL", "CANCEL", "CLOSE", "COMPUTE", "CONTINUE",
        "DELETE", "DISPLAY", "DIVIDE", "EVALUATE", "EXEC", "EXIT", "GO", "GOBACK",
        "IF", "INITIALIZE", "INSPECT", "INVOKE", "MERGE", "MOVE", "MULTIPLY", "NEXT",
        "OPEN", "PERFORM", "READ", "RELEASE", "RETURN", "REWRITE", "SEARCH", "SET",
        "SORT", "START", "STOP", "STRING", "SUBTRACT", "UNSTRING", "WRITE",
    };
    return verbs;
}

bool is_reserved_word(std::string_view word) {
    return reserved_words().count(to_upper(word)) > 0;
}

namespace {

struct LineTokens {
    std::vector<Token> tokens;
};

// Tokens per line; self-contained lines only (fixed-form continuation blocks
// are not statement headers, so skipping them is safe here).
std::vector<LineTokens> header_tokens(const CobolUnit& unit) {
    std::vector<LineTokens> out(unit.lines.size());
    LiteralState state;
    for (std::size_t i = 0; i < unit.lines.size(); ++i) {
        const CobolLine& line = unit.lines[i];
        if (line.cls != LineClass::Code) continue;
        if (unit.form == SourceForm::Fixed) {
            bool continued = i + 1 < unit.lines.size() &&
                             unit.lines[i + 1].cls == LineClass::Continuation;
            if (continued) continue;
        }
        std::string_view content = line.content();
        state = scan_literal_state(content, LiteralState{});
        if (state.inside) continue; // line ends mid-literal; not a header
        out[i].tokens = tokenize(content);
    }
    return out;
}

bool is_area_a(const CobolLine& line) {
    return line.area && *line.area == Area::A;
}

struct HeaderScan {
    std::optional<std::string> division;
    std::optional<std::string> section;
    std::optional<std::string> paragraph;
};

HeaderScan scan_header(const CobolLine& line, const std::vector<Token>& tokens) {
    HeaderScan scan;
    if (!is_area_a(line) || tokens.empty()) return scan;
    if (tokens[0].kind != TokenKind::Word) return scan;
    if (tokens.size() >= 3 && tokens[1].kind == TokenKind::Word &&
        equals_ci(tokens[1].text, "DIVISION")) {
        scan.division = to_upper(tokens[0].text);
        return scan;
    }
    if (tokens.size() >= 3 && tokens[1].kind == TokenKind::Word &&
        equals_ci(tokens[1].text, "SECTION") && tokens[2].kind == TokenKind::Period) {
        scan.section = tokens[0].text;
        return scan;
    }
    if (tokens.size() >= 2 && tokens[1].kind == TokenKind::Period &&
        !is_reserved_word(tokens[0].text)) {
        scan.paragraph = tokens[0].text;
        return scan;
    }
    return scan;
}

} // namespace

const DivisionInfo* ProgramStructure::find_division(std::string_view name) const {
    for (const DivisionInfo& d : divisions)
        if (equals_ci(d.name, name)) return &d;
    return nullptr;
}

std::vector<ParagraphInfo> ProgramStructure::procedure_paragraphs() const {
    std::vector<ParagraphInfo> out;
    const DivisionInfo* proc = find_division("PROCEDURE");
    if (!proc) return out;
    for (const SectionInfo& s : proc->sections)
        out.insert(out.end(), s.paragraphs.begin(), s.paragraphs.end());
    return out;
}

ProgramStructure extract_structure(const CobolUnit& unit) {
    if (unit.kind != UnitKind::Program)
        fail(ErrorCode::BadInput, "extract_structure expects a program unit");

    ProgramStructure st;
    const std::vector<LineTokens> per_line = header_tokens(unit);

    auto close_paragraph = [&](std::size_t end) {
        if (st.divisions.empty()) return;
        auto& sections = st.divisions.back().sections;
        if (sections.empty() || sections.back().paragraphs.empty()) return;
        auto& p = sections.back().paragraphs.back();
        if (p.range.end == 0) p.range.end = end;
    };
    auto close_section = [&](std::size_t end) {
        close_paragraph(end);
        if (st.divisions.empty()) return;
        auto& sections = st.divisions.back().sections;
        if (!sections.empty() && sections.back().range.end == 0)
            sections.back().range.end = end;
    };
    auto close_division = [&](std::size_t end) {
        close_section(end);
        if (!st.divisions.empty() && st.divisions.back().range.end == 0)
            st.divisions.back().range.end = end;
    };

    for (std::size_t i = 0; i < unit.lines.size(); ++i) {
        const CobolLine& line = unit.lines[i];
        if (line.cls != LineClass::Code) continue;
        HeaderScan scan = scan_header(line, per_line[i].tokens);
        if (scan.division) {
            close_division(i);
            st.divisions.push_back(DivisionInfo{*scan.division, LineRange{i, 0}, {}});
            st.divisions.back().sections.push_back(SectionInfo{"", LineRange{i, 0}, {}});
            continue;
        }
        if (st.divisions.empty()) continue; // preamble before any division
        if (scan.section) {
            close_section(i);
            st.divisions.back().sections.push_back(SectionInfo{*scan.section, LineRange{i, 0}, {}});
            continue;
        }
        const bool in_procedure = equals_ci(st.divisions.back().name, "PROCEDURE");
        if (in_procedure && scan.paragraph) {
            close_paragraph(i);
            st.divisions.back().sections.back().paragraphs.push_back(
                ParagraphInfo{*scan.paragraph, LineRange{i, 0}});
        }
    }
    close_division(unit.lines.size());

    if (!st.find_division("PROCEDURE"))
        fail(ErrorCode::NoProcedureDivision, "no PROCEDURE DIVISION header");
    return st;
}

LineRange paragraph_range(const CobolUnit& program, std::string_view name) {
    ProgramStructure st = extract_structure(program);
    for (const ParagraphInfo& p : st.procedure_paragraphs())
        if (equals_ci(p.name, name)) return p.range;
    fail(ErrorCode::UnknownParagraph, std::string(name));
}

CobolUnit extract_paragraph(const CobolUnit& program, std::string_view name) {
    LineRange range = paragraph_range(program, name);
    CobolUnit out;
    out.form = program.form;
    out.kind = UnitKind::Paragraph;
    out.trailing_newline = true;
    out.lines.assign(program.lines.begin() + static_cast<std::ptrdiff_t>(range.begin),
                     program.lines.begin() + static_cast<std::ptrdiff_t>(range.end));
    return out;
}

namespace {

bool is_level_number(const Token& t) {
    if (t.kind != TokenKind::NumericLiteral) return false;
    if (t.text.size() > 2) return false;
    int v = 0;
    for (char c : t.text) v = v * 10 + (c - '0');
    return (v >= 1 && v <= 49) || v == 66 || v == 77 || v == 88;
}

} // namespace

std::vector<IdentifierEntry> extract_data_identifiers(const CobolUnit& program,
                                                      const IdentifierOptions& options) {
    // Work over the free view so token spans line up with editable lines.
    const CobolUnit* unit = &program;
    CobolUnit free_unit;
    if (program.form == SourceForm::Fixed) {
        free_unit = fixed_to_free(program).first;
        unit = &free_unit;
    }

    std::set<std::string> special = special_registers();
    for (const std::string& name : options.extra_special_registers)
        special.insert(to_upper(name));

    // Locate the data and procedure divisions leniently; a missing procedure
    // division is fine here (empty identifier list is a valid answer).
    std::optional<LineRange> data_range;
    {
        CobolUnit probe = *unit;
        probe.kind = UnitKind::Program;
        try {
            ProgramStructure st = extract_structure(probe);
            if (const DivisionInfo* d = st.find_division("DATA")) data_range = d->range;
        } catch (const Error&) {
            // fall through: scan the whole unit for declarations
        }
    }

    std::vector<UnitToken> tokens = unit_tokens(*unit);
    const auto opaque = exec_ranges(tokens);

    auto in_data_division = [&](std::size_t line) {
        return !data_range || (line >= data_range->begin && line < data_range->end);
    };

    std::vector<IdentifierEntry> entries;
    std::map<std::string, std::size_t> index; // uppercase name -> entry

    auto entry_for = [&](std::string_view name, IdentifierOrigin origin) -> IdentifierEntry& {
        std::string key = to_upper(name);
        auto it = index.find(key);
        if (it != index.end()) return entries[it->second];
        index.emplace(key, entries.size());
        entries.push_back(IdentifierEntry{std::string(name), origin, {}});
        return entries.back();
    };

    // Pass 1: declarations.
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (in_ranges(opaque, i)) continue;
        const UnitToken& ut = tokens[i];
        if (ut.token.kind == TokenKind::Word && equals_ci(ut.token.text, "COPY")) {
            if (i + 1 < tokens.size() && tokens[i + 1].token.kind == TokenKind::Word)
                entry_for(tokens[i + 1].token.text, IdentifierOrigin::CopybookFixed);
            continue;
        }
        if (!in_data_division(ut.line)) continue;
        if (!is_level_number(ut.token)) continue;
        // level number must start the line's statement
        bool line_start = (i == 0) || (tokens[i - 1].line != ut.line);
        if (!line_start) continue;
        if (i + 1 >= tokens.size()) continue;
        const UnitToken& next = tokens[i + 1];
        if (next.token.kind != TokenKind::Word) continue; // unnamed entry
        if (equals_ci(next.token.text, "FILLER")) {
            IdentifierEntry& e = entry_for("FILLER", IdentifierOrigin::Filler);
            e.occurrences.push_back(Occurrence{next.line, next.token.begin, next.token.end});
            continue;
        }
        if (is_reserved_word(next.token.text)) continue;
        std::string key = to_upper(next.token.text);
        if (special.count(key)) continue; // cannot redeclare a register; skip
        entry_for(next.token.text, IdentifierOrigin::DataDivision);
    }

    // Pass 2: occurrences of declared names, plus special-register uses.
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (in_ranges(opaque, i)) continue;
        const UnitToken& ut = tokens[i];
        if (ut.token.kind != TokenKind::Word) continue;
        std::string key = to_upper(ut.token.text);
        if (special.count(key)) {
            IdentifierEntry& e = entry_for(key, IdentifierOrigin::SpecialRegister);
            e.occurrences.push_back(Occurrence{ut.line, ut.token.begin, ut.token.end});
            continue;
        }
        auto it = index.find(key);
        if (it == index.end()) continue;
        IdentifierEntry& e = entries[it->second];
        if (e.origin == IdentifierOrigin::Filler) continue; // declarations only
        e.occurrences.push_back(Occurrence{ut.line, ut.token.begin, ut.token.end});
    }

    return entries;
}

} // namespace perturbol
