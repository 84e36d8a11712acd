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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "perturbol/lexer.hpp"
#include "perturbol/source.hpp"

namespace perturbol {

/// Half-open line range [begin, end) into a unit.
struct LineRange {
    std::size_t begin = 0;
    std::size_t end = 0;
};

struct ParagraphInfo {
    std::string name; // as written; lookups are case-insensitive
    LineRange range;
};

struct SectionInfo {
    std::string name; // empty for lines outside any section
    LineRange range;
    std::vector<ParagraphInfo> paragraphs;
};

struct DivisionInfo {
    std::string name; // IDENTIFICATION, ENVIRONMENT, DATA, PROCEDURE, ...
    LineRange range;
    std::vector<SectionInfo> sections;
};

struct ProgramStructure {
    std::vector<DivisionInfo> divisions;

    const DivisionInfo* find_division(std::string_view name) const;
    /// Procedure-division paragraphs, flattened in source order.
    std::vector<ParagraphInfo> procedure_paragraphs() const;
};

/// Division / section / paragraph layout of a program. Throws
/// NoProcedureDivision when the program lacks a procedure division header.
ProgramStructure extract_structure(const CobolUnit& unit);

/// The contiguous lines of one procedure-division paragraph, header included.
/// Name lookup is case-insensitive. Throws UnknownParagraph.
CobolUnit extract_paragraph(const CobolUnit& program, std::string_view name);
LineRange paragraph_range(const CobolUnit& program, std::string_view name);

enum class IdentifierOrigin { DataDivision, SpecialRegister, CopybookFixed, Filler };

const char* to_string(IdentifierOrigin origin);

/// One word occurrence: a line index plus the span within that line's raw text.
struct Occurrence {
    std::size_t line = 0;
    std::size_t begin = 0;
    std::size_t end = 0;
};

struct IdentifierEntry {
    std::string name; // declared spelling
    IdentifierOrigin origin = IdentifierOrigin::DataDivision;
    std::vector<Occurrence> occurrences;
};

struct IdentifierOptions {
    /// Extra names treated as special registers (case-insensitive), on top of
    /// the built-in catalog.
    std::vector<std::string> extra_special_registers;
};

/// Data-division identifier inventory: declared data names (levels 01-49, 66,
/// 77, 88), FILLER entries, COPY operands, and any special registers in use.
/// Occurrences cover data- and procedure-division word uses outside EXEC
/// blocks. Works on either form; fixed units are scanned via their free view.
std::vector<IdentifierEntry> extract_data_identifiers(const CobolUnit& program,
                                                      const IdentifierOptions& options = {});

/// Reserved-word catalog (uppercase). Compiled from the language reference;
/// used for keyword/identifier separation and rename-collision checks.
const std::set<std::string>& reserved_words();

/// Special-register catalog (uppercase), e.g. RETURN-CODE.
const std::set<std::string>& special_registers();

/// Statement-starting verbs (uppercase), used to locate the end of an IF
/// condition and to build the explicit-scope stack.
const std::set<std::string>& statement_verbs();

bool is_reserved_word(std::string_view word);

} // namespace perturbol
