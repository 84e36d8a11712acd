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
#include <utility>
#include <vector>

#include "perturbol/rng.hpp"
#include "perturbol/source.hpp"

namespace perturbol {

enum class MethodCategory {
    EndBlock,
    WithinLineWhitespace,
    LineBreaks,
    Distraction,
    EmptyLines,
    Comments,
    Case,
    IdentifierRenamingObfuscation,
    IdentifierRenamingPreserve,
};

enum class Determinism { Deterministic, Probabilistic };
enum class MethodScope { AnyUnit, ProgramOnly };

const char* to_string(MethodCategory category);
std::optional<MethodCategory> category_from_string(std::string_view name);

struct MethodDescriptor {
    std::string id; // stable snake_case name
    MethodCategory category;
    Determinism determinism;
    bool requires_free_parse = false;
    MethodScope scope = MethodScope::AnyUnit;
    bool fixed_output_only = false;

    bool is_renaming() const {
        return category == MethodCategory::IdentifierRenamingObfuscation ||
               category == MethodCategory::IdentifierRenamingPreserve;
    }
};

/// Ordered old-name -> new-name pairs, in declaration order.
using RenameMap = std::vector<std::pair<std::string, std::string>>;

struct PerturbOutcome {
    bool changed = false;
    CobolUnit output;
    int tries_used = 0;
    std::optional<RenameMap> rename_map;
};

inline constexpr int kMaxTries = 30;

struct MethodFilter {
    std::optional<MethodCategory> category;
    std::optional<MethodScope> scope;            // keep methods valid at this scope
    std::optional<SourceForm> output_form;       // keep methods valid for this output
};

/// The full catalog (33 methods) in stable id order, optionally filtered.
std::vector<MethodDescriptor> list_methods(const MethodFilter& filter = {});

/// Lookup by id; nullopt when unknown.
std::optional<MethodDescriptor> find_method(std::string_view id);

/// Context the pipeline provides to a method application.
struct ApplyContext {
    SourceForm destination_form = SourceForm::Fixed;
};

/// Applies one method. Parse-requiring methods must receive a free-form unit
/// (FormViolation otherwise); program-only methods must receive a program
/// (ScopeViolation). Deterministic methods run once; probabilistic ones retry
/// up to 30 times on one uninterrupted random stream, returning the first
/// changed result. `changed == false` returns the input unchanged.
PerturbOutcome apply_method(const MethodDescriptor& method, const CobolUnit& unit,
                            RngStream& rng, const ApplyContext& context);

enum class EndBlockKeyword { If, Evaluate, Perform };
enum class EndBlockMode { ReplaceWithPeriod, RemoveKeepPeriod };

/// The end-block edit behind the six end_block methods. ReplaceWithPeriod
/// rewrites an END-<kw> with no following period whose scope stack has no
/// enclosing open scope; RemoveKeepPeriod deletes an END-<kw> that directly
/// precedes a period.
PerturbOutcome end_block_edit(const CobolUnit& unit, EndBlockKeyword keyword,
                              EndBlockMode mode, RngStream& rng);

enum class RenameStyle {
    Gibberish,
    Sequential,
    HashDerived,
    Permutation,
    Suffix,
    HyphenStrip,
    Prefix,
};

/// Bijective rename of data-division identifiers (special registers, copybook
/// names and FILLER are untouched); every occurrence is rewritten.
PerturbOutcome rename_identifiers(const CobolUnit& program, RenameStyle style,
                                  RngStream& rng);

/// Method LB4: every nonnumeric literal with body length >= 2 is split into a
/// continuation at a uniformly random interior position; output is fixed form.
PerturbOutcome split_literal_continuation(const CobolUnit& unit, RngStream& rng);

/// Method LB5: a coin toss per code line; heads splits the line into a
/// continuation at a random legal point even when under the length limit.
PerturbOutcome random_line_continuation_split(const CobolUnit& unit, RngStream& rng);

/// Lines lying inside an EXEC ... END-EXEC block (inclusive); these are
/// opaque to every method.
std::vector<bool> exec_block_lines(const CobolUnit& unit);

} // namespace perturbol
