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

// Shared internals of the method implementations. Not part of the public
// surface; split across methods.cpp, rename.cpp and linebreaks.cpp.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "perturbol/lexer.hpp"
#include "perturbol/methods.hpp"
#include "perturbol/source.hpp"

namespace perturbol::detail {

/// In-place byte replacement on one line of a unit.
struct SpliceEdit {
    std::size_t line;
    std::size_t begin;
    std::size_t end;
    std::string replacement;
};

void apply_edits(CobolUnit& unit, std::vector<SpliceEdit> edits);

/// Token view of a free-form unit with the opaque EXEC ranges precomputed.
struct FreeView {
    explicit FreeView(const CobolUnit& unit);
    std::vector<UnitToken> tokens;
    std::vector<std::pair<std::size_t, std::size_t>> opaque;
    bool is_opaque(std::size_t index) const;
};

/// One attempt of a method body. `unit` may equal the input (no change this
/// try); a nullopt attempt means the unit has no target features at all.
struct MethodResult {
    CobolUnit unit;
    std::optional<RenameMap> rename_map;
};

std::optional<MethodResult> run_method_once(const MethodDescriptor& method,
                                            const CobolUnit& unit, RngStream& rng,
                                            const ApplyContext& context);

// rename.cpp
std::optional<MethodResult> rename_once(const std::string& method_id, const CobolUnit& unit,
                                        RngStream& rng);

// linebreaks.cpp
std::optional<CobolUnit> lb_join_sentence_lines_impl(const CobolUnit& unit, RngStream& rng,
                                                     const ApplyContext& context);
std::optional<CobolUnit> lb_split_token_boundary_impl(const CobolUnit& unit, RngStream& rng,
                                                      const ApplyContext& context);
std::optional<CobolUnit> period_newline_impl(const CobolUnit& unit);
std::optional<CobolUnit> split_literal_continuation_impl(const CobolUnit& unit,
                                                         RngStream& rng);
std::optional<CobolUnit> random_line_continuation_split_impl(const CobolUnit& unit,
                                                             RngStream& rng);

} // namespace perturbol::detail
