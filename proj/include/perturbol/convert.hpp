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

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "perturbol/source.hpp"

namespace perturbol {

/// Conversion diagnostics, written by `convert --trace`.
struct ConversionTrace {
    std::uint64_t joined_continuations = 0;
    std::uint64_t comma_spaces_inserted = 0;
    std::uint64_t comments_restyled = 0;
    std::uint64_t lines_split = 0;
    std::uint64_t trailing_spaces_trimmed = 0;
};

/// fixed2free: joins continuation blocks (discarding the continuation line's
/// leading whitespace outside literals, resuming after the re-opening quote
/// inside them), appends one space to a trailing comma or semicolon, restyles
/// `*` comments to `*>`, and drops columns 1-7.
std::pair<CobolUnit, ConversionTrace> fixed_to_free(const CobolUnit& unit);

/// free2fixed in standard fixed form (SFX): content at column 8, comments as
/// `*` in column 7, lines split only when the 72-char bound requires it, each
/// split at the highest legal location, continuations resuming at column 12.
std::pair<CobolUnit, ConversionTrace> free_to_fixed_sfx_traced(const CobolUnit& unit);
CobolUnit free_to_fixed_sfx(const CobolUnit& unit);

/// True iff free_to_fixed_sfx(fixed_to_free(unit)) equals unit byte-for-byte.
bool is_sfx(const CobolUnit& unit);

/// Splits free-form content into fixed-form segments: the first rendered as
/// `first_prefix + segment`, the rest as continuation lines (hyphen in column
/// 7, content at column 12, a re-opening quote when resuming a literal).
/// `force_splits` are content offsets that must become split points (used by
/// the continuation-line perturbations); remaining over-length segments are
/// split at the highest legal location. Throws UnsplittableLine.
std::vector<std::string> split_fixed_segments(std::string_view content,
                                              std::string_view first_prefix,
                                              const std::vector<std::size_t>& force_splits = {});

/// Legal split offsets within free-form content: starts of tokens after the
/// first, and interior positions of nonnumeric literal bodies (never between
/// the two characters of a doubled-quote escape).
struct SplitPoints {
    std::vector<std::size_t> token_starts;
    std::vector<std::size_t> literal_interiors;
};
SplitPoints legal_split_points(std::string_view content);

} // namespace perturbol
