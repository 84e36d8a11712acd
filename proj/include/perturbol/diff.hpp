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

#include <string>
#include <vector>

namespace perturbol {

enum class DiffOpKind { Keep, Delete, Insert, Replace };

struct DiffOp {
    DiffOpKind kind;
    std::size_t a_index = 0; // valid for Keep/Delete/Replace
    std::size_t b_index = 0; // valid for Keep/Insert/Replace
};

/// Line-level LCS diff; adjacent delete+insert pairs collapse into Replace.
std::vector<DiffOp> line_diff(const std::vector<std::string>& a,
                              const std::vector<std::string>& b);

/// Changed span of a replaced line pair: the region between the common prefix
/// and common suffix. begin == end means pure insertion at that offset.
struct ChangedSpan {
    std::size_t a_begin = 0, a_end = 0;
    std::size_t b_begin = 0, b_end = 0;
};
ChangedSpan changed_span(const std::string& a, const std::string& b);

std::vector<std::string> split_lines(const std::string& text);

} // namespace perturbol
