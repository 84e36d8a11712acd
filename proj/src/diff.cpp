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

#include "perturbol/diff.hpp"

#include <algorithm>

namespace perturbol {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) {
            if (pos < text.size()) lines.push_back(text.substr(pos));
            break;
        }
        lines.push_back(text.substr(pos, nl - pos));
        pos = nl + 1;
    }
    return lines;
}

std::vector<DiffOp> line_diff(const std::vector<std::string>& a,
                              const std::vector<std::string>& b) {
    const std::size_t n = a.size(), m = b.size();
    // LCS table; inputs here are paragraph-scale, so quadratic is fine
    std::vector<std::vector<std::size_t>> lcs(n + 1, std::vector<std::size_t>(m + 1, 0));
    for (std::size_t i = n; i-- > 0;)
        for (std::size_t j = m; j-- > 0;)
            lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1
                                     : std::max(lcs[i + 1][j], lcs[i][j + 1]);

    std::vector<DiffOp> ops;
    std::size_t i = 0, j = 0;
    while (i < n && j < m) {
        if (a[i] == b[j]) {
            ops.push_back({DiffOpKind::Keep, i++, j++});
        } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
            ops.push_back({DiffOpKind::Delete, i++, 0});
        } else {
            ops.push_back({DiffOpKind::Insert, 0, j++});
        }
    }
    while (i < n) ops.push_back({DiffOpKind::Delete, i++, 0});
    while (j < m) ops.push_back({DiffOpKind::Insert, 0, j++});

    // pair up adjacent delete/insert runs as replacements
    std::vector<DiffOp> merged;
    std::size_t k = 0;
    while (k < ops.size()) {
        if (ops[k].kind != DiffOpKind::Delete) {
            merged.push_back(ops[k++]);
            continue;
        }
        std::size_t del_end = k;
        while (del_end < ops.size() && ops[del_end].kind == DiffOpKind::Delete) ++del_end;
        std::size_t ins_end = del_end;
        while (ins_end < ops.size() && ops[ins_end].kind == DiffOpKind::Insert) ++ins_end;
        const std::size_t dels = del_end - k, inss = ins_end - del_end;
        const std::size_t pairs = std::min(dels, inss);
        for (std::size_t p = 0; p < pairs; ++p)
            merged.push_back(
                {DiffOpKind::Replace, ops[k + p].a_index, ops[del_end + p].b_index});
        for (std::size_t p = pairs; p < dels; ++p)
            merged.push_back({DiffOpKind::Delete, ops[k + p].a_index, 0});
        for (std::size_t p = pairs; p < inss; ++p)
            merged.push_back({DiffOpKind::Insert, 0, ops[del_end + p].b_index});
        k = ins_end;
    }
    return merged;
}

ChangedSpan changed_span(const std::string& a, const std::string& b) {
    std::size_t prefix = 0;
    while (prefix < a.size() && prefix < b.size() && a[prefix] == b[prefix]) ++prefix;
    std::size_t suffix = 0;
    while (suffix < a.size() - prefix && suffix < b.size() - prefix &&
           a[a.size() - 1 - suffix] == b[b.size() - 1 - suffix])
        ++suffix;
    return ChangedSpan{prefix, a.size() - suffix, prefix, b.size() - suffix};
}

} // namespace perturbol
