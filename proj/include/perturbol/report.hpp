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
#include <string>
#include <vector>

#include "perturbol/bench.hpp"
#include "perturbol/harness.hpp"
#include "perturbol/metrics.hpp"

namespace perturbol {

/// One run's worth of report inputs, labeled for side-by-side comparison.
struct LabeledAggregate {
    std::string label;
    RobustnessAggregate aggregate;
};

struct ReportFormats {
    bool json = true;
    bool csv = true;
    bool html = true;
};

/// Builds change rows from the raw run records: each variant (j >= 1) against
/// its group's original (j = 0). Records whose group lacks an original row
/// are skipped.
std::vector<ChangeRow> change_rows(const std::vector<RunRecord>& records,
                                   const std::vector<std::string>& metric_ids,
                                   const ComparisonPolicy& policy = {});

/// Emits the report files into `out_dir`:
///   report.json                 all aggregates
///   overall.csv                 per-metric rates plus the any-change rate
///   methods.csv categories.csv  conditional rates (any + per metric)
///   inputs.csv                  per-input rates
///   report.html                 the same tables, matrix cells highlighted at
///                               0.25 (yellow) and 0.5 (red)
/// Additional labeled aggregates render side by side in the HTML overall
/// table.
void emit_report(const std::vector<LabeledAggregate>& runs, const ReportFormats& formats,
                 const std::string& out_dir);

/// Group debug page: metric table with changed cells flagged, input diffs
/// against the original, and system-output diffs when artifacts exist.
/// Throws UnknownGroup.
void debug_group_report(long long group, const std::vector<RunRecord>& records,
                        const ExpandedBenchmark& benchmark, const std::string& benchmark_dir,
                        const std::vector<std::string>& metric_ids,
                        const std::string& out_path,
                        const ComparisonPolicy& policy = {});

std::string html_escape(std::string_view text);

} // namespace perturbol
