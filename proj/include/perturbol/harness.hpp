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

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "perturbol/bench.hpp"
#include "perturbol/metrics.hpp"
#include "perturbol/source.hpp"

namespace perturbol {

enum class AdapterKind { ExternalCommand, HttpEndpoint, BuiltinStub };

/// The system under test. Spec strings: "stub:NAME", "http(s)://...", or a
/// shell command reading the unit on stdin and writing the output to stdout.
struct SystemAdapter {
    AdapterKind kind = AdapterKind::BuiltinStub;
    std::string config;
    double timeout_seconds = 60.0;
};

SystemAdapter parse_system_spec(const std::string& spec);

/// Runs the system on one unit's text. Throws Error(TranslationError) on
/// command failure, HTTP error, or timeout.
std::string run_system(const SystemAdapter& adapter, const std::string& input_text,
                       SourceForm form);

/// One checker: a builtin ("builtin:NAME[:ARG]") or an external command that
/// receives the input and output file paths and prints
/// `true|false|<number>|missing` on one line.
struct CheckerSpec {
    std::string id;
    std::string adapter;
};

using CheckerSet = std::vector<CheckerSpec>;

/// The 12 default metric ids, backed by deterministic builtin stubs.
CheckerSet default_checker_set();
CheckerSet load_checker_set(const std::string& path);

/// Runs every checker. On a translation error: translated=false and every
/// other value missing. A failing checker yields missing for its id.
MetricVector run_checkers(const CheckerSet& checkers, const std::string& input_text,
                          const std::optional<std::string>& output_text);

struct RunRecord {
    long long group = 0;
    long long variant = 0;
    std::string method_id;
    std::string category;
    MetricVector metrics;
    std::string artifact_path;
    double wall_seconds = 0;
    std::string error; // empty when the system ran
};

struct RunOptions {
    unsigned jobs = 1;
    std::string results_path;   // CSV, append-resumable
    std::string artifacts_dir;  // defaults to <results dir>/artifacts
};

/// Runs the system + checkers over every benchmark record (originals
/// included). Results append to the CSV incrementally; a rerun resumes,
/// skipping records already present. Per-record failures never abort the run.
std::vector<RunRecord> run_benchmark(const ExpandedBenchmark& benchmark,
                                     const std::string& benchmark_dir,
                                     const SystemAdapter& adapter,
                                     const CheckerSet& checkers, const RunOptions& options);

/// results.csv column layout: i, j, method_id, category, metric ids..., error.
void write_results_csv(const std::string& path, const CheckerSet& checkers,
                       const std::vector<RunRecord>& records);
std::vector<RunRecord> read_results_csv(const std::string& path,
                                        std::vector<std::string>& metric_ids_out);

/// Minimal CSV encoding helpers (quote-aware).
std::string csv_escape(std::string_view field);
std::vector<std::string> csv_split(std::string_view line);

} // namespace perturbol
