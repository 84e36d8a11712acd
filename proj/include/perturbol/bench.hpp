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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "perturbol/methods.hpp"
#include "perturbol/source.hpp"

namespace perturbol {

struct CorpusProgram {
    std::string id;
    std::string path;
    std::vector<std::string> paragraphs; // extraction targets, in source order
};

struct CorpusManifest {
    std::vector<CorpusProgram> programs;
    SourceForm form = SourceForm::Fixed;
    std::size_t paragraph_count() const; // the corpus N
};

/// Scans a directory of COBOL programs (*.cbl, *.cob, sorted by name) and
/// lists every procedure-division paragraph as an extraction target.
CorpusManifest scan_corpus(const std::string& dir, SourceForm form);

struct ExpansionPlan {
    std::uint64_t R = 1;      // target mean paragraph appearances per method
    std::uint64_t R_r = 1;    // renaming variants per program
    std::uint64_t R_s = 1;    // syntactic variants per program
    std::uint64_t seed = 0;
    bool boost_rare = false;
};

struct MethodCounts {
    std::size_t syntactic = 0; // S
    std::size_t renaming = 0;  // P
};

/// Applicability sets from a seeded dry run: for each paragraph (in corpus
/// order), the ids of syntactic methods able to change it.
std::vector<std::vector<std::string>> applicability_scan(const CorpusManifest& manifest,
                                                         std::uint64_t seed);

/// R_r = ceil(R * P / N); R_s = smallest value whose expected per-syntactic-
/// method paragraph count, mean over methods under without-replacement
/// sampling with the scanned applicability, reaches R.
std::pair<std::uint64_t, std::uint64_t>
compute_multipliers(std::uint64_t R, const CorpusManifest& manifest,
                    const MethodCounts& counts,
                    const std::vector<std::vector<std::string>>& applicability);

struct VariantRecord {
    long long group = 0;           // i (1-based over all extracted paragraphs)
    long long variant = 0;         // j; 0 is the original
    std::string program_id;
    std::string paragraph;
    std::string program_variant_id;
    std::string path;              // program variant file, relative to out dir
    std::size_t line_begin = 0;    // paragraph range within that file
    std::size_t line_end = 0;
    std::string method_id;         // empty for j = 0
    std::string category;          // empty for j = 0
    int terminal_node = 0;
    bool sfx_normalized = false;
    std::string rename_map_ref;    // program variant id owning the map
};

struct ExpandedBenchmark {
    CorpusManifest corpus;
    ExpansionPlan plan;
    std::vector<VariantRecord> records;
    std::map<std::string, RenameMap> rename_maps; // by program variant id
    std::vector<std::string> skipped;             // logged generation skips
    std::size_t program_variant_count = 0;

    std::map<long long, std::size_t> group_sizes() const; // n(i) per group
};

/// Expands the corpus: per program one original, R_r whole-program renaming
/// variants (methods drawn without replacement where possible) and R_s
/// syntactic variants (each paragraph perturbed independently, avoiding
/// method repeats across a paragraph's variants). Every kept record satisfies
/// perturbed != original; failures reduce n(i) and are logged.
ExpandedBenchmark expand_corpus(const CorpusManifest& manifest, const ExpansionPlan& plan,
                                const std::string& out_dir);

void write_benchmark_manifest(const ExpandedBenchmark& benchmark,
                              const std::string& out_dir);
ExpandedBenchmark load_benchmark_manifest(const std::string& dir);

/// Paragraph text of one record (reads the referenced file slice).
std::string record_text(const ExpandedBenchmark& benchmark, const VariantRecord& record,
                        const std::string& benchmark_dir);

} // namespace perturbol
