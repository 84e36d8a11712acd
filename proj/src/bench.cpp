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

#include "perturbol/bench.hpp"

#include <algorithm>
#include <filesystem>

#include <json.hpp>

#include "perturbol/convert.hpp"
#include "perturbol/pipeline.hpp"
#include "perturbol/structure.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace perturbol {

std::size_t CorpusManifest::paragraph_count() const {
    std::size_t n = 0;
    for (const CorpusProgram& p : programs) n += p.paragraphs.size();
    return n;
}

CorpusManifest scan_corpus(const std::string& dir, SourceForm form) {
    CorpusManifest manifest;
    manifest.form = form;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
        if (ext == ".cbl" || ext == ".cob") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& path : files) {
        CorpusProgram program;
        program.id = path.stem().string();
        program.path = path.string();
        CobolUnit unit = load_unit(path.string(), form);
        for (const ParagraphInfo& p : extract_structure(unit).procedure_paragraphs())
            program.paragraphs.push_back(p.name);
        manifest.programs.push_back(std::move(program));
    }
    if (manifest.programs.empty())
        fail(ErrorCode::BadInput, "no .cbl/.cob programs under " + dir);
    return manifest;
}

namespace {

std::vector<MethodDescriptor> syntactic_methods(SourceForm form) {
    std::vector<MethodDescriptor> out;
    for (const MethodDescriptor& m : list_methods(MethodFilter{{}, {}, form}))
        if (!m.is_renaming() && m.scope == MethodScope::AnyUnit) out.push_back(m);
    return out;
}

std::vector<MethodDescriptor> renaming_methods() {
    std::vector<MethodDescriptor> out;
    for (const MethodDescriptor& m : list_methods())
        if (m.is_renaming()) out.push_back(m);
    return out;
}

struct ParagraphRef {
    std::size_t program_index;
    std::string name;
    CobolUnit unit;
};

std::vector<ParagraphRef> load_paragraphs(const CorpusManifest& manifest) {
    std::vector<ParagraphRef> out;
    for (std::size_t pi = 0; pi < manifest.programs.size(); ++pi) {
        const CorpusProgram& program = manifest.programs[pi];
        CobolUnit unit = load_unit(program.path, manifest.form);
        for (const std::string& name : program.paragraphs)
            out.push_back(ParagraphRef{pi, name, extract_paragraph(unit, name)});
    }
    return out;
}

} // namespace

std::vector<std::vector<std::string>> applicability_scan(const CorpusManifest& manifest,
                                                         std::uint64_t seed) {
    const std::vector<MethodDescriptor> methods = syntactic_methods(manifest.form);
    std::vector<std::vector<std::string>> out;
    for (const ParagraphRef& ref : load_paragraphs(manifest)) {
        std::vector<std::string> applicable;
        for (const MethodDescriptor& method : methods) {
            RngStream rng(mix_seed(seed, hash_text(ref.name + "/" + method.id)));
            PerturbResult result = perturb(ref.unit, method, manifest.form, rng);
            if (result.changed) applicable.push_back(method.id);
        }
        out.push_back(std::move(applicable));
    }
    return out;
}

std::pair<std::uint64_t, std::uint64_t>
compute_multipliers(std::uint64_t R, const CorpusManifest& manifest,
                    const MethodCounts& counts,
                    const std::vector<std::vector<std::string>>& applicability) {
    const std::size_t n = manifest.paragraph_count();
    if (n == 0 || R == 0) fail(ErrorCode::BadInput, "empty corpus or R = 0");
    const std::uint64_t r_r =
        (R * counts.renaming + n - 1) / n; // ceil

    // smallest R_s whose mean expected per-method appearance count reaches R:
    // sum_i min(R_s, |A_i|) >= R * S
    std::uint64_t r_s = 1;
    std::size_t max_applicable = 1;
    for (const auto& a : applicability) max_applicable = std::max(max_applicable, a.size());
    for (;; ++r_s) {
        std::uint64_t expected_total = 0;
        for (const auto& a : applicability)
            expected_total += std::min<std::uint64_t>(r_s, a.size());
        if (expected_total >= R * counts.syntactic) break;
        if (r_s >= max_applicable) break; // cannot grow further
    }
    return {std::max<std::uint64_t>(1, r_r), std::max<std::uint64_t>(1, r_s)};
}

namespace {

struct GroupState {
    long long group = 0;
    long long next_variant = 1;
    std::set<std::string> used_methods; // across this paragraph's variants
};

std::string two_digits(std::uint64_t v) {
    std::string s = std::to_string(v);
    return s.size() < 2 ? "0" + s : s;
}

} // namespace

std::map<long long, std::size_t> ExpandedBenchmark::group_sizes() const {
    std::map<long long, std::size_t> sizes;
    for (const VariantRecord& record : records)
        if (record.variant >= 1) ++sizes[record.group];
    return sizes;
}

ExpandedBenchmark expand_corpus(const CorpusManifest& manifest, const ExpansionPlan& plan,
                                const std::string& out_dir) {
    fs::create_directories(fs::path(out_dir) / "programs");

    ExpandedBenchmark bench;
    bench.corpus = manifest;
    bench.plan = plan;

    const std::vector<MethodDescriptor> renamers = renaming_methods();
    const std::vector<MethodDescriptor> syntactic = syntactic_methods(manifest.form);
    const std::vector<std::vector<std::string>> applicability =
        applicability_scan(manifest, plan.seed);

    // group index per (program, paragraph), in corpus order
    std::map<std::pair<std::size_t, std::string>, long long> group_of;
    std::map<std::pair<std::size_t, std::string>, GroupState> groups;
    {
        long long g = 0;
        for (std::size_t pi = 0; pi < manifest.programs.size(); ++pi)
            for (const std::string& name : manifest.programs[pi].paragraphs) {
                auto key = std::make_pair(pi, to_upper(name));
                group_of[key] = ++g;
                groups[key] = GroupState{g, 1, {}};
            }
    }
    std::map<std::string, std::size_t> global_method_use;
    std::map<std::pair<std::size_t, std::string>, std::size_t> paragraph_index;
    {
        std::size_t k = 0;
        for (std::size_t pi = 0; pi < manifest.programs.size(); ++pi)
            for (const std::string& name : manifest.programs[pi].paragraphs)
                paragraph_index[{pi, to_upper(name)}] = k++;
    }

    auto emit_program = [&](const std::string& variant_id, const CobolUnit& unit) {
        const std::string rel = "programs/" + variant_id + ".cbl";
        save_unit(unit, (fs::path(out_dir) / rel).string());
        ++bench.program_variant_count;
        return rel;
    };

    auto record_paragraphs = [&](std::size_t pi, const CobolUnit& variant_unit,
                                 const std::string& variant_id, const std::string& rel_path,
                                 const CobolUnit& original_unit, bool is_original,
                                 const std::string& method_id, const std::string& category,
                                 int terminal_node, bool sfx_normalized,
                                 const std::string& map_ref) {
        for (const std::string& name : manifest.programs[pi].paragraphs) {
            auto key = std::make_pair(pi, to_upper(name));
            LineRange range = paragraph_range(variant_unit, name);
            VariantRecord record;
            record.group = group_of[key];
            record.program_id = manifest.programs[pi].id;
            record.paragraph = name;
            record.program_variant_id = variant_id;
            record.path = rel_path;
            record.line_begin = range.begin;
            record.line_end = range.end;
            if (is_original) {
                record.variant = 0;
                bench.records.push_back(std::move(record));
                continue;
            }
            CobolUnit variant_para = extract_paragraph(variant_unit, name);
            CobolUnit original_para = extract_paragraph(original_unit, name);
            if (unit_text(variant_para) == unit_text(original_para)) {
                bench.skipped.push_back(variant_id + "/" + name +
                                        ": paragraph unchanged, row omitted");
                continue;
            }
            GroupState& state = groups[key];
            record.variant = state.next_variant++;
            record.method_id = method_id;
            record.category = category;
            record.terminal_node = terminal_node;
            record.sfx_normalized = sfx_normalized;
            record.rename_map_ref = map_ref;
            bench.records.push_back(std::move(record));
        }
    };

    for (std::size_t pi = 0; pi < manifest.programs.size(); ++pi) {
        const CorpusProgram& program = manifest.programs[pi];
        const CobolUnit original = load_unit(program.path, manifest.form);

        const std::string orig_id = program.id + "__orig";
        std::string rel = emit_program(orig_id, original);
        record_paragraphs(pi, original, orig_id, rel, original, true, "", "", 0, false, "");

        // renaming variants: draw without replacement where possible
        std::vector<MethodDescriptor> pool = renamers;
        RngStream draw_rng(mix_seed(plan.seed, hash_text(program.id + "/renaming")));
        draw_rng.shuffle(pool);
        std::size_t pool_next = 0;
        for (std::uint64_t k = 1; k <= plan.R_r; ++k) {
            std::optional<PerturbResult> accepted;
            std::string method_used;
            while (pool_next < pool.size()) {
                const MethodDescriptor& method = pool[pool_next++];
                RngStream rng(mix_seed(plan.seed,
                                       hash_text(program.id + "/r" + std::to_string(k) +
                                                 "/" + method.id)));
                PerturbResult result = perturb(original, method, manifest.form, rng);
                if (result.changed) {
                    accepted = std::move(result);
                    method_used = method.id;
                    break;
                }
                bench.skipped.push_back(program.id + ": " + method.id +
                                        " had no effect, drew another renaming method");
            }
            if (pool_next >= pool.size() && plan.R_r > k) {
                // reuse allowed only once the pool is exhausted
                pool_next = 0;
                draw_rng.shuffle(pool);
            }
            if (!accepted) {
                bench.skipped.push_back(program.id + ": renaming variant " +
                                        std::to_string(k) + " dropped (no method applied)");
                continue;
            }
            const std::string variant_id = program.id + "__r" + two_digits(k);
            rel = emit_program(variant_id, accepted->output);
            bench.rename_maps[variant_id] = *accepted->rename_map;
            record_paragraphs(pi, accepted->output, variant_id, rel, original, false,
                              method_used, to_string(find_method(method_used)->category),
                              accepted->terminal_node, accepted->sfx_normalized, variant_id);
        }

        // syntactic variants: perturb each paragraph independently
        for (std::uint64_t k = 1; k <= plan.R_s; ++k) {
            CobolUnit variant_unit = original;
            struct Accepted {
                std::string paragraph;
                std::string method_id;
                int terminal_node;
                bool sfx_normalized;
            };
            std::vector<Accepted> accepted;

            for (const std::string& name : program.paragraphs) {
                auto key = std::make_pair(pi, to_upper(name));
                GroupState& state = groups[key];
                const std::size_t para_idx = paragraph_index[key];

                std::vector<MethodDescriptor> candidates;
                for (const std::string& id : applicability[para_idx])
                    if (!state.used_methods.count(id)) candidates.push_back(*find_method(id));

                RngStream order_rng(mix_seed(plan.seed,
                                             hash_text(program.id + "/s" + std::to_string(k) +
                                                       "/" + name + "/order")));
                if (plan.boost_rare) {
                    std::stable_sort(candidates.begin(), candidates.end(),
                                     [&](const MethodDescriptor& a, const MethodDescriptor& b) {
                                         return global_method_use[a.id] < global_method_use[b.id];
                                     });
                } else {
                    order_rng.shuffle(candidates);
                }

                const CobolUnit paragraph = extract_paragraph(original, name);
                bool done = false;
                for (const MethodDescriptor& method : candidates) {
                    RngStream rng(mix_seed(plan.seed,
                                           hash_text(program.id + "/s" + std::to_string(k) +
                                                     "/" + name + "/" + method.id)));
                    PerturbResult result = perturb(paragraph, method, manifest.form, rng);
                    if (!result.changed) continue;
                    // splice the perturbed paragraph into the program variant
                    LineRange range = paragraph_range(variant_unit, name);
                    std::vector<CobolLine> lines = variant_unit.lines;
                    lines.erase(lines.begin() + static_cast<std::ptrdiff_t>(range.begin),
                                lines.begin() + static_cast<std::ptrdiff_t>(range.end));
                    lines.insert(lines.begin() + static_cast<std::ptrdiff_t>(range.begin),
                                 result.output.lines.begin(), result.output.lines.end());
                    variant_unit.lines = std::move(lines);
                    state.used_methods.insert(method.id);
                    ++global_method_use[method.id];
                    accepted.push_back(Accepted{name, method.id, result.terminal_node,
                                                result.sfx_normalized});
                    done = true;
                    break;
                }
                if (!done)
                    bench.skipped.push_back(program.id + "/" + name + " s" +
                                            std::to_string(k) +
                                            ": methods exhausted, paragraph left unperturbed");
            }

            const std::string variant_id = program.id + "__s" + two_digits(k);
            rel = emit_program(variant_id, variant_unit);
            // one record per paragraph actually perturbed in this variant
            for (const Accepted& a : accepted) {
                auto key = std::make_pair(pi, to_upper(a.paragraph));
                LineRange range = paragraph_range(variant_unit, a.paragraph);
                GroupState& state = groups[key];
                VariantRecord record;
                record.group = state.group;
                record.variant = state.next_variant++;
                record.program_id = program.id;
                record.paragraph = a.paragraph;
                record.program_variant_id = variant_id;
                record.path = rel;
                record.line_begin = range.begin;
                record.line_end = range.end;
                record.method_id = a.method_id;
                record.category = to_string(find_method(a.method_id)->category);
                record.terminal_node = a.terminal_node;
                record.sfx_normalized = a.sfx_normalized;
                bench.records.push_back(std::move(record));
            }
            // the unperturbed paragraphs of this variant exist in the file but
            // get no record (their text equals the original)
        }
    }

    std::sort(bench.records.begin(), bench.records.end(),
              [](const VariantRecord& a, const VariantRecord& b) {
                  return a.group != b.group ? a.group < b.group : a.variant < b.variant;
              });
    write_benchmark_manifest(bench, out_dir);
    return bench;
}

void write_benchmark_manifest(const ExpandedBenchmark& bench, const std::string& out_dir) {
    json doc;
    doc["form"] = to_string(bench.corpus.form);
    doc["plan"] = {{"R", bench.plan.R},       {"R_r", bench.plan.R_r},
                   {"R_s", bench.plan.R_s},   {"seed", bench.plan.seed},
                   {"boost_rare", bench.plan.boost_rare}};
    doc["programs"] = json::array();
    for (const CorpusProgram& p : bench.corpus.programs)
        doc["programs"].push_back(
            {{"id", p.id}, {"path", p.path}, {"paragraphs", p.paragraphs}});
    doc["program_variants"] = bench.program_variant_count;
    doc["records"] = json::array();
    for (const VariantRecord& r : bench.records) {
        json rec = {{"i", r.group},
                    {"j", r.variant},
                    {"program_id", r.program_id},
                    {"paragraph", r.paragraph},
                    {"program_variant_id", r.program_variant_id},
                    {"path", r.path},
                    {"line_begin", r.line_begin},
                    {"line_end", r.line_end},
                    {"method_id", r.method_id},
                    {"category", r.category},
                    {"terminal_node", r.terminal_node},
                    {"sfx_normalized", r.sfx_normalized}};
        if (!r.rename_map_ref.empty()) rec["rename_map_ref"] = r.rename_map_ref;
        doc["records"].push_back(std::move(rec));
    }
    doc["rename_maps"] = json::object();
    for (const auto& [id, map] : bench.rename_maps) {
        json entry = json::object();
        for (const auto& [from, to] : map) entry[from] = to;
        doc["rename_maps"][id] = std::move(entry);
    }
    doc["skipped"] = bench.skipped;
    write_file((fs::path(out_dir) / "manifest.json").string(), doc.dump(2) + "\n");
}

ExpandedBenchmark load_benchmark_manifest(const std::string& dir) {
    const json doc = json::parse(read_file((fs::path(dir) / "manifest.json").string()));
    ExpandedBenchmark bench;
    bench.corpus.form =
        doc.at("form").get<std::string>() == "fixed" ? SourceForm::Fixed : SourceForm::Free;
    bench.plan.R = doc.at("plan").at("R").get<std::uint64_t>();
    bench.plan.R_r = doc.at("plan").at("R_r").get<std::uint64_t>();
    bench.plan.R_s = doc.at("plan").at("R_s").get<std::uint64_t>();
    bench.plan.seed = doc.at("plan").at("seed").get<std::uint64_t>();
    bench.plan.boost_rare = doc.at("plan").at("boost_rare").get<bool>();
    for (const json& p : doc.at("programs")) {
        CorpusProgram program;
        program.id = p.at("id").get<std::string>();
        program.path = p.at("path").get<std::string>();
        for (const json& name : p.at("paragraphs"))
            program.paragraphs.push_back(name.get<std::string>());
        bench.corpus.programs.push_back(std::move(program));
    }
    bench.program_variant_count = doc.at("program_variants").get<std::size_t>();
    for (const json& r : doc.at("records")) {
        VariantRecord record;
        record.group = r.at("i").get<long long>();
        record.variant = r.at("j").get<long long>();
        record.program_id = r.at("program_id").get<std::string>();
        record.paragraph = r.at("paragraph").get<std::string>();
        record.program_variant_id = r.at("program_variant_id").get<std::string>();
        record.path = r.at("path").get<std::string>();
        record.line_begin = r.at("line_begin").get<std::size_t>();
        record.line_end = r.at("line_end").get<std::size_t>();
        record.method_id = r.at("method_id").get<std::string>();
        record.category = r.at("category").get<std::string>();
        record.terminal_node = r.at("terminal_node").get<int>();
        record.sfx_normalized = r.at("sfx_normalized").get<bool>();
        if (r.contains("rename_map_ref"))
            record.rename_map_ref = r.at("rename_map_ref").get<std::string>();
        bench.records.push_back(std::move(record));
    }
    if (doc.contains("rename_maps"))
        for (const auto& [id, entry] : doc.at("rename_maps").items()) {
            RenameMap map;
            for (const auto& [from, to] : entry.items())
                map.emplace_back(from, to.get<std::string>());
            bench.rename_maps[id] = std::move(map);
        }
    if (doc.contains("skipped"))
        for (const json& s : doc.at("skipped")) bench.skipped.push_back(s.get<std::string>());
    return bench;
}

std::string record_text(const ExpandedBenchmark& bench, const VariantRecord& record,
                        const std::string& benchmark_dir) {
    CobolUnit unit = load_unit((fs::path(benchmark_dir) / record.path).string(),
                               bench.corpus.form);
    std::string out;
    for (std::size_t i = record.line_begin; i < record.line_end && i < unit.lines.size(); ++i) {
        out += unit.lines[i].raw;
        out += '\n';
    }
    return out;
}

} // namespace perturbol
