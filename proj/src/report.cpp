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

#include "perturbol/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>

#include <json.hpp>

#include "perturbol/diff.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace perturbol {

namespace {

std::string fmt(const Rational& r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", r.to_double());
    return buf;
}

const char* cell_class(const Rational& r) {
    const double v = r.to_double();
    if (v > 0.5) return "hot";
    if (v >= 0.25) return "warm";
    return "";
}

json aggregate_to_json(const RobustnessAggregate& agg) {
    json doc;
    doc["N"] = agg.inputs;
    doc["metric_ids"] = agg.metric_ids;
    doc["any"] = agg.any.to_double();
    doc["per_metric"] = json::object();
    for (std::size_t m = 0; m < agg.metric_ids.size(); ++m)
        doc["per_metric"][agg.metric_ids[m]] = agg.per_metric[m].to_double();
    auto conditional_to_json = [&](const std::map<std::string, ConditionalRate>& rates) {
        json out = json::object();
        for (const auto& [key, rate] : rates) {
            json entry;
            entry["inputs_with_method"] = rate.inputs_with_method;
            entry["any"] = rate.any.to_double();
            entry["per_metric"] = json::object();
            for (std::size_t m = 0; m < agg.metric_ids.size(); ++m)
                entry["per_metric"][agg.metric_ids[m]] = rate.per_metric[m].to_double();
            out[key] = std::move(entry);
        }
        return out;
    };
    doc["per_method"] = conditional_to_json(agg.per_method);
    doc["per_category"] = conditional_to_json(agg.per_category);
    doc["per_input"] = json::array();
    for (const InputRate& input : agg.per_input) {
        json entry;
        entry["i"] = input.group;
        entry["n"] = input.variants;
        entry["any"] = input.any.to_double();
        entry["per_metric"] = json::object();
        for (std::size_t m = 0; m < agg.metric_ids.size(); ++m)
            entry["per_metric"][agg.metric_ids[m]] = input.per_metric[m].to_double();
        doc["per_input"].push_back(std::move(entry));
    }
    return doc;
}

} // namespace

std::string html_escape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::vector<ChangeRow> change_rows(const std::vector<RunRecord>& records,
                                   const std::vector<std::string>& metric_ids,
                                   const ComparisonPolicy& policy) {
    std::map<long long, const RunRecord*> originals;
    for (const RunRecord& record : records)
        if (record.variant == 0) originals[record.group] = &record;

    std::vector<ChangeRow> rows;
    for (const RunRecord& record : records) {
        if (record.variant == 0) continue;
        auto it = originals.find(record.group);
        if (it == originals.end()) continue;
        ChangeRow row = change_indicator(it->second->metrics, record.metrics, policy);
        row.group = record.group;
        row.variant = record.variant;
        row.method_id = record.method_id;
        row.category = record.category;
        rows.push_back(std::move(row));
    }
    (void)metric_ids;
    return rows;
}

void emit_report(const std::vector<LabeledAggregate>& runs, const ReportFormats& formats,
                 const std::string& out_dir) {
    if (runs.empty()) fail(ErrorCode::EmptyDataset, "no aggregates to report");
    fs::create_directories(out_dir);
    const RobustnessAggregate& agg = runs.front().aggregate;

    if (formats.json) {
        json doc;
        if (runs.size() == 1) {
            doc = aggregate_to_json(agg);
        } else {
            doc["runs"] = json::array();
            for (const LabeledAggregate& run : runs) {
                json entry = aggregate_to_json(run.aggregate);
                entry["label"] = run.label;
                doc["runs"].push_back(std::move(entry));
            }
        }
        write_file((fs::path(out_dir) / "report.json").string(), doc.dump(2) + "\n");
    }

    if (formats.csv) {
        // overall
        std::string text;
        for (const std::string& id : agg.metric_ids) text += csv_escape(id) + ",";
        text += "any\n";
        for (const Rational& r : agg.per_metric) text += fmt(r) + ",";
        text += fmt(agg.any) + "\n";
        write_file((fs::path(out_dir) / "overall.csv").string(), text);

        // methods.csv: category, method_id, any, then the metric columns
        std::map<std::string, std::string> categories;
        {
            // category of each method is carried on the conditional keys via
            // the method catalog when available
            for (const auto& [key, rate] : agg.per_method) {
                (void)rate;
                if (auto m = find_method(key)) categories[key] = to_string(m->category);
            }
        }
        std::string methods_text = "category,method_id,any";
        for (const std::string& id : agg.metric_ids) methods_text += "," + csv_escape(id);
        methods_text += "\n";
        for (const auto& [key, rate] : agg.per_method) {
            auto it = categories.find(key);
            methods_text += csv_escape(it == categories.end() ? "" : it->second) + "," +
                            csv_escape(key) + "," + fmt(rate.any);
            for (const Rational& r : rate.per_metric) methods_text += "," + fmt(r);
            methods_text += "\n";
        }
        write_file((fs::path(out_dir) / "methods.csv").string(), methods_text);

        std::string categories_text = "category,any";
        for (const std::string& id : agg.metric_ids) categories_text += "," + csv_escape(id);
        categories_text += "\n";
        for (const auto& [key, rate] : agg.per_category) {
            categories_text += csv_escape(key) + "," + fmt(rate.any);
            for (const Rational& r : rate.per_metric) categories_text += "," + fmt(r);
            categories_text += "\n";
        }
        write_file((fs::path(out_dir) / "categories.csv").string(), categories_text);

        std::string inputs_text = "i,n,any";
        for (const std::string& id : agg.metric_ids) inputs_text += "," + csv_escape(id);
        inputs_text += "\n";
        for (const InputRate& input : agg.per_input) {
            inputs_text += std::to_string(input.group) + "," +
                           std::to_string(input.variants) + "," + fmt(input.any);
            for (const Rational& r : input.per_metric) inputs_text += "," + fmt(r);
            inputs_text += "\n";
        }
        write_file((fs::path(out_dir) / "inputs.csv").string(), inputs_text);
    }

    if (!formats.html) return;

    std::ostringstream html;
    html << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\">\n"
         << "<title>Robustness report</title>\n<style>\n"
         << "body{font-family:sans-serif;margin:1.5em;}\n"
         << "table{border-collapse:collapse;margin:0.8em 0;}\n"
         << "th,td{border:1px solid #999;padding:3px 8px;font-size:13px;}\n"
         << "th{background:#eee;}\n"
         << "td.warm{background:#ffe98a;}\n"
         << "td.hot{background:#ff9e80;}\n"
         << "caption{font-weight:bold;text-align:left;padding:4px 0;}\n"
         << "</style></head><body>\n<h1>Robustness report</h1>\n";

    // overall table, side by side when several runs are given
    html << "<table><caption>Overall rate of metric change</caption>\n<tr><th>run</th>";
    for (const std::string& id : agg.metric_ids) html << "<th>" << html_escape(id) << "</th>";
    html << "<th>any</th></tr>\n";
    for (const LabeledAggregate& run : runs) {
        html << "<tr><td>" << html_escape(run.label) << "</td>";
        for (const Rational& r : run.aggregate.per_metric) html << "<td>" << fmt(r) << "</td>";
        html << "<td><b>" << fmt(run.aggregate.any) << "</b></td></tr>\n";
    }
    html << "</table>\n";

    auto conditional_tables = [&](const RobustnessAggregate& a, const std::string& label) {
        html << "<h2>" << html_escape(label) << "</h2>\n";
        html << "<table><caption>Category-conditional any-change rate</caption>\n"
             << "<tr><th>category</th><th>inputs</th><th>any</th></tr>\n";
        for (const auto& [key, rate] : a.per_category)
            html << "<tr><td>" << html_escape(key) << "</td><td>" << rate.inputs_with_method
                 << "</td><td class=\"" << cell_class(rate.any) << "\">" << fmt(rate.any)
                 << "</td></tr>\n";
        html << "</table>\n";

        html << "<table><caption>Method-conditional any-change rate</caption>\n"
             << "<tr><th>category</th><th>method</th><th>inputs</th><th>any</th></tr>\n";
        for (const auto& [key, rate] : a.per_method) {
            std::string category;
            if (auto m = find_method(key)) category = to_string(m->category);
            html << "<tr><td>" << html_escape(category) << "</td><td>" << html_escape(key)
                 << "</td><td>" << rate.inputs_with_method << "</td><td class=\""
                 << cell_class(rate.any) << "\">" << fmt(rate.any) << "</td></tr>\n";
        }
        html << "</table>\n";

        auto matrix = [&](const std::map<std::string, ConditionalRate>& rates,
                          const std::string& caption, const char* col0) {
            html << "<table><caption>" << html_escape(caption) << "</caption>\n<tr><th>"
                 << col0 << "</th>";
            for (const std::string& id : a.metric_ids)
                html << "<th>" << html_escape(id) << "</th>";
            html << "<th>any</th></tr>\n";
            for (const auto& [key, rate] : rates) {
                html << "<tr><td>" << html_escape(key) << "</td>";
                for (const Rational& r : rate.per_metric)
                    html << "<td class=\"" << cell_class(r) << "\">" << fmt(r) << "</td>";
                html << "<td class=\"" << cell_class(rate.any) << "\">" << fmt(rate.any)
                     << "</td></tr>\n";
            }
            html << "</table>\n";
        };
        matrix(a.per_method, "Method x metric change rates", "method");
        matrix(a.per_category, "Category x metric change rates", "category");

        html << "<table><caption>Per-input change rates</caption>\n<tr><th>i</th><th>n(i)"
             << "</th><th>any</th>";
        for (const std::string& id : a.metric_ids)
            html << "<th>" << html_escape(id) << "</th>";
        html << "</tr>\n";
        for (const InputRate& input : a.per_input) {
            html << "<tr><td>" << input.group << "</td><td>" << input.variants
                 << "</td><td>" << fmt(input.any) << "</td>";
            for (const Rational& r : input.per_metric) html << "<td>" << fmt(r) << "</td>";
            html << "</tr>\n";
        }
        html << "</table>\n";
    };
    for (const LabeledAggregate& run : runs) conditional_tables(run.aggregate, run.label);
    html << "</body></html>\n";
    write_file((fs::path(out_dir) / "report.html").string(), html.str());
}

namespace {

void diff_panel(std::ostringstream& html, const std::string& title,
                const std::string& base_text, const std::string& variant_text) {
    html << "<h3>" << html_escape(title) << "</h3>\n<pre>";
    const std::vector<std::string> a = split_lines(base_text);
    const std::vector<std::string> b = split_lines(variant_text);
    for (const DiffOp& op : line_diff(a, b)) {
        switch (op.kind) {
        case DiffOpKind::Keep:
            html << "  " << html_escape(b[op.b_index]) << "\n";
            break;
        case DiffOpKind::Delete:
            html << "- <span class=\"del\">" << html_escape(a[op.a_index]) << "</span>\n";
            break;
        case DiffOpKind::Insert:
            html << "+ <span class=\"ins\">" << html_escape(b[op.b_index]) << "</span>\n";
            break;
        case DiffOpKind::Replace: {
            const std::string& from = a[op.a_index];
            const std::string& to = b[op.b_index];
            ChangedSpan span = changed_span(from, to);
            html << "- " << html_escape(from.substr(0, span.a_begin)) << "<span class=\"del\">"
                 << html_escape(from.substr(span.a_begin, span.a_end - span.a_begin))
                 << "</span>" << html_escape(from.substr(span.a_end)) << "\n";
            html << "+ " << html_escape(to.substr(0, span.b_begin)) << "<span class=\"ins\">"
                 << html_escape(to.substr(span.b_begin, span.b_end - span.b_begin))
                 << "</span>" << html_escape(to.substr(span.b_end)) << "\n";
            break;
        }
        }
    }
    html << "</pre>\n";
}

} // namespace

void debug_group_report(long long group, const std::vector<RunRecord>& records,
                        const ExpandedBenchmark& benchmark, const std::string& benchmark_dir,
                        const std::vector<std::string>& metric_ids,
                        const std::string& out_path, const ComparisonPolicy& policy) {
    std::vector<const RunRecord*> rows;
    for (const RunRecord& record : records)
        if (record.group == group) rows.push_back(&record);
    std::sort(rows.begin(), rows.end(), [](const RunRecord* a, const RunRecord* b) {
        return a->variant < b->variant;
    });
    if (rows.empty() || rows.front()->variant != 0)
        fail(ErrorCode::UnknownGroup, "group " + std::to_string(group));
    const RunRecord& base = *rows.front();

    std::map<std::pair<long long, long long>, const VariantRecord*> manifest_rows;
    for (const VariantRecord& r : benchmark.records)
        manifest_rows[{r.group, r.variant}] = &r;

    std::ostringstream html;
    html << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\">\n"
         << "<title>Group " << group << " debug</title>\n<style>\n"
         << "body{font-family:sans-serif;margin:1.5em;}\n"
         << "table{border-collapse:collapse;}th,td{border:1px solid #999;padding:3px 8px;"
         << "font-size:13px;}th{background:#eee;}\n"
         << "td.chg{background:#ff9e80;font-weight:bold;}\n"
         << "pre{background:#f7f7f7;padding:6px;border:1px solid #ddd;font-size:12px;}\n"
         << ".del{background:#ffc4c4;}.ins{background:#c8f0c8;}\n"
         << "</style></head><body>\n<h1>Group " << group << "</h1>\n";

    // top: metric values, changed cells flagged
    html << "<table><tr><th>variant</th><th>method</th><th>any_checker_changed</th>";
    for (const std::string& id : metric_ids) html << "<th>" << html_escape(id) << "</th>";
    html << "</tr>\n";
    for (const RunRecord* row : rows) {
        std::optional<ChangeRow> change;
        if (row->variant != 0)
            change = change_indicator(base.metrics, row->metrics, policy);
        html << "<tr><td>" << (row->variant == 0 ? "original" : std::to_string(row->variant))
             << "</td><td>" << html_escape(row->method_id) << "</td>";
        if (change)
            html << "<td class=\"" << (change->any ? "chg" : "") << "\">"
                 << (change->any ? "true" : "false") << "</td>";
        else
            html << "<td>-</td>";
        for (std::size_t m = 0; m < metric_ids.size(); ++m) {
            const MetricValue* value = row->metrics.find(metric_ids[m]);
            const bool flagged = change && change->deltas[m] != 0;
            html << "<td class=\"" << (flagged ? "chg" : "") << "\">"
                 << (value ? html_escape(metric_value_to_string(*value)) : "?") << "</td>";
        }
        html << "</tr>\n";
    }
    html << "</table>\n";

    // middle: input diffs
    auto text_of = [&](const RunRecord& row) -> std::optional<std::string> {
        auto it = manifest_rows.find({row.group, row.variant});
        if (it == manifest_rows.end()) return std::nullopt;
        return record_text(benchmark, *it->second, benchmark_dir);
    };
    std::optional<std::string> base_text = text_of(base);
    if (base_text) {
        html << "<h2>Input perturbations</h2>\n";
        for (const RunRecord* row : rows) {
            if (row->variant == 0) continue;
            std::optional<std::string> variant_text = text_of(*row);
            if (!variant_text) continue;
            diff_panel(html, "variant " + std::to_string(row->variant) + " (" +
                               row->method_id + ")",
                       *base_text, *variant_text);
        }
    }

    // bottom: system output diffs, when artifacts are present
    auto artifact_of = [&](const RunRecord& row) -> std::optional<std::string> {
        if (row.artifact_path.empty() || !fs::exists(row.artifact_path)) return std::nullopt;
        return read_file(row.artifact_path);
    };
    if (std::optional<std::string> base_out = artifact_of(base)) {
        html << "<h2>System output changes</h2>\n";
        for (const RunRecord* row : rows) {
            if (row->variant == 0) continue;
            std::optional<std::string> variant_out = artifact_of(*row);
            if (!variant_out) continue;
            diff_panel(html, "variant " + std::to_string(row->variant) + " output",
                       *base_out, *variant_out);
        }
    }

    html << "</body></html>\n";
    write_file(out_path, html.str());
}

} // namespace perturbol
