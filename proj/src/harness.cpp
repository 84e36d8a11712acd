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

#include "perturbol/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "perturbol/convert.hpp"
#include "perturbol/lexer.hpp"
#include "perturbol/rng.hpp"
#include "perturbol/structure.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace perturbol {

namespace {

// ------------------------------------------------------------ subprocesses

struct CommandResult {
    std::string output;
    int exit_code = -1;
    bool timed_out = false;
};

CommandResult run_command_capture(const std::string& command, const std::string& input,
                                  double timeout_seconds) {
    static const bool sigpipe_ignored = [] {
        std::signal(SIGPIPE, SIG_IGN);
        return true;
    }();
    (void)sigpipe_ignored;

    int in_pipe[2], out_pipe[2];
    if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0)
        fail(ErrorCode::TranslationError, "pipe() failed");

    const pid_t pid = fork();
    if (pid < 0) fail(ErrorCode::TranslationError, "fork() failed");
    if (pid == 0) {
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        close(in_pipe[0]);
        close(in_pipe[1]);
        close(out_pipe[0]);
        close(out_pipe[1]);
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    close(in_pipe[0]);
    close(out_pipe[1]);

    // inputs are small (paragraph-sized); write them up front
    std::size_t written = 0;
    while (written < input.size()) {
        ssize_t n = write(in_pipe[1], input.data() + written, input.size() - written);
        if (n <= 0) break;
        written += static_cast<std::size_t>(n);
    }
    close(in_pipe[1]);

    CommandResult result;
    const auto deadline =
        std::chrono::steady_clock::now() +
        std::chrono::milliseconds(static_cast<long long>(timeout_seconds * 1000));
    char buffer[4096];
    while (true) {
        const auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            result.timed_out = true;
            kill(pid, SIGKILL);
            break;
        }
        struct pollfd pfd {out_pipe[0], POLLIN, 0};
        const int remaining_ms = static_cast<int>(
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count());
        const int rv = poll(&pfd, 1, std::max(1, remaining_ms));
        if (rv <= 0) continue;
        const ssize_t n = read(out_pipe[0], buffer, sizeof buffer);
        if (n < 0) continue;
        if (n == 0) break;
        result.output.append(buffer, static_cast<std::size_t>(n));
    }
    close(out_pipe[0]);
    int status = 0;
    waitpid(pid, &status, 0);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

// ------------------------------------------------------------------ stubs

std::string stub_constant() {
    return "public class Translation { public void run() { } }\n";
}

std::string stub_echo_hash(const std::string& input) {
    std::ostringstream out;
    out << "// digest:" << std::hex << hash_text(input) << "\n";
    out << "public class Translation { /* " << input.size() << " bytes */ }\n";
    return out.str();
}

// Uppercases everything except identifier words, after normalizing away
// whitespace, line structure, comments, keywords, and periods. Sensitive to
// renaming and identifier-case changes only.
std::string stub_case_sensitive_echo(const std::string& input, SourceForm form) {
    CobolUnit unit = unit_from_text(input, form);
    if (unit.form == SourceForm::Fixed) unit = fixed_to_free(unit).first;
    std::string out;
    for (const UnitToken& ut : unit_tokens(unit)) {
        const Token& t = ut.token;
        if (t.kind == TokenKind::Period) continue;
        if (t.kind == TokenKind::Word && is_reserved_word(t.text)) continue;
        if (!out.empty()) out += ' ';
        out += t.kind == TokenKind::Word ? t.text : to_upper(t.text);
    }
    out += '\n';
    return out;
}

} // namespace

SystemAdapter parse_system_spec(const std::string& spec) {
    SystemAdapter adapter;
    if (spec.rfind("stub:", 0) == 0) {
        adapter.kind = AdapterKind::BuiltinStub;
        adapter.config = spec.substr(5);
    } else if (spec.rfind("http://", 0) == 0 || spec.rfind("https://", 0) == 0) {
        adapter.kind = AdapterKind::HttpEndpoint;
        adapter.config = spec;
    } else {
        adapter.kind = AdapterKind::ExternalCommand;
        adapter.config = spec;
    }
    return adapter;
}

std::string run_system(const SystemAdapter& adapter, const std::string& input_text,
                       SourceForm form) {
    switch (adapter.kind) {
    case AdapterKind::BuiltinStub: {
        try {
            if (adapter.config == "constant") return stub_constant();
            if (adapter.config == "echo-hash") return stub_echo_hash(input_text);
            if (adapter.config == "case-sensitive-echo")
                return stub_case_sensitive_echo(input_text, form);
        } catch (const std::exception& e) {
            fail(ErrorCode::TranslationError, std::string("stub failed: ") + e.what());
        }
        fail(ErrorCode::TranslationError, "unknown stub " + adapter.config);
    }
    case AdapterKind::ExternalCommand: {
        CommandResult result =
            run_command_capture(adapter.config, input_text, adapter.timeout_seconds);
        if (result.timed_out)
            fail(ErrorCode::TranslationError, "command timed out: " + adapter.config);
        if (result.exit_code != 0)
            fail(ErrorCode::TranslationError,
                 "command exited " + std::to_string(result.exit_code));
        return result.output;
    }
    case AdapterKind::HttpEndpoint: {
        // delegate to curl so https endpoints work without extra linkage
        std::string cmd = "curl -sS --fail --max-time " +
                          std::to_string(static_cast<long long>(adapter.timeout_seconds)) +
                          " --data-binary @- -H 'Content-Type: text/plain' " +
                          "'" + adapter.config + "'";
        CommandResult result =
            run_command_capture(cmd, input_text, adapter.timeout_seconds + 5);
        if (result.timed_out || result.exit_code != 0)
            fail(ErrorCode::TranslationError, "http request failed: " + adapter.config);
        return result.output;
    }
    }
    fail(ErrorCode::TranslationError, "unreachable adapter kind");
}

// -------------------------------------------------------------- checkers

CheckerSet default_checker_set() {
    CheckerSet set;
    for (const std::string& id : default_metric_ids()) {
        if (id == "translated")
            set.push_back({id, "builtin:translated"});
        else if (id == "not_empty")
            set.push_back({id, "builtin:not_empty"});
        else
            set.push_back({id, "builtin:hash_bool:" + id});
    }
    return set;
}

CheckerSet load_checker_set(const std::string& path) {
    const json doc = json::parse(read_file(path));
    CheckerSet set;
    for (const json& m : doc.at("metrics"))
        set.push_back({m.at("id").get<std::string>(), m.at("adapter").get<std::string>()});
    if (set.empty()) fail(ErrorCode::BadInput, "checker set is empty: " + path);
    return set;
}

namespace {

MetricValue run_builtin_checker(const std::string& name, const std::string& output) {
    if (name == "translated") return true;
    if (name == "not_empty")
        return output.find_first_not_of(" \t\r\n") != std::string::npos;
    if (name == "len_bucket") return output.size() % 2 == 0;
    if (name == "digest")
        return static_cast<double>(hash_text(output) & ((1ull << 52) - 1));
    if (name == "constant_true") return true;
    if (name == "constant_false") return false;
    if (name.rfind("hash_bool:", 0) == 0)
        return ((hash_text(output + name.substr(10)) >> 7) & 1) != 0;
    fail(ErrorCode::CheckerFailure, "unknown builtin checker " + name);
}

class TempFile {
public:
    explicit TempFile(const std::string& content) {
        static std::atomic<unsigned> counter{0};
        path_ = (fs::temp_directory_path() /
                 ("perturbol-" + std::to_string(::getpid()) + "-" +
                  std::to_string(counter++) + ".txt"))
                    .string();
        write_file(path_, content);
    }
    ~TempFile() {
        std::error_code ec;
        fs::remove(path_, ec);
    }
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

} // namespace

MetricVector run_checkers(const CheckerSet& checkers, const std::string& input_text,
                          const std::optional<std::string>& output_text) {
    MetricVector metrics;
    if (!output_text) {
        // translation failed: translated=false, everything else missing
        for (const CheckerSpec& checker : checkers)
            metrics.set(checker.id,
                        checker.id == "translated" ? MetricValue{false} : MetricValue{Missing{}});
        return metrics;
    }
    std::optional<TempFile> input_file, output_file;
    for (const CheckerSpec& checker : checkers) {
        try {
            if (checker.adapter.rfind("builtin:", 0) == 0) {
                metrics.set(checker.id,
                            run_builtin_checker(checker.adapter.substr(8), *output_text));
                continue;
            }
            if (!input_file) {
                input_file.emplace(input_text);
                output_file.emplace(*output_text);
            }
            std::string cmd = checker.adapter + " " + input_file->path() + " " +
                              output_file->path();
            CommandResult result = run_command_capture(cmd, "", 30.0);
            if (result.timed_out || result.exit_code != 0)
                fail(ErrorCode::CheckerFailure, checker.id);
            std::string line = result.output;
            if (std::size_t nl = line.find('\n'); nl != std::string::npos)
                line.resize(nl);
            while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
                line.pop_back();
            metrics.set(checker.id, metric_value_from_string(line));
        } catch (const std::exception&) {
            metrics.set(checker.id, Missing{}); // CheckerFailure -> missing
        }
    }
    return metrics;
}

// ------------------------------------------------------------------- CSV

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> csv_split(std::string_view line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

namespace {

std::string results_header(const CheckerSet& checkers) {
    std::string line = "i,j,method_id,category";
    for (const CheckerSpec& checker : checkers) line += "," + csv_escape(checker.id);
    line += ",error";
    return line;
}

std::string result_row(const RunRecord& record, const CheckerSet& checkers) {
    std::string line = std::to_string(record.group) + "," + std::to_string(record.variant) +
                       "," + csv_escape(record.method_id) + "," + csv_escape(record.category);
    for (const CheckerSpec& checker : checkers) {
        const MetricValue* value = record.metrics.find(checker.id);
        line += ",";
        line += value ? csv_escape(metric_value_to_string(*value)) : "missing";
    }
    line += "," + csv_escape(record.error);
    return line;
}

} // namespace

void write_results_csv(const std::string& path, const CheckerSet& checkers,
                       const std::vector<RunRecord>& records) {
    std::string text = results_header(checkers) + "\n";
    for (const RunRecord& record : records) text += result_row(record, checkers) + "\n";
    write_file(path, text);
}

std::vector<RunRecord> read_results_csv(const std::string& path,
                                        std::vector<std::string>& metric_ids_out) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) fail(ErrorCode::BadInput, "empty results file");
    std::vector<std::string> header = csv_split(line);
    if (header.size() < 5 || header[0] != "i")
        fail(ErrorCode::BadInput, "unexpected results header in " + path);
    metric_ids_out.assign(header.begin() + 4, header.end() - 1);

    std::vector<RunRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields = csv_split(line);
        if (fields.size() != header.size())
            fail(ErrorCode::BadInput, "ragged results row in " + path);
        RunRecord record;
        record.group = std::stoll(fields[0]);
        record.variant = std::stoll(fields[1]);
        record.method_id = fields[2];
        record.category = fields[3];
        for (std::size_t m = 0; m < metric_ids_out.size(); ++m)
            record.metrics.set(metric_ids_out[m], metric_value_from_string(fields[4 + m]));
        record.error = fields.back();
        records.push_back(std::move(record));
    }
    return records;
}

// -------------------------------------------------------------- run loop

std::vector<RunRecord> run_benchmark(const ExpandedBenchmark& benchmark,
                                     const std::string& benchmark_dir,
                                     const SystemAdapter& adapter,
                                     const CheckerSet& checkers, const RunOptions& options) {
    const std::string artifacts_dir =
        !options.artifacts_dir.empty()
            ? options.artifacts_dir
            : (fs::path(options.results_path).parent_path() / "artifacts").string();
    fs::create_directories(artifacts_dir);

    // resume: records already in the results file keep their rows
    std::map<std::pair<long long, long long>, RunRecord> done;
    bool have_file = fs::exists(options.results_path);
    if (have_file) {
        std::vector<std::string> ids;
        for (RunRecord& record : read_results_csv(options.results_path, ids))
            done.emplace(std::make_pair(record.group, record.variant), std::move(record));
    }

    std::vector<const VariantRecord*> pending;
    for (const VariantRecord& record : benchmark.records)
        if (!done.count({record.group, record.variant})) pending.push_back(&record);

    std::ofstream out(options.results_path, std::ios::app);
    if (!out) fail(ErrorCode::IoError, "cannot open " + options.results_path);
    if (!have_file) out << results_header(checkers) << "\n" << std::flush;

    std::mutex io_mutex;
    std::atomic<std::size_t> next{0};
    std::vector<RunRecord> fresh(pending.size());

    auto worker = [&]() {
        while (true) {
            const std::size_t index = next.fetch_add(1);
            if (index >= pending.size()) return;
            const VariantRecord& variant = *pending[index];
            RunRecord record;
            record.group = variant.group;
            record.variant = variant.variant;
            record.method_id = variant.method_id;
            record.category = variant.category;
            record.artifact_path =
                (fs::path(artifacts_dir) /
                 (std::to_string(variant.group) + "_" + std::to_string(variant.variant) +
                  ".txt"))
                    .string();

            const std::string input = record_text(benchmark, variant, benchmark_dir);
            const auto t0 = std::chrono::steady_clock::now();
            std::optional<std::string> output;
            try {
                output = run_system(adapter, input, benchmark.corpus.form);
            } catch (const std::exception& e) {
                record.error = e.what();
            }
            record.metrics = run_checkers(checkers, input, output);
            record.wall_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            write_file(record.artifact_path, output ? *output : std::string());

            {
                std::lock_guard<std::mutex> lock(io_mutex);
                out << result_row(record, checkers) << "\n" << std::flush;
            }
            fresh[index] = std::move(record);
        }
    };

    const unsigned jobs = std::max(1u, options.jobs);
    std::vector<std::thread> threads;
    for (unsigned i = 1; i < jobs; ++i) threads.emplace_back(worker);
    worker();
    for (std::thread& t : threads) t.join();

    std::vector<RunRecord> all;
    for (auto& [key, record] : done) {
        record.artifact_path =
            (fs::path(artifacts_dir) /
             (std::to_string(key.first) + "_" + std::to_string(key.second) + ".txt"))
                .string();
        all.push_back(std::move(record));
    }
    for (RunRecord& record : fresh) all.push_back(std::move(record));
    std::sort(all.begin(), all.end(), [](const RunRecord& a, const RunRecord& b) {
        return a.group != b.group ? a.group < b.group : a.variant < b.variant;
    });
    return all;
}

} // namespace perturbol
