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

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include "perturbol/methods.hpp"
#include "perturbol/methods_internal.hpp"
#include "perturbol/rng.hpp"
#include "perturbol/structure.hpp"

namespace perturbol {

namespace {

constexpr std::size_t kMaxWordLength = 30;

struct RenamePlan {
    RenameMap map;                       // declared spelling -> new name
    std::map<std::string, std::string> by_upper; // uppercase old -> new name
};

std::string truncate_word(std::string_view name, std::size_t max_len) {
    std::string out(name.substr(0, max_len));
    while (!out.empty() && out.back() == '-') out.pop_back(); // no trailing hyphen
    return out;
}

bool taken(const std::string& candidate, const std::set<std::string>& blocked) {
    return blocked.count(to_upper(candidate)) > 0;
}

std::string hex64(std::uint64_t v, std::size_t digits) {
    static const char* alphabet = "0123456789ABCDEF";
    std::string out(digits, '0');
    for (std::size_t i = 0; i < digits; ++i)
        out[digits - 1 - i] = alphabet[(v >> (4 * i)) & 0xF];
    return out;
}

} // namespace

PerturbOutcome rename_identifiers(const CobolUnit& program, RenameStyle style,
                                  RngStream& rng) {
    static const std::map<RenameStyle, std::string> ids = {
        {RenameStyle::Gibberish, "rename_gibberish"},
        {RenameStyle::Sequential, "rename_sequential"},
        {RenameStyle::HashDerived, "rename_hash"},
        {RenameStyle::Permutation, "rename_permute"},
        {RenameStyle::Suffix, "rename_suffix"},
        {RenameStyle::HyphenStrip, "rename_hyphen_strip"},
        {RenameStyle::Prefix, "rename_prefix"},
    };
    const MethodDescriptor method = *find_method(ids.at(style));
    ApplyContext context{program.form};
    return apply_method(method, program, rng, context);
}

namespace detail {

std::optional<MethodResult> rename_once(const std::string& method_id, const CobolUnit& unit,
                                        RngStream& rng) {
    std::vector<IdentifierEntry> entries = extract_data_identifiers(unit);
    std::vector<const IdentifierEntry*> targets;
    for (const IdentifierEntry& e : entries)
        if (e.origin == IdentifierOrigin::DataDivision) targets.push_back(&e);
    if (targets.empty()) return std::nullopt;

    // every word that stays in the program blocks a new name, as do reserved
    // words; names being renamed away do not
    std::set<std::string> blocked = reserved_words();
    {
        FreeView view(unit);
        std::set<std::string> renamed_away;
        for (const IdentifierEntry* t : targets) renamed_away.insert(to_upper(t->name));
        for (const UnitToken& ut : view.tokens) {
            if (ut.token.kind != TokenKind::Word) continue;
            std::string up = to_upper(ut.token.text);
            if (!renamed_away.count(up)) blocked.insert(up);
        }
    }

    RenamePlan plan;
    auto add = [&](const IdentifierEntry& entry, std::string new_name) {
        plan.by_upper[to_upper(entry.name)] = new_name;
        plan.map.emplace_back(entry.name, std::move(new_name));
        blocked.insert(to_upper(plan.map.back().second));
    };

    if (method_id == "rename_permute") {
        if (targets.size() < 2) return std::nullopt; // identity is the only bijection
        std::vector<std::size_t> perm(targets.size());
        for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
        bool identity = true;
        for (int attempt = 0; attempt < kMaxTries && identity; ++attempt) {
            rng.shuffle(perm);
            identity = true;
            for (std::size_t i = 0; i < perm.size(); ++i)
                if (perm[i] != i) { identity = false; break; }
        }
        if (identity) return MethodResult{unit, std::nullopt};
        for (std::size_t i = 0; i < targets.size(); ++i)
            if (perm[i] != i) add(*targets[i], targets[perm[i]]->name);
    } else if (method_id == "rename_gibberish") {
        for (const IdentifierEntry* t : targets) {
            std::string candidate;
            for (int attempt = 0;; ++attempt) {
                if (attempt >= kMaxTries)
                    fail(ErrorCode::RenameCollision, "no fresh name for " + t->name);
                std::size_t len = rng.in_range(6, 12);
                candidate.clear();
                candidate += static_cast<char>('A' + rng.below(26));
                for (std::size_t i = 1; i < len; ++i) {
                    std::uint64_t pick = rng.below(36);
                    candidate += pick < 26 ? static_cast<char>('A' + pick)
                                           : static_cast<char>('0' + (pick - 26));
                }
                if (!taken(candidate, blocked)) break;
            }
            add(*t, candidate);
        }
    } else if (method_id == "rename_sequential") {
        std::size_t counter = 0;
        for (const IdentifierEntry* t : targets) {
            std::string candidate;
            do {
                ++counter;
                char buf[16];
                std::snprintf(buf, sizeof buf, "VAR-%04zu", counter);
                candidate = buf;
            } while (taken(candidate, blocked));
            add(*t, candidate);
        }
    } else if (method_id == "rename_hash") {
        for (const IdentifierEntry* t : targets) {
            std::uint64_t h = hash_text(to_upper(t->name));
            std::size_t digits = 7;
            std::string candidate = "H" + hex64(h, digits);
            while (taken(candidate, blocked) && digits < 16) {
                ++digits;
                candidate = "H" + hex64(h, digits);
            }
            if (taken(candidate, blocked))
                fail(ErrorCode::RenameCollision, "no fresh hash name for " + t->name);
            add(*t, candidate);
        }
    } else if (method_id == "rename_suffix" || method_id == "rename_prefix" ||
               method_id == "rename_hyphen_strip") {
        for (const IdentifierEntry* t : targets) {
            std::string candidate;
            if (method_id == "rename_suffix") {
                std::string base = t->name;
                if (base.size() + 2 > kMaxWordLength)
                    base = truncate_word(base, kMaxWordLength - 2);
                candidate = base + "-X";
            } else if (method_id == "rename_prefix") {
                std::string base = t->name;
                if (base.size() + 2 > kMaxWordLength)
                    base = truncate_word(base, kMaxWordLength - 2);
                candidate = "R-" + base;
            } else {
                candidate = t->name;
                candidate.erase(std::remove(candidate.begin(), candidate.end(), '-'),
                                candidate.end());
                if (candidate == t->name) continue; // no hyphens: identifier kept
            }
            if (taken(candidate, blocked))
                fail(ErrorCode::RenameCollision, t->name + " -> " + candidate);
            add(*t, candidate);
        }
        if (plan.map.empty()) return MethodResult{unit, std::nullopt};
    } else {
        fail(ErrorCode::InvalidRequest, "unknown rename method " + method_id);
    }

    // rewrite every occurrence of the renamed identifiers
    CobolUnit out = unit;
    std::vector<SpliceEdit> edits;
    for (const IdentifierEntry& e : entries) {
        if (e.origin != IdentifierOrigin::DataDivision) continue;
        auto it = plan.by_upper.find(to_upper(e.name));
        if (it == plan.by_upper.end()) continue;
        for (const Occurrence& occ : e.occurrences)
            edits.push_back(SpliceEdit{occ.line, occ.begin, occ.end, it->second});
    }
    apply_edits(out, std::move(edits));
    if (out == unit) return MethodResult{unit, std::nullopt};
    return MethodResult{std::move(out), std::move(plan.map)};
}

} // namespace detail

} // namespace perturbol
