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

#include "perturbol/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>

namespace perturbol {

namespace {

long long gcd_ll(long long a, long long b) {
    while (b != 0) {
        long long t = a % b;
        a = b;
        b = t;
    }
    return a < 0 ? -a : a;
}

} // namespace

Rational::Rational(long long num, long long den) : num_(num), den_(den) {
    if (den_ == 0) fail(ErrorCode::BadInput, "rational with zero denominator");
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    long long g = gcd_ll(num_ == 0 ? den_ : num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

Rational Rational::operator+(const Rational& other) const {
    const __int128 num = static_cast<__int128>(num_) * other.den_ +
                         static_cast<__int128>(other.num_) * den_;
    const __int128 den = static_cast<__int128>(den_) * other.den_;
    const __int128 g128 = [](__int128 a, __int128 b) {
        if (a < 0) a = -a;
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }(num == 0 ? den : num, den);
    return Rational(static_cast<long long>(num / g128), static_cast<long long>(den / g128));
}

Rational Rational::operator/(long long divisor) const {
    return Rational(num_, den_ * divisor);
}

bool Rational::operator<(const Rational& other) const {
    return static_cast<__int128>(num_) * other.den_ <
           static_cast<__int128>(other.num_) * den_;
}

bool is_missing(const MetricValue& value) {
    return std::holds_alternative<Missing>(value);
}

std::string metric_value_to_string(const MetricValue& value) {
    if (std::holds_alternative<Missing>(value)) return "missing";
    if (const bool* b = std::get_if<bool>(&value)) return *b ? "true" : "false";
    const double d = std::get<double>(value);
    if (d == std::floor(d) && std::abs(d) < 1e15) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.0f", d);
        return buf;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

MetricValue metric_value_from_string(std::string_view text) {
    if (text == "true" || text == "True") return true;
    if (text == "false" || text == "False") return false;
    if (text == "missing" || text.empty()) return Missing{};
    double d = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        fail(ErrorCode::BadInput, "unparsable metric value: " + std::string(text));
    return d;
}

void MetricVector::set(const std::string& id, MetricValue value) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] == id) {
            values[i] = value;
            return;
        }
    }
    ids.push_back(id);
    values.push_back(value);
}

const MetricValue* MetricVector::find(std::string_view id) const {
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (ids[i] == id) return &values[i];
    return nullptr;
}

const std::vector<std::string>& default_metric_ids() {
    static const std::vector<std::string> ids = {
        "parsable", "translated", "not_empty", "non_empty_exec", "not_eq_sig",
        "proc_invoke_pass", "var_acc_pass", "sql", "file", "compilation_passed",
        "uninjected_compilation_passed", "laj_pass",
    };
    return ids;
}

namespace {

int value_changed(const MetricValue& base, const MetricValue& variant, double tolerance,
                  const ComparisonPolicy& policy) {
    const bool base_missing = is_missing(base);
    const bool variant_missing = is_missing(variant);
    if (base_missing && variant_missing) return 0;
    if (base_missing != variant_missing)
        return policy.missing_vs_present == MissingPolicy::Change ? 1 : 0;
    if (std::holds_alternative<bool>(base) && std::holds_alternative<bool>(variant))
        return std::get<bool>(base) != std::get<bool>(variant) ? 1 : 0;
    if (std::holds_alternative<double>(base) && std::holds_alternative<double>(variant))
        return std::abs(std::get<double>(base) - std::get<double>(variant)) > tolerance ? 1 : 0;
    return 1; // type changed
}

} // namespace

ChangeRow change_indicator(const MetricVector& base, const MetricVector& variant,
                           const ComparisonPolicy& policy) {
    if (base.ids != variant.ids)
        fail(ErrorCode::MetricSetMismatch, "metric id sets differ");
    ChangeRow row;
    row.deltas.resize(base.ids.size(), 0);
    for (std::size_t m = 0; m < base.ids.size(); ++m) {
        row.deltas[m] = value_changed(base.values[m], variant.values[m],
                                      policy.tolerance_for(base.ids[m]), policy);
        row.any |= row.deltas[m];
    }
    return row;
}

RobustnessAggregate aggregate(const std::vector<ChangeRow>& rows,
                              const std::vector<std::string>& metric_ids,
                              const std::map<long long, std::size_t>& group_sizes) {
    if (rows.empty()) fail(ErrorCode::EmptyDataset, "no change rows");
    const std::size_t m_count = metric_ids.size();
    for (const ChangeRow& row : rows)
        if (row.deltas.size() != m_count)
            fail(ErrorCode::MetricSetMismatch, "row width differs from metric ids");

    std::vector<long long> groups;
    for (const ChangeRow& row : rows) groups.push_back(row.group);
    std::sort(groups.begin(), groups.end());
    groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
    const std::size_t n_inputs = groups.size();

    auto n_of = [&](long long group, std::size_t rows_in_group) -> std::size_t {
        auto it = group_sizes.find(group);
        return it == group_sizes.end() ? rows_in_group : it->second;
    };

    RobustnessAggregate agg;
    agg.metric_ids = metric_ids;
    agg.inputs = n_inputs;
    agg.any = Rational();
    agg.per_metric.assign(m_count, Rational());

    struct Bucket {
        long long sum_any = 0;
        std::vector<long long> sum_m;
        std::size_t rows_seen = 0;
    };

    std::map<long long, Bucket> by_group;
    for (const ChangeRow& row : rows) {
        Bucket& b = by_group[row.group];
        if (b.sum_m.empty()) b.sum_m.assign(m_count, 0);
        b.sum_any += row.any;
        for (std::size_t m = 0; m < m_count; ++m) b.sum_m[m] += row.deltas[m];
        ++b.rows_seen;
    }

    for (const auto& [group, bucket] : by_group) {
        const std::size_t n_i = n_of(group, bucket.rows_seen);
        InputRate input;
        input.group = group;
        input.variants = n_i;
        input.any = Rational(bucket.sum_any, static_cast<long long>(n_i));
        for (std::size_t m = 0; m < m_count; ++m)
            input.per_metric.push_back(
                Rational(bucket.sum_m[m], static_cast<long long>(n_i)));
        agg.any = agg.any + input.any;
        for (std::size_t m = 0; m < m_count; ++m)
            agg.per_metric[m] = agg.per_metric[m] + input.per_metric[m];
        agg.per_input.push_back(std::move(input));
    }
    agg.any = agg.any / static_cast<long long>(n_inputs);
    for (Rational& r : agg.per_metric) r = r / static_cast<long long>(n_inputs);

    // method- and category-conditional rates: per-input mean over the rows
    // hit by D first, then the mean over I_D
    auto conditional = [&](auto selector) {
        std::map<std::string, ConditionalRate> out;
        std::map<std::string, std::map<long long, Bucket>> hits;
        for (const ChangeRow& row : rows) {
            std::string key = selector(row);
            if (key.empty()) continue;
            Bucket& b = hits[key][row.group];
            if (b.sum_m.empty()) b.sum_m.assign(m_count, 0);
            b.sum_any += row.any;
            for (std::size_t m = 0; m < m_count; ++m) b.sum_m[m] += row.deltas[m];
            ++b.rows_seen; // v(i)
        }
        for (const auto& [key, groups_hit] : hits) {
            ConditionalRate rate;
            rate.inputs_with_method = groups_hit.size();
            rate.any = Rational();
            rate.per_metric.assign(m_count, Rational());
            for (const auto& [group, bucket] : groups_hit) {
                rate.any = rate.any + Rational(bucket.sum_any,
                                               static_cast<long long>(bucket.rows_seen));
                for (std::size_t m = 0; m < m_count; ++m)
                    rate.per_metric[m] =
                        rate.per_metric[m] +
                        Rational(bucket.sum_m[m], static_cast<long long>(bucket.rows_seen));
            }
            rate.any = rate.any / static_cast<long long>(groups_hit.size());
            for (Rational& r : rate.per_metric)
                r = r / static_cast<long long>(groups_hit.size());
            out[key] = std::move(rate);
        }
        return out;
    };

    agg.per_method = conditional([](const ChangeRow& row) { return row.method_id; });
    agg.per_category = conditional([](const ChangeRow& row) { return row.category; });
    return agg;
}

} // namespace perturbol
