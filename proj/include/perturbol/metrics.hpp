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
#include <variant>
#include <vector>

#include "perturbol/error.hpp"

namespace perturbol {

/// Exact rational arithmetic for the robustness averages (small denominators:
/// products of group sizes and corpus size).
class Rational {
public:
    Rational() = default;
    Rational(long long num, long long den);
    static Rational from_int(long long v) { return Rational(v, 1); }

    long long num() const { return num_; }
    long long den() const { return den_; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Rational operator+(const Rational& other) const;
    Rational operator/(long long divisor) const;
    bool operator==(const Rational& other) const {
        return num_ == other.num_ && den_ == other.den_;
    }
    bool operator<(const Rational& other) const;

private:
    long long num_ = 0;
    long long den_ = 1;
};

struct Missing {
    bool operator==(const Missing&) const { return true; }
};

/// A checker value: boolean, numeric, or missing.
using MetricValue = std::variant<bool, double, Missing>;

bool is_missing(const MetricValue& value);
std::string metric_value_to_string(const MetricValue& value);
MetricValue metric_value_from_string(std::string_view text);

/// Ordered metric-id -> value map for one system output.
struct MetricVector {
    std::vector<std::string> ids;
    std::vector<MetricValue> values;

    void set(const std::string& id, MetricValue value);
    const MetricValue* find(std::string_view id) const;
};

/// The 12 checker ids of the default metric set.
const std::vector<std::string>& default_metric_ids();

enum class MissingPolicy { Change, NoChange };

struct ComparisonPolicy {
    std::map<std::string, double> numeric_tolerance; // default 0: exact inequality
    MissingPolicy missing_vs_present = MissingPolicy::Change;
    // missing vs missing is always NoChange

    double tolerance_for(const std::string& id) const {
        auto it = numeric_tolerance.find(id);
        return it == numeric_tolerance.end() ? 0.0 : it->second;
    }
};

/// One comparison row: per-metric change indicators plus the any-change OR.
struct ChangeRow {
    long long group = 0;        // i
    long long variant = 0;      // j >= 1
    std::string method_id;
    std::string category;
    std::vector<int> deltas;    // aligned with the metric ids of the run
    int any = 0;
};

/// delta indicators for one variant against its group's unperturbed base.
/// Throws MetricSetMismatch when the id sets differ.
ChangeRow change_indicator(const MetricVector& base, const MetricVector& variant,
                           const ComparisonPolicy& policy = {});

struct ConditionalRate {
    std::size_t inputs_with_method = 0; // |I_D|
    Rational any;                       // delta_bar_D
    std::vector<Rational> per_metric;   // delta_bar_{D,m}
};

struct InputRate {
    long long group = 0;
    std::size_t variants = 0; // n(i)
    Rational any;             // delta_bar_i
    std::vector<Rational> per_metric;
};

struct RobustnessAggregate {
    std::vector<std::string> metric_ids;
    std::size_t inputs = 0; // N
    Rational any;           // delta_bar
    std::vector<Rational> per_metric;            // delta_bar_m
    std::map<std::string, ConditionalRate> per_method;
    std::map<std::string, ConditionalRate> per_category;
    std::vector<InputRate> per_input;
};

/// All robustness averages. n(i) defaults to the number of rows per group;
/// pass `group_sizes` when the benchmark manifest knows better. Throws
/// EmptyDataset on no rows.
RobustnessAggregate aggregate(const std::vector<ChangeRow>& rows,
                              const std::vector<std::string>& metric_ids,
                              const std::map<long long, std::size_t>& group_sizes = {});

} // namespace perturbol
