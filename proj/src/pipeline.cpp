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

#include "perturbol/pipeline.hpp"

#include <algorithm>

#include "perturbol/convert.hpp"
#include "perturbol/lexer.hpp"

namespace perturbol {

std::vector<MethodDescriptor> valid_methods(const CobolUnit& input,
                                            SourceForm desired_output_form) {
    MethodFilter filter;
    filter.output_form = desired_output_form;
    if (input.kind != UnitKind::Program) filter.scope = MethodScope::AnyUnit;
    return list_methods(filter);
}

namespace {

bool request_valid(const PerturbRequest& request) {
    for (const MethodDescriptor& m :
         valid_methods(request.input, request.desired_output_form))
        if (m.id == request.method.id) return true;
    return false;
}

CobolUnit convert_to(const CobolUnit& unit, SourceForm form) {
    if (unit.form == form) return unit;
    return form == SourceForm::Free ? fixed_to_free(unit).first : free_to_fixed_sfx(unit);
}

PerturbResult unchanged_result(const CobolUnit& input, SourceForm desired,
                               const MethodDescriptor& method, int tries) {
    PerturbResult result;
    result.changed = false;
    result.method_id = method.id;
    result.tries_used = tries;
    if (input.form == desired) {
        result.output = input; // byte-identical: no contamination
        result.terminal_node = 17;
    } else if (input.form == SourceForm::Free) {
        result.output = free_to_fixed_sfx(input);
        result.terminal_node = 19;
    } else {
        result.output = fixed_to_free(input).first;
        result.terminal_node = 20;
    }
    return result;
}

} // namespace

PerturbResult perturb(const CobolUnit& input, const MethodDescriptor& method,
                      SourceForm desired_output_form, RngStream& rng) {
    PerturbRequest probe{input, method, desired_output_form, rng.seed()};
    if (!request_valid(probe))
        fail(ErrorCode::InvalidRequest,
             method.id + " is not valid for this unit and output form");

    const ApplyContext context{desired_output_form};

    if (method.requires_free_parse) {
        const CobolUnit free_x =
            input.form == SourceForm::Free ? input : fixed_to_free(input).first;
        PerturbOutcome outcome = apply_method(method, free_x, rng, context);
        if (!outcome.changed)
            return unchanged_result(input, desired_output_form, method, outcome.tries_used);

        PerturbResult result;
        result.changed = true;
        result.method_id = method.id;
        result.tries_used = outcome.tries_used;
        result.rename_map = std::move(outcome.rename_map);
        if (desired_output_form == SourceForm::Free) {
            result.output = std::move(outcome.output);
            result.terminal_node = 8;
        } else {
            result.output = free_to_fixed_sfx(outcome.output);
            result.terminal_node = 9;
            if (input.form == SourceForm::Fixed && !is_sfx(input))
                result.sfx_normalized = true;
        }
        return result;
    }

    PerturbOutcome outcome = apply_method(method, input, rng, context);
    if (!outcome.changed)
        return unchanged_result(input, desired_output_form, method, outcome.tries_used);

    PerturbResult result;
    result.changed = true;
    result.method_id = method.id;
    result.tries_used = outcome.tries_used;
    result.rename_map = std::move(outcome.rename_map);
    // fixed-output-only methods emit fixed form themselves; skip the
    // conversion when the perturbed unit is already in the desired form
    result.output = convert_to(outcome.output, desired_output_form);
    if (input.form == desired_output_form)
        result.terminal_node = 13;
    else
        result.terminal_node = input.form == SourceForm::Free ? 15 : 16;
    return result;
}

PerturbResult perturb(const PerturbRequest& request) {
    RngStream rng(request.seed);
    return perturb(request.input, request.method, request.desired_output_form, rng);
}

PerturbResult perturb_layered(const CobolUnit& input,
                              const std::vector<MethodDescriptor>& methods,
                              SourceForm desired_output_form, std::uint64_t seed) {
    if (methods.empty()) fail(ErrorCode::InvalidRequest, "no methods given");
    for (std::size_t i = 0; i < methods.size(); ++i)
        for (std::size_t j = i + 1; j < methods.size(); ++j)
            if (methods[i].id == methods[j].id)
                fail(ErrorCode::InvalidRequest,
                     "layered methods must be pairwise distinct: " + methods[i].id);

    RngStream rng(seed);
    CobolUnit current = input;
    PerturbResult last;
    std::string joined_ids;
    std::optional<RenameMap> composed_map;

    for (std::size_t i = 0; i < methods.size(); ++i) {
        const MethodDescriptor& method = methods[i];
        const bool is_last = i + 1 == methods.size();
        SourceForm layer_form = is_last ? desired_output_form
                                : method.fixed_output_only ? SourceForm::Fixed
                                                           : current.form;
        last = perturb(current, method, layer_form, rng);
        if (!last.changed)
            fail(ErrorCode::LayerNoEffect, method.id + " did not change its input");
        if (last.rename_map) {
            if (!composed_map) {
                composed_map = last.rename_map;
            } else {
                for (auto& [from, to] : *composed_map) {
                    for (const auto& [mid, final_name] : *last.rename_map)
                        if (equals_ci(mid, to)) { to = final_name; break; }
                }
                for (const auto& [mid, final_name] : *last.rename_map) {
                    bool chained = std::any_of(
                        composed_map->begin(), composed_map->end(),
                        [&](const auto& p) { return equals_ci(p.second, final_name); });
                    if (!chained) composed_map->emplace_back(mid, final_name);
                }
            }
        }
        current = last.output;
        if (!joined_ids.empty()) joined_ids += '+';
        joined_ids += method.id;
    }

    PerturbResult result = std::move(last);
    result.output = std::move(current);
    result.method_id = std::move(joined_ids);
    result.rename_map = std::move(composed_map);
    result.changed =
        unit_text(result.output) != unit_text(convert_to(input, desired_output_form));
    return result;
}

} // namespace perturbol
