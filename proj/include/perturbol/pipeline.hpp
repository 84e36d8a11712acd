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
#include <optional>
#include <string>
#include <vector>

#include "perturbol/methods.hpp"
#include "perturbol/source.hpp"

namespace perturbol {

struct PerturbRequest {
    CobolUnit input;
    MethodDescriptor method;
    SourceForm desired_output_form = SourceForm::Fixed;
    std::uint64_t seed = 0;
};

/// Outcome of one pipeline run. `terminal_node` identifies the return node of
/// the routing flowchart:
///   parse path:     8 = changed, free out;  9 = changed, fixed out (SFX)
///   non-parse path: 13 = changed, forms match; 15/16 = changed + conversion
///   unchanged:      17 = input returned verbatim; 19/20 = converted input
struct PerturbResult {
    CobolUnit output;
    bool changed = false;
    int terminal_node = 0;
    std::string method_id;
    std::optional<RenameMap> rename_map;
    bool sfx_normalized = false;
    int tries_used = 0;
};

/// Methods applicable to this unit and output form: fixed-output-only methods
/// are excluded for free output, program-only methods for paragraph units.
std::vector<MethodDescriptor> valid_methods(const CobolUnit& input,
                                            SourceForm desired_output_form);

/// One perturbation, routed by whether the method needs a free-form parse.
/// Parse-requiring methods run on free(X) and detect change there; other
/// methods run on X in its original form. When nothing changed and the forms
/// match, the output is the input, byte for byte.
PerturbResult perturb(const PerturbRequest& request);
PerturbResult perturb(const CobolUnit& input, const MethodDescriptor& method,
                      SourceForm desired_output_form, RngStream& rng);

/// Layered composition: each method must change its input (LayerNoEffect
/// otherwise); only the cumulative result is returned, and `changed` compares
/// it against the (form-converted) original.
PerturbResult perturb_layered(const CobolUnit& input,
                              const std::vector<MethodDescriptor>& methods,
                              SourceForm desired_output_form, std::uint64_t seed);

} // namespace perturbol
