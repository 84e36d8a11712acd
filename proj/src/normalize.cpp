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

#include "perturbol/normalize.hpp"

#include "perturbol/convert.hpp"

namespace perturbol {

std::vector<NormalToken> normal_stream(const CobolUnit& unit) {
    const CobolUnit* view = &unit;
    CobolUnit free_unit;
    if (unit.form == SourceForm::Fixed) {
        free_unit = fixed_to_free(unit).first;
        view = &free_unit;
    }
    std::vector<NormalToken> out;
    for (const UnitToken& ut : unit_tokens(*view)) {
        const Token& t = ut.token;
        out.push_back(NormalToken{
            t.kind, t.kind == TokenKind::Word ? to_upper(t.text) : t.text});
    }
    return out;
}

std::vector<std::string> non_comment_lines(const CobolUnit& unit) {
    std::vector<std::string> out;
    for (const CobolLine& line : unit.lines)
        if (line.cls != LineClass::Comment) out.push_back(line.raw);
    return out;
}

} // namespace perturbol
