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

#include <stdexcept>
#include <string>

namespace perturbol {

enum class ErrorCode {
    FixedLineTooLong,
    NotCodeLine,
    UnterminatedLiteral,
    NoProcedureDivision,
    UnknownParagraph,
    MalformedContinuation,
    UnsplittableLine,
    ScopeViolation,
    FormViolation,
    RenameCollision,
    InvalidRequest,
    LayerNoEffect,
    MetricSetMismatch,
    EmptyDataset,
    UnknownGroup,
    TranslationError,
    CheckerFailure,
    IoError,
    BadInput,
};

const char* to_string(ErrorCode code);

/// Library-wide exception carrying a stable error code plus context message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

inline const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::FixedLineTooLong: return "FixedLineTooLong";
    case ErrorCode::NotCodeLine: return "NotCodeLine";
    case ErrorCode::UnterminatedLiteral: return "UnterminatedLiteral";
    case ErrorCode::NoProcedureDivision: return "NoProcedureDivision";
    case ErrorCode::UnknownParagraph: return "UnknownParagraph";
    case ErrorCode::MalformedContinuation: return "MalformedContinuation";
    case ErrorCode::UnsplittableLine: return "UnsplittableLine";
    case ErrorCode::ScopeViolation: return "ScopeViolation";
    case ErrorCode::FormViolation: return "FormViolation";
    case ErrorCode::RenameCollision: return "RenameCollision";
    case ErrorCode::InvalidRequest: return "InvalidRequest";
    case ErrorCode::LayerNoEffect: return "LayerNoEffect";
    case ErrorCode::MetricSetMismatch: return "MetricSetMismatch";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::UnknownGroup: return "UnknownGroup";
    case ErrorCode::TranslationError: return "TranslationError";
    case ErrorCode::CheckerFailure: return "CheckerFailure";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::BadInput: return "BadInput";
    }
    return "UnknownError";
}

} // namespace perturbol
