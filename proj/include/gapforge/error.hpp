// Copyright 2026 The gapforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gapforge {

enum class ErrorCode {
    NonHermitian,
    DimensionMismatch,
    DuplicateIndex,
    IndexOutOfRange,
    TooLarge,
    InvalidInput,
    Dimension,
    NonConvergence,
    ConfigTooCoarse,
    ConfigInvalid,
    TooManyInvalid,
    PathTooDeep,
    NonHalting,
    ParseError,
    IoError,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonHermitian: return "NonHermitian";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::DuplicateIndex: return "DuplicateIndex";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::Dimension: return "Dimension";
        case ErrorCode::NonConvergence: return "NonConvergence";
        case ErrorCode::ConfigTooCoarse: return "ConfigTooCoarse";
        case ErrorCode::ConfigInvalid: return "ConfigInvalid";
        case ErrorCode::TooManyInvalid: return "TooManyInvalid";
        case ErrorCode::PathTooDeep: return "PathTooDeep";
        case ErrorCode::NonHalting: return "NonHalting";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

/// Every failure raised by the library. `field()` is set for parse errors and
/// names the offending JSON path, e.g. "terms[1].re".
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, std::string field = {})
        : std::runtime_error(std::string(to_string(code)) + ": " + what),
          code_(code),
          field_(std::move(field)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& field() const noexcept { return field_; }

private:
    ErrorCode code_;
    std::string field_;
};

}  // namespace gapforge
