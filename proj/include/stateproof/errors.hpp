// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stateproof {

enum class ErrorCode {
    EmptyInput,
    IndexOutOfRange,
    EmptyValue,
    InvalidProof,
    BrokenLinkage,
    LeafMismatch,
    EmptyAccumulator,
    InconsistentLog,
    LinkageViolation,
    NumberGap,
    OutOfRange,
    MalformedChange,
    UnknownBlock,
    UnknownChain,
    InvalidConfig,
};

std::string_view to_string(ErrorCode code) noexcept;

//! Domain error carrying a stable code. Operations throw it for the error
//! cases listed in their contracts; verification functions return false or
//! an empty result instead.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error{std::string{to_string(code)} + ": " + what}, code_{code} {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace stateproof
