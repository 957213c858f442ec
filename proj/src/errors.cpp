// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#include <stateproof/errors.hpp>

namespace stateproof {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorCode::EmptyValue: return "EmptyValue";
        case ErrorCode::InvalidProof: return "InvalidProof";
        case ErrorCode::BrokenLinkage: return "BrokenLinkage";
        case ErrorCode::LeafMismatch: return "LeafMismatch";
        case ErrorCode::EmptyAccumulator: return "EmptyAccumulator";
        case ErrorCode::InconsistentLog: return "InconsistentLog";
        case ErrorCode::LinkageViolation: return "LinkageViolation";
        case ErrorCode::NumberGap: return "NumberGap";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::MalformedChange: return "MalformedChange";
        case ErrorCode::UnknownBlock: return "UnknownBlock";
        case ErrorCode::UnknownChain: return "UnknownChain";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
    }
    return "Unknown";
}

}  // namespace stateproof
