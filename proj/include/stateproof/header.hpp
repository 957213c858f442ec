// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include <json.hpp>

#include <stateproof/bytes.hpp>

namespace stateproof {

//! Simplified block header: the three trie roots plus chain linkage.
struct BlockHeader {
    uint64_t number{0};
    Digest parent_hash;
    Digest state_root;
    Digest transactions_root;
    Digest receipts_root;
    uint64_t timestamp{0};

    friend bool operator==(const BlockHeader&, const BlockHeader&) = default;
};

//! RLP [number, parent_hash, state_root, transactions_root, receipts_root, timestamp].
Bytes encode_header(const BlockHeader& h);

//! Strict inverse of encode_header; throws rlp::DecodeError.
BlockHeader decode_header(ByteView encoded);

//! keccak256(encode_header(h)), independent of any trie hash selection.
Digest header_hash(const BlockHeader& h);

void to_json(nlohmann::json& j, const BlockHeader& h);
void from_json(const nlohmann::json& j, BlockHeader& h);

}  // namespace stateproof
