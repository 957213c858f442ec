// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#include <stateproof/hashing.hpp>
#include <stateproof/header.hpp>
#include <stateproof/json_util.hpp>
#include <stateproof/rlp.hpp>

namespace stateproof {

Bytes encode_header(const BlockHeader& h) {
    return rlp::encode_list({rlp::encode_uint(h.number), rlp::encode(h.parent_hash.view()),
                             rlp::encode(h.state_root.view()), rlp::encode(h.transactions_root.view()),
                             rlp::encode(h.receipts_root.view()), rlp::encode_uint(h.timestamp)});
}

namespace {

Digest digest_item(const rlp::Item& item) {
    if (item.is_list || item.payload.size() != 32) throw rlp::DecodeError("expected a 32-byte string");
    return Digest::from_view(item.payload);
}

}  // namespace

BlockHeader decode_header(ByteView encoded) {
    const auto items = rlp::decode_list(encoded);
    if (items.size() != 6) throw rlp::DecodeError("header must have 6 fields");
    BlockHeader h;
    h.number = rlp::decode_uint(items[0]);
    h.parent_hash = digest_item(items[1]);
    h.state_root = digest_item(items[2]);
    h.transactions_root = digest_item(items[3]);
    h.receipts_root = digest_item(items[4]);
    h.timestamp = rlp::decode_uint(items[5]);
    return h;
}

Digest header_hash(const BlockHeader& h) { return keccak256(encode_header(h)); }

void to_json(nlohmann::json& j, const BlockHeader& h) {
    j = {{"number", h.number},
         {"parent_hash", h.parent_hash.hex()},
         {"state_root", h.state_root.hex()},
         {"transactions_root", h.transactions_root.hex()},
         {"receipts_root", h.receipts_root.hex()},
         {"timestamp", h.timestamp}};
}

void from_json(const nlohmann::json& j, BlockHeader& h) {
    h.number = quantity_from_json(j.at("number"));
    h.parent_hash = j.at("parent_hash").get<Digest>();
    h.state_root = j.at("state_root").get<Digest>();
    h.transactions_root = j.at("transactions_root").get<Digest>();
    h.receipts_root = j.at("receipts_root").get<Digest>();
    h.timestamp = quantity_from_json(j.at("timestamp"));
}

}  // namespace stateproof
