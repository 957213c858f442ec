// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include <json.hpp>

#include <stateproof/bytes.hpp>
#include <stateproof/hashing.hpp>

// JSON conventions: byte strings and digests are lowercase 0x-hex strings,
// hash ids are their names, integers are plain JSON numbers.
namespace stateproof {

template <size_t N>
void to_json(nlohmann::json& j, const FixedBytes<N>& v) {
    j = v.hex();
}

template <size_t N>
void from_json(const nlohmann::json& j, FixedBytes<N>& v) {
    v = FixedBytes<N>::from_hex(j.get<std::string>());
}

inline void to_json(nlohmann::json& j, HashId id) { j = std::string{to_string(id)}; }
inline void from_json(const nlohmann::json& j, HashId& id) { id = parse_hash_id(j.get<std::string>()); }

inline nlohmann::json hex_json(ByteView bytes) { return to_hex(bytes); }
inline Bytes bytes_from_json(const nlohmann::json& j) { return from_hex(j.get<std::string>()); }

//! Accepts a JSON number or a 0x-hex quantity string.
inline uint64_t quantity_from_json(const nlohmann::json& j) {
    if (j.is_number_unsigned() || j.is_number_integer()) return j.get<uint64_t>();
    const Bytes b = from_hex(j.get<std::string>());
    const Bytes t = trim_leading_zeros(b);
    if (t.size() > 8) throw std::invalid_argument("quantity wider than 64 bits");
    uint64_t v = 0;
    for (uint8_t byte : t) v = (v << 8) | byte;
    return v;
}

}  // namespace stateproof
