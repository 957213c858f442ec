// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

#include <stateproof/bytes.hpp>

// Recursive Length Prefix encoding as used by Ethereum. The decoder is
// strict: non-canonical length prefixes are rejected.
namespace stateproof::rlp {

class DecodeError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

Bytes encode(ByteView bytes);
Bytes encode_uint(uint64_t value);
//! Wraps already-encoded items into a list.
Bytes encode_list(std::span<const Bytes> items);
Bytes encode_list(std::initializer_list<Bytes> items);

struct Item {
    bool is_list{false};
    ByteView payload;  //!< string bytes, or the concatenated encodings of the list's children
    ByteView raw;      //!< full encoding including the prefix
};

//! Decodes the item at the front of `in` and advances `in` past it.
Item decode_next(ByteView& in);

//! Decodes exactly one item spanning all of `encoded`.
Item decode(ByteView encoded);

//! Decodes `encoded` as a single list and returns its children.
std::vector<Item> decode_list(ByteView encoded);

//! Children of a list item.
std::vector<Item> children(const Item& list);

//! Canonical unsigned integer from a string item (no leading zeros, at most 8 bytes).
uint64_t decode_uint(const Item& item);

}  // namespace stateproof::rlp
