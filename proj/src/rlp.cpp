// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#include <stateproof/rlp.hpp>

namespace stateproof::rlp {

namespace {

void append_length(Bytes& out, size_t length, uint8_t short_base, uint8_t long_base) {
    if (length < 56) {
        out.push_back(static_cast<uint8_t>(short_base + length));
        return;
    }
    const Bytes len = be_trimmed(length);
    out.push_back(static_cast<uint8_t>(long_base + len.size()));
    out.insert(out.end(), len.begin(), len.end());
}

size_t read_length(ByteView& in, size_t length_of_length) {
    if (length_of_length > 8 || in.size() < length_of_length) throw DecodeError("truncated length prefix");
    if (in[0] == 0) throw DecodeError("length with leading zero");
    size_t length = 0;
    for (size_t i = 0; i < length_of_length; ++i) length = (length << 8) | in[i];
    in = in.subspan(length_of_length);
    if (length < 56) throw DecodeError("long form used for short length");
    return length;
}

}  // namespace

Bytes encode(ByteView bytes) {
    if (bytes.size() == 1 && bytes[0] < 0x80) return Bytes{bytes[0]};
    Bytes out;
    out.reserve(bytes.size() + 9);
    append_length(out, bytes.size(), 0x80, 0xb7);
    out.insert(out.end(), bytes.begin(), bytes.end());
    return out;
}

Bytes encode_uint(uint64_t value) { return encode(be_trimmed(value)); }

Bytes encode_list(std::span<const Bytes> items) {
    size_t total = 0;
    for (const auto& item : items) total += item.size();
    Bytes out;
    out.reserve(total + 9);
    append_length(out, total, 0xc0, 0xf7);
    for (const auto& item : items) out.insert(out.end(), item.begin(), item.end());
    return out;
}

Bytes encode_list(std::initializer_list<Bytes> items) {
    return encode_list(std::span<const Bytes>{items.begin(), items.size()});
}

Item decode_next(ByteView& in) {
    if (in.empty()) throw DecodeError("unexpected end of input");
    const ByteView start = in;
    const uint8_t prefix = in[0];
    in = in.subspan(1);

    Item item;
    size_t length = 0;
    if (prefix < 0x80) {
        item.payload = start.subspan(0, 1);
        item.raw = start.subspan(0, 1);
        return item;
    } else if (prefix <= 0xb7) {
        length = prefix - 0x80u;
    } else if (prefix <= 0xbf) {
        length = read_length(in, prefix - 0xb7u);
    } else if (prefix <= 0xf7) {
        item.is_list = true;
        length = prefix - 0xc0u;
    } else {
        item.is_list = true;
        length = read_length(in, prefix - 0xf7u);
    }
    if (in.size() < length) throw DecodeError("payload exceeds input");
    item.payload = in.subspan(0, length);
    if (!item.is_list && length == 1 && item.payload[0] < 0x80) throw DecodeError("non-canonical single byte");
    in = in.subspan(length);
    item.raw = start.subspan(0, static_cast<size_t>(in.data() - start.data()));
    return item;
}

Item decode(ByteView encoded) {
    ByteView in = encoded;
    Item item = decode_next(in);
    if (!in.empty()) throw DecodeError("trailing bytes after item");
    return item;
}

std::vector<Item> children(const Item& list) {
    if (!list.is_list) throw DecodeError("expected list");
    std::vector<Item> out;
    ByteView in = list.payload;
    while (!in.empty()) out.push_back(decode_next(in));
    return out;
}

std::vector<Item> decode_list(ByteView encoded) { return children(decode(encoded)); }

uint64_t decode_uint(const Item& item) {
    if (item.is_list) throw DecodeError("expected integer, got list");
    if (item.payload.size() > 8) throw DecodeError("integer wider than 64 bits");
    if (!item.payload.empty() && item.payload[0] == 0) throw DecodeError("integer with leading zero");
    uint64_t v = 0;
    for (uint8_t b : item.payload) v = (v << 8) | b;
    return v;
}

}  // namespace stateproof::rlp
