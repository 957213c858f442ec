// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#include <stateproof/bytes.hpp>

#include <stdexcept>

namespace stateproof {

namespace {

int nibble_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::string to_hex(ByteView bytes) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 + bytes.size() * 2);
    out += "0x";
    for (uint8_t b : bytes) {
        out += kDigits[b >> 4];
        out += kDigits[b & 0x0f];
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X')) hex.remove_prefix(2);
    Bytes out;
    out.reserve((hex.size() + 1) / 2);
    size_t i = 0;
    if (hex.size() % 2 == 1) {
        const int lo = nibble_value(hex[0]);
        if (lo < 0) throw std::invalid_argument("invalid hex digit");
        out.push_back(static_cast<uint8_t>(lo));
        i = 1;
    }
    for (; i < hex.size(); i += 2) {
        const int hi = nibble_value(hex[i]);
        const int lo = nibble_value(hex[i + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex digit");
        out.push_back(static_cast<uint8_t>((hi << 4) | lo));
    }
    return out;
}

Bytes be_trimmed(uint64_t value) {
    Bytes out;
    for (int shift = 56; shift >= 0; shift -= 8) {
        const auto b = static_cast<uint8_t>(value >> shift);
        if (b != 0 || !out.empty()) out.push_back(b);
    }
    return out;
}

Bytes trim_leading_zeros(ByteView bytes) {
    auto it = std::find_if(bytes.begin(), bytes.end(), [](uint8_t b) { return b != 0; });
    return Bytes(it, bytes.end());
}

Bytes SplitMix64::bytes(size_t n) {
    Bytes out;
    out.reserve(n + 8);
    while (out.size() < n) {
        const uint64_t word = next();
        for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(word >> (8 * i)));
    }
    out.resize(n);
    return out;
}

}  // namespace stateproof
