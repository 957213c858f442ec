// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#include <stateproof/hashing.hpp>

#include <bit>
#include <cstring>

namespace stateproof {

namespace {

constexpr uint64_t kRoundConstants[24] = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL, 0x8000000080008000ULL,
    0x000000000000808bULL, 0x0000000080000001ULL, 0x8000000080008081ULL, 0x8000000000008009ULL,
    0x000000000000008aULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL, 0x8000000000008003ULL,
    0x8000000000008002ULL, 0x8000000000000080ULL, 0x000000000000800aULL, 0x800000008000000aULL,
    0x8000000080008081ULL, 0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL,
};

// rho offsets and pi lane order, walked along the pi cycle starting at lane 1
constexpr int kRho[24] = {1, 3, 6, 10, 15, 21, 28, 36, 45, 55, 2, 14, 27, 41, 56, 8, 25, 43, 62, 18, 39, 61, 20, 44};
constexpr int kPi[24] = {10, 7, 11, 17, 18, 3, 5, 16, 8, 21, 24, 4, 15, 23, 19, 13, 12, 2, 20, 14, 22, 9, 6, 1};

constexpr size_t kRate = 136;  // 1088-bit rate for a 256-bit output

void keccak_f1600(uint64_t st[25]) noexcept {
    uint64_t bc[5];
    for (uint64_t rc : kRoundConstants) {
        // theta
        for (int i = 0; i < 5; ++i) bc[i] = st[i] ^ st[i + 5] ^ st[i + 10] ^ st[i + 15] ^ st[i + 20];
        for (int i = 0; i < 5; ++i) {
            const uint64_t t = bc[(i + 4) % 5] ^ std::rotl(bc[(i + 1) % 5], 1);
            for (int j = 0; j < 25; j += 5) st[j + i] ^= t;
        }
        // rho + pi
        uint64_t t = st[1];
        for (int i = 0; i < 24; ++i) {
            const int j = kPi[i];
            const uint64_t tmp = st[j];
            st[j] = std::rotl(t, kRho[i]);
            t = tmp;
        }
        // chi
        for (int j = 0; j < 25; j += 5) {
            for (int i = 0; i < 5; ++i) bc[i] = st[j + i];
            for (int i = 0; i < 5; ++i) st[j + i] ^= (~bc[(i + 1) % 5]) & bc[(i + 2) % 5];
        }
        // iota
        st[0] ^= rc;
    }
}

void absorb_block(uint64_t st[25], const uint8_t* block) noexcept {
    for (size_t i = 0; i < kRate / 8; ++i) {
        uint64_t lane = 0;
        for (int b = 7; b >= 0; --b) lane = (lane << 8) | block[i * 8 + static_cast<size_t>(b)];
        st[i] ^= lane;
    }
}

}  // namespace

Digest keccak256(ByteView data) {
    uint64_t st[25] = {};
    size_t offset = 0;
    while (data.size() - offset >= kRate) {
        absorb_block(st, data.data() + offset);
        keccak_f1600(st);
        offset += kRate;
    }

    uint8_t last[kRate] = {};
    const size_t rem = data.size() - offset;
    if (rem > 0) std::memcpy(last, data.data() + offset, rem);
    last[rem] ^= 0x01;
    last[kRate - 1] ^= 0x80;
    absorb_block(st, last);
    keccak_f1600(st);

    Digest out;
    for (size_t i = 0; i < 4; ++i) {
        for (size_t b = 0; b < 8; ++b) out.bytes[i * 8 + b] = static_cast<uint8_t>(st[i] >> (8 * b));
    }
    return out;
}

}  // namespace stateproof
