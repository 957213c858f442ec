// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#include <stateproof/hashing.hpp>
#include <stateproof/mimc.hpp>

#include <string_view>

namespace stateproof::mimc {

namespace {

using Limbs = Fr::Limbs;
__extension__ typedef unsigned __int128 u128;

constexpr Limbs kModulus = {0x43e1f593f0000001ULL, 0x2833e84879b97091ULL, 0xb85045b68181585dULL,
                            0x30644e72e131a029ULL};
constexpr size_t kRounds = 91;
constexpr std::string_view kSeed = "mimc";

constexpr bool geq(const Limbs& a, const Limbs& b) {
    for (int i = 3; i >= 0; --i) {
        if (a[static_cast<size_t>(i)] != b[static_cast<size_t>(i)])
            return a[static_cast<size_t>(i)] > b[static_cast<size_t>(i)];
    }
    return true;
}

constexpr Limbs sub(const Limbs& a, const Limbs& b) {
    Limbs out{};
    uint64_t borrow = 0;
    for (size_t i = 0; i < 4; ++i) {
        const u128 diff = static_cast<u128>(a[i]) - b[i] - borrow;
        out[i] = static_cast<uint64_t>(diff);
        borrow = static_cast<uint64_t>(diff >> 127);
    }
    return out;
}

// a, b < p; p < 2^254 so the sum cannot overflow 256 bits.
constexpr Limbs add_mod(const Limbs& a, const Limbs& b) {
    Limbs out{};
    uint64_t carry = 0;
    for (size_t i = 0; i < 4; ++i) {
        const u128 s = static_cast<u128>(a[i]) + b[i] + carry;
        out[i] = static_cast<uint64_t>(s);
        carry = static_cast<uint64_t>(s >> 64);
    }
    return geq(out, kModulus) ? sub(out, kModulus) : out;
}

// -p^{-1} mod 2^64 via Newton iteration.
constexpr uint64_t neg_inverse() {
    uint64_t x = 1;
    for (int i = 0; i < 6; ++i) x *= 2 - kModulus[0] * x;
    return ~x + 1;
}

// R^2 mod p with R = 2^256, by repeated doubling of 1.
constexpr Limbs r_squared() {
    Limbs r{1, 0, 0, 0};
    for (int i = 0; i < 512; ++i) r = add_mod(r, r);
    return r;
}

constexpr uint64_t kInv = neg_inverse();
constexpr Limbs kR2 = r_squared();

// Montgomery product a*b*R^{-1} mod p (CIOS).
Limbs mont_mul(const Limbs& a, const Limbs& b) noexcept {
    uint64_t t[6] = {};
    for (size_t i = 0; i < 4; ++i) {
        uint64_t carry = 0;
        for (size_t j = 0; j < 4; ++j) {
            const u128 acc = static_cast<u128>(a[j]) * b[i] + t[j] + carry;
            t[j] = static_cast<uint64_t>(acc);
            carry = static_cast<uint64_t>(acc >> 64);
        }
        u128 acc = static_cast<u128>(t[4]) + carry;
        t[4] = static_cast<uint64_t>(acc);
        t[5] = static_cast<uint64_t>(acc >> 64);

        const uint64_t m = t[0] * kInv;
        acc = static_cast<u128>(m) * kModulus[0] + t[0];
        carry = static_cast<uint64_t>(acc >> 64);
        for (size_t j = 1; j < 4; ++j) {
            acc = static_cast<u128>(m) * kModulus[j] + t[j] + carry;
            t[j - 1] = static_cast<uint64_t>(acc);
            carry = static_cast<uint64_t>(acc >> 64);
        }
        acc = static_cast<u128>(t[4]) + carry;
        t[3] = static_cast<uint64_t>(acc);
        t[4] = t[5] + static_cast<uint64_t>(acc >> 64);
    }
    Limbs out{t[0], t[1], t[2], t[3]};
    if (t[4] != 0 || geq(out, kModulus)) out = sub(out, kModulus);
    return out;
}

Limbs limbs_from_be(ByteView be) {
    Limbs out{};
    const size_t n = be.size();
    for (size_t i = 0; i < n; ++i) {
        const size_t bit = (n - 1 - i) * 8;
        out[bit / 64] |= static_cast<uint64_t>(be[i]) << (bit % 64);
    }
    while (geq(out, kModulus)) out = sub(out, kModulus);
    return out;
}

struct Constants {
    std::array<Fr, kRounds> rounds{};

    Constants() {
        Digest c = keccak256(kSeed);
        for (size_t i = 1; i < kRounds; ++i) {
            c = keccak256(c.view());
            rounds[i] = Fr::from_be(c.view());
        }
    }
};

const Constants& constants() {
    static const Constants kConstants;
    return kConstants;
}

}  // namespace

Fr Fr::from_u64(uint64_t v) {
    Fr out;
    out.m_ = mont_mul(Limbs{v, 0, 0, 0}, kR2);
    return out;
}

Fr Fr::from_be(ByteView be) {
    if (be.size() > 32) throw std::invalid_argument("field element wider than 32 bytes");
    Fr out;
    out.m_ = mont_mul(limbs_from_be(be), kR2);
    return out;
}

Digest Fr::to_be() const {
    const Limbs plain = mont_mul(m_, Limbs{1, 0, 0, 0});
    Digest out;
    for (size_t i = 0; i < 32; ++i) {
        const size_t bit = (31 - i) * 8;
        out.bytes[i] = static_cast<uint8_t>(plain[bit / 64] >> (bit % 64));
    }
    return out;
}

Fr operator+(const Fr& a, const Fr& b) {
    Fr out;
    out.m_ = add_mod(a.m_, b.m_);
    return out;
}

Fr operator*(const Fr& a, const Fr& b) {
    Fr out;
    out.m_ = mont_mul(a.m_, b.m_);
    return out;
}

Digest modulus() {
    Digest out;
    for (size_t i = 0; i < 32; ++i) {
        const size_t bit = (31 - i) * 8;
        out.bytes[i] = static_cast<uint8_t>(kModulus[bit / 64] >> (bit % 64));
    }
    return out;
}

Digest round_constant(size_t i) { return constants().rounds.at(i).to_be(); }

Fr permute(const Fr& x, const Fr& key) {
    const auto& c = constants().rounds;
    Fr r;
    for (size_t i = 0; i < kRounds; ++i) {
        const Fr t = (i == 0) ? x + key : r + key + c[i];
        const Fr t2 = t * t;
        const Fr t4 = t2 * t2;
        r = t4 * t2 * t;
    }
    return r + key;
}

Digest hash_bytes(ByteView data) {
    constexpr size_t kChunk = 31;
    Fr r;
    auto absorb = [&r](const Fr& x) { r = r + x + permute(x, r); };
    for (size_t off = 0; off < data.size(); off += kChunk) {
        absorb(Fr::from_be(data.subspan(off, std::min(kChunk, data.size() - off))));
    }
    absorb(Fr::from_u64(data.size()));
    return r.to_be();
}

}  // namespace stateproof::mimc
