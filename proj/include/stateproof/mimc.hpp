// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>

#include <stateproof/bytes.hpp>

// MiMC-7 over the BN254 scalar field
//   p = 0x30644e72e131a029b85045b68181585d2833e84879b9709143e1f593f0000001
// with the circomlib parameterization: 91 rounds, c[0] = 0 and
// c[i] = keccak256^i("mimc") mod p for i >= 1 (each step hashes the previous
// 32-byte output). Byte strings are split into 31-byte big-endian chunks,
// followed by one element holding the byte length, and folded with the
// Miyaguchi-Preneel multi-hash r <- r + x + E_r(x) starting from r = 0.
namespace stateproof::mimc {

//! Element of the BN254 scalar field, stored in Montgomery form.
class Fr {
  public:
    using Limbs = std::array<uint64_t, 4>;  // little-endian limbs

    constexpr Fr() = default;

    static Fr from_u64(uint64_t v);
    //! Big-endian input of at most 32 bytes, reduced modulo p.
    static Fr from_be(ByteView be);

    //! Canonical big-endian value, left-padded to 32 bytes.
    Digest to_be() const;

    friend Fr operator+(const Fr& a, const Fr& b);
    friend Fr operator*(const Fr& a, const Fr& b);
    friend bool operator==(const Fr&, const Fr&) = default;

  private:
    Limbs m_{};
};

//! Big-endian modulus.
Digest modulus();

//! Round constant i in canonical form (i < 91).
Digest round_constant(size_t i);

//! Keyed permutation E_k(x).
Fr permute(const Fr& x, const Fr& key);

//! Sponge-style byte hash; output is a canonical field element.
Digest hash_bytes(ByteView data);

}  // namespace stateproof::mimc
