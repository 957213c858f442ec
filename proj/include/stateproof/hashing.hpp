// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <stateproof/bytes.hpp>

namespace stateproof {

//! Hash algorithm selector. Every digest-producing operation takes one.
enum class HashId {
    keccak256,    //!< Ethereum Keccak-256 (original 0x01 padding, not NIST SHA3-256)
    mimc_sponge,  //!< MiMC-7 over the BN254 scalar field, see mimc.hpp
};

std::string_view to_string(HashId id) noexcept;

//! Parses "keccak256" / "mimc_sponge"; throws std::invalid_argument otherwise.
HashId parse_hash_id(std::string_view name);

Digest keccak256(ByteView data);
inline Digest keccak256(std::string_view s) {
    return keccak256(ByteView{reinterpret_cast<const uint8_t*>(s.data()), s.size()});
}

Digest mimc_sponge(ByteView data);

Digest digest(HashId id, ByteView data);

//! digest(id, left || right). Order matters.
Digest digest_pair(HashId id, const Digest& left, const Digest& right);

struct BenchRow {
    HashId hash{HashId::keccak256};
    size_t input_size{0};
    size_t iterations{0};
    uint64_t total_ns{0};
    double throughput_bps{0};
    Digest last_digest;
};

struct BenchReport {
    std::vector<BenchRow> rows;

    //! CSV with header `hash,input_size,iterations,total_ns,throughput_bps,last_digest_hex`,
    //! preceded by a `#` comment line stating the numbers are native CPU throughput.
    std::string to_csv() const;
};

//! Times `iterations` hashes of one seeded input per (hash, size) pair. Each row
//! is timed three times on a monotonic clock and the median is reported.
//! The input for a given size is seeded_bytes(seed, size), so last_digest is
//! reproducible from the seed alone.
BenchReport bench_hashes(std::span<const HashId> hashes, std::span<const size_t> input_sizes,
                         size_t iterations, uint64_t seed = 42);

}  // namespace stateproof
