// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <functional>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace stateproof {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

//! Lowercase hex with a 0x prefix.
std::string to_hex(ByteView bytes);

//! Accepts an optional 0x prefix and an odd digit count (left-padded with a zero nibble).
//! Throws std::invalid_argument on non-hex characters.
Bytes from_hex(std::string_view hex);

inline Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

inline Bytes concat(ByteView a, ByteView b) {
    Bytes out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

//! Big-endian encoding without leading zero bytes (zero encodes as empty).
Bytes be_trimmed(uint64_t value);
Bytes trim_leading_zeros(ByteView bytes);

//! Fixed-width byte string. Distinct widths are distinct types, so a
//! 20-byte address can never be passed where a 32-byte digest is expected.
template <size_t N>
struct FixedBytes {
    std::array<uint8_t, N> bytes{};

    static constexpr size_t size() noexcept { return N; }
    const uint8_t* data() const noexcept { return bytes.data(); }
    uint8_t* data() noexcept { return bytes.data(); }
    ByteView view() const noexcept { return {bytes.data(), N}; }
    uint8_t& operator[](size_t i) noexcept { return bytes[i]; }
    uint8_t operator[](size_t i) const noexcept { return bytes[i]; }

    bool is_zero() const noexcept {
        return std::all_of(bytes.begin(), bytes.end(), [](uint8_t b) { return b == 0; });
    }

    std::string hex() const { return to_hex(view()); }

    //! Exact-width parse; shorter input is left-padded with zeros, longer input throws.
    static FixedBytes from_hex(std::string_view hex) { return from_view(stateproof::from_hex(hex)); }

    static FixedBytes from_view(ByteView v) {
        if (v.size() > N) throw std::invalid_argument("fixed-width value too long");
        FixedBytes out;
        std::copy(v.begin(), v.end(), out.bytes.begin() + static_cast<std::ptrdiff_t>(N - v.size()));
        return out;
    }

    friend auto operator<=>(const FixedBytes&, const FixedBytes&) = default;
};

using Digest = FixedBytes<32>;
using Address = FixedBytes<20>;
using Bytes32 = FixedBytes<32>;

//! Deterministic 64-bit generator used for every seeded input in the repo.
//! tests/oracles/splitmix.py mirrors it.
class SplitMix64 {
  public:
    explicit SplitMix64(uint64_t seed) : state_{seed} {}

    uint64_t next() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    //! Next n bytes: each 64-bit word contributes 8 little-endian bytes.
    Bytes bytes(size_t n);

    template <size_t N>
    FixedBytes<N> fixed() {
        return FixedBytes<N>::from_view(bytes(N));
    }

    //! Uniform-ish in [0, bound); bound must be > 0.
    uint64_t below(uint64_t bound) noexcept { return next() % bound; }

  private:
    uint64_t state_;
};

inline Bytes seeded_bytes(uint64_t seed, size_t n) { return SplitMix64{seed}.bytes(n); }

}  // namespace stateproof

template <size_t N>
struct std::hash<stateproof::FixedBytes<N>> {
    size_t operator()(const stateproof::FixedBytes<N>& v) const noexcept {
        size_t h = 0;
        for (size_t i = 0; i < N && i < sizeof(size_t); ++i) h = (h << 8) | v.bytes[i];
        return h;
    }
};
