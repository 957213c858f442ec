// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#include <stateproof/hashing.hpp>
#include <stateproof/mimc.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <stdexcept>

namespace stateproof {

std::string_view to_string(HashId id) noexcept {
    switch (id) {
        case HashId::keccak256:
            return "keccak256";
        case HashId::mimc_sponge:
            return "mimc_sponge";
    }
    return "unknown";
}

HashId parse_hash_id(std::string_view name) {
    if (name == "keccak256") return HashId::keccak256;
    if (name == "mimc_sponge") return HashId::mimc_sponge;
    throw std::invalid_argument("unknown hash id: " + std::string{name});
}

Digest mimc_sponge(ByteView data) { return mimc::hash_bytes(data); }

Digest digest(HashId id, ByteView data) {
    switch (id) {
        case HashId::keccak256:
            return keccak256(data);
        case HashId::mimc_sponge:
            return mimc_sponge(data);
    }
    throw std::invalid_argument("unknown hash id");
}

Digest digest_pair(HashId id, const Digest& left, const Digest& right) {
    uint8_t buf[64];
    std::copy(left.bytes.begin(), left.bytes.end(), buf);
    std::copy(right.bytes.begin(), right.bytes.end(), buf + 32);
    return digest(id, ByteView{buf, 64});
}

std::string BenchReport::to_csv() const {
    std::string out =
        "# native CPU throughput only; not a measure of hash cost inside a ZK circuit\n"
        "hash,input_size,iterations,total_ns,throughput_bps,last_digest_hex\n";
    char line[256];
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%s,%zu,%zu,%llu,%.1f,", std::string{to_string(r.hash)}.c_str(),
                      r.input_size, r.iterations, static_cast<unsigned long long>(r.total_ns), r.throughput_bps);
        out += line;
        out += r.last_digest.hex();
        out += '\n';
    }
    return out;
}

BenchReport bench_hashes(std::span<const HashId> hashes, std::span<const size_t> input_sizes, size_t iterations,
                         uint64_t seed) {
    if (iterations == 0) throw std::invalid_argument("iterations must be >= 1");
    using Clock = std::chrono::steady_clock;
    constexpr int kRuns = 3;

    BenchReport report;
    for (HashId id : hashes) {
        for (size_t size : input_sizes) {
            const Bytes input = seeded_bytes(seed, size);
            Digest last;
            uint64_t samples[kRuns];
            for (auto& sample : samples) {
                const auto start = Clock::now();
                for (size_t i = 0; i < iterations; ++i) last = digest(id, input);
                const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start).count();
                sample = std::max<uint64_t>(1, static_cast<uint64_t>(ns));
            }
            std::sort(std::begin(samples), std::end(samples));
            const uint64_t median = samples[kRuns / 2];

            BenchRow row;
            row.hash = id;
            row.input_size = size;
            row.iterations = iterations;
            row.total_ns = median;
            row.throughput_bps = static_cast<double>(size) * static_cast<double>(iterations) * 1e9 /
                                 static_cast<double>(median);
            row.last_digest = last;
            report.rows.push_back(row);
        }
    }
    return report;
}

}  // namespace stateproof
