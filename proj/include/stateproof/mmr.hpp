// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include <stateproof/bytes.hpp>
#include <stateproof/hashing.hpp>
#include <stateproof/header.hpp>

// Merkle Mountain Range over block hashes. The state keeps only the peaks;
// callers that want proofs keep the leaf log themselves.
//
// Root ("bagging"): left fold of the peak digests, seeded with a fixed
// sentinel, so an empty range bags to the sentinel and one peak p bags to
// digest_pair(sentinel, p).
namespace stateproof::mmr {

struct Peak {
    uint32_t height{0};
    Digest digest;

    friend bool operator==(const Peak&, const Peak&) = default;
};

//! keccak256("MMR_EMPTY_V1"), used for every hash selection.
const Digest& empty_sentinel();

Digest bag(std::span<const Peak> peaks, HashId hash_id);

struct State {
    uint64_t leaf_count{0};
    std::vector<Peak> peaks;  //!< strictly decreasing heights
    HashId hash_id{HashId::keccak256};

    friend bool operator==(const State&, const State&) = default;
};

//! The chain-link check carried by each construction step.
struct Linkage {
    Digest claimed_prev_hash;     //!< parent_hash written in the appended header
    Digest expected_parent_hash;  //!< hash of the block appended before it

    friend bool operator==(const Linkage&, const Linkage&) = default;
};

//! One replayable construction step. prior_peaks lets a verifier recompute
//! the transition without the leaf log.
struct Witness {
    uint64_t step_index{0};
    Digest prior_root;
    std::vector<Peak> prior_peaks;
    Digest appended_leaf;
    Linkage linkage;
    Digest new_root;

    friend bool operator==(const Witness&, const Witness&) = default;
};

struct Proof {
    uint64_t leaf_index{0};
    std::vector<Digest> merkle_path;  //!< bottom-up siblings inside the leaf's peak
    std::vector<Peak> peaks;          //!< full peak list when the proof was made

    friend bool operator==(const Proof&, const Proof&) = default;
};

//! Pure peak arithmetic: merges equal-height peaks right to left.
std::vector<Peak> push_leaf(std::vector<Peak> peaks, const Digest& leaf, HashId hash_id);

std::pair<State, Witness> init(const Digest& genesis_leaf, HashId hash_id = HashId::keccak256);

//! Throws Error(LeafMismatch) if leaf != header_hash(header) and
//! Error(BrokenLinkage) if header.parent_hash != prev_header_hash.
std::pair<State, Witness> append(const State& state, const Digest& leaf, const BlockHeader& header,
                                 const Digest& prev_header_hash);

//! Throws Error(EmptyAccumulator) for a state with no leaves.
Digest root(const State& state);

//! Throws Error(IndexOutOfRange), or Error(InconsistentLog) when the log does
//! not rebuild exactly the state's peaks.
Proof prove(const State& state, std::span<const Digest> leaf_log, uint64_t leaf_index);

bool verify(const Digest& root, const Digest& leaf, const Proof& proof,
            HashId hash_id = HashId::keccak256) noexcept;

struct ReplayResult {
    bool ok{true};
    std::optional<uint64_t> failing_step;  //!< position in the chain
    std::string reason;

    explicit operator bool() const noexcept { return ok; }
};

//! Re-checks every step: ordering, root continuity, linkage, and the
//! recomputed transition.
ReplayResult replay_witnesses(std::span<const Witness> chain, HashId hash_id = HashId::keccak256);

void to_json(nlohmann::json& j, const Peak& p);
void from_json(const nlohmann::json& j, Peak& p);
void to_json(nlohmann::json& j, const State& s);
void from_json(const nlohmann::json& j, State& s);
void to_json(nlohmann::json& j, const Witness& w);
void from_json(const nlohmann::json& j, Witness& w);
void to_json(nlohmann::json& j, const Proof& p);
void from_json(const nlohmann::json& j, Proof& p);

}  // namespace stateproof::mmr
