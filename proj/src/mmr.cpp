// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#include <stateproof/errors.hpp>
#include <stateproof/json_util.hpp>
#include <stateproof/merkle.hpp>
#include <stateproof/mmr.hpp>

namespace stateproof::mmr {

const Digest& empty_sentinel() {
    static const Digest sentinel = keccak256(std::string_view{"MMR_EMPTY_V1"});
    return sentinel;
}

Digest bag(std::span<const Peak> peaks, HashId hash_id) {
    Digest acc = empty_sentinel();
    for (const auto& p : peaks) acc = digest_pair(hash_id, acc, p.digest);
    return acc;
}

std::vector<Peak> push_leaf(std::vector<Peak> peaks, const Digest& leaf, HashId hash_id) {
    Peak carry{0, leaf};
    while (!peaks.empty() && peaks.back().height == carry.height) {
        carry = Peak{carry.height + 1, digest_pair(hash_id, peaks.back().digest, carry.digest)};
        peaks.pop_back();
    }
    peaks.push_back(carry);
    return peaks;
}

std::pair<State, Witness> init(const Digest& genesis_leaf, HashId hash_id) {
    State s{1, {Peak{0, genesis_leaf}}, hash_id};
    Witness w;
    w.step_index = 0;
    w.prior_root = empty_sentinel();
    w.appended_leaf = genesis_leaf;
    w.new_root = root(s);
    return {std::move(s), std::move(w)};
}

std::pair<State, Witness> append(const State& state, const Digest& leaf, const BlockHeader& header,
                                 const Digest& prev_header_hash) {
    if (leaf != header_hash(header))
        throw Error(ErrorCode::LeafMismatch, "leaf is not the hash of block " + std::to_string(header.number));
    if (header.parent_hash != prev_header_hash)
        throw Error(ErrorCode::BrokenLinkage, "block " + std::to_string(header.number) +
                                                  " does not extend the last appended block");
    Witness w;
    w.step_index = state.leaf_count;
    w.prior_root = state.leaf_count == 0 ? empty_sentinel() : root(state);
    w.prior_peaks = state.peaks;
    w.appended_leaf = leaf;
    w.linkage = {header.parent_hash, prev_header_hash};

    State next{state.leaf_count + 1, push_leaf(state.peaks, leaf, state.hash_id), state.hash_id};
    w.new_root = root(next);
    return {std::move(next), std::move(w)};
}

Digest root(const State& state) {
    if (state.leaf_count == 0) throw Error(ErrorCode::EmptyAccumulator, "MMR has no leaves");
    return bag(state.peaks, state.hash_id);
}

Proof prove(const State& state, std::span<const Digest> leaf_log, uint64_t leaf_index) {
    if (leaf_index >= state.leaf_count)
        throw Error(ErrorCode::IndexOutOfRange,
                    "leaf " + std::to_string(leaf_index) + " of " + std::to_string(state.leaf_count));
    if (leaf_log.size() != state.leaf_count)
        throw Error(ErrorCode::InconsistentLog, "leaf log length differs from leaf count");
    std::vector<Peak> rebuilt;
    for (const auto& leaf : leaf_log) rebuilt = push_leaf(std::move(rebuilt), leaf, state.hash_id);
    if (rebuilt != state.peaks) throw Error(ErrorCode::InconsistentLog, "leaf log does not rebuild the peaks");

    Proof proof;
    proof.leaf_index = leaf_index;
    proof.peaks = state.peaks;
    uint64_t offset = 0;
    for (const auto& peak : state.peaks) {
        const uint64_t width = uint64_t{1} << peak.height;
        if (leaf_index < offset + width) {
            const auto first = leaf_log.begin() + static_cast<std::ptrdiff_t>(offset);
            const auto tree = merkle::Tree::from_leaf_hashes(state.hash_id, {first, first + static_cast<std::ptrdiff_t>(width)});
            for (const auto& s : tree.prove(leaf_index - offset).siblings) proof.merkle_path.push_back(s.digest);
            break;
        }
        offset += width;
    }
    return proof;
}

bool verify(const Digest& root, const Digest& leaf, const Proof& proof, HashId hash_id) noexcept {
    uint64_t offset = 0;
    std::optional<size_t> slot;
    for (size_t i = 0; i < proof.peaks.size(); ++i) {
        const auto h = proof.peaks[i].height;
        if (h >= 64 || (i > 0 && h >= proof.peaks[i - 1].height)) return false;
        const uint64_t width = uint64_t{1} << h;
        if (!slot && proof.leaf_index < offset + width) {
            slot = i;
            if (proof.merkle_path.size() != h) return false;
            uint64_t local = proof.leaf_index - offset;
            Digest acc = leaf;
            for (const auto& sibling : proof.merkle_path) {
                acc = (local & 1) ? digest_pair(hash_id, sibling, acc) : digest_pair(hash_id, acc, sibling);
                local >>= 1;
            }
            if (acc != proof.peaks[i].digest) return false;
        }
        offset += width;
    }
    return slot.has_value() && bag(proof.peaks, hash_id) == root;
}

ReplayResult replay_witnesses(std::span<const Witness> chain, HashId hash_id) {
    auto fail = [](uint64_t step, std::string reason) { return ReplayResult{false, step, std::move(reason)}; };
    if (chain.empty()) return ReplayResult{false, std::nullopt, "empty witness chain"};

    for (uint64_t i = 0; i < chain.size(); ++i) {
        const auto& w = chain[i];
        if (w.step_index != i) return fail(i, "step index out of order");
        if (i == 0) {
            if (w.prior_root != empty_sentinel()) return fail(i, "first step does not start from the empty root");
            if (w.linkage != Linkage{}) return fail(i, "first step has no predecessor to link to");
        } else {
            if (w.prior_root != chain[i - 1].new_root) return fail(i, "prior root does not continue the chain");
            if (w.linkage.expected_parent_hash != chain[i - 1].appended_leaf)
                return fail(i, "expected parent is not the previously appended block");
        }
        if (w.linkage.claimed_prev_hash != w.linkage.expected_parent_hash) return fail(i, "broken block linkage");

        uint64_t leaves = 0;
        for (size_t k = 0; k < w.prior_peaks.size(); ++k) {
            const auto h = w.prior_peaks[k].height;
            if (h >= 64 || (k > 0 && h >= w.prior_peaks[k - 1].height)) return fail(i, "malformed prior peaks");
            leaves += uint64_t{1} << h;
        }
        if (leaves != i) return fail(i, "prior peaks do not hold step_index leaves");
        if (bag(w.prior_peaks, hash_id) != w.prior_root) return fail(i, "prior peaks do not bag to prior root");
        if (bag(push_leaf(w.prior_peaks, w.appended_leaf, hash_id), hash_id) != w.new_root)
            return fail(i, "append does not reproduce new root");
    }
    return {};
}

void to_json(nlohmann::json& j, const Peak& p) { j = {{"height", p.height}, {"digest", p.digest.hex()}}; }

void from_json(const nlohmann::json& j, Peak& p) {
    p.height = j.at("height").get<uint32_t>();
    p.digest = j.at("digest").get<Digest>();
}

void to_json(nlohmann::json& j, const State& s) {
    j = {{"leaf_count", s.leaf_count}, {"hash", s.hash_id}, {"peaks", s.peaks}};
}

void from_json(const nlohmann::json& j, State& s) {
    s.leaf_count = j.at("leaf_count").get<uint64_t>();
    s.hash_id = j.value("hash", HashId::keccak256);
    s.peaks = j.at("peaks").get<std::vector<Peak>>();
}

void to_json(nlohmann::json& j, const Witness& w) {
    j = {{"step_index", w.step_index},
         {"prior_root", w.prior_root.hex()},
         {"prior_peaks", w.prior_peaks},
         {"appended_leaf", w.appended_leaf.hex()},
         {"linkage",
          {{"claimed_prev_hash", w.linkage.claimed_prev_hash.hex()},
           {"expected_parent_hash", w.linkage.expected_parent_hash.hex()}}},
         {"new_root", w.new_root.hex()}};
}

void from_json(const nlohmann::json& j, Witness& w) {
    w.step_index = j.at("step_index").get<uint64_t>();
    w.prior_root = j.at("prior_root").get<Digest>();
    w.prior_peaks = j.at("prior_peaks").get<std::vector<Peak>>();
    w.appended_leaf = j.at("appended_leaf").get<Digest>();
    w.linkage.claimed_prev_hash = j.at("linkage").at("claimed_prev_hash").get<Digest>();
    w.linkage.expected_parent_hash = j.at("linkage").at("expected_parent_hash").get<Digest>();
    w.new_root = j.at("new_root").get<Digest>();
}

void to_json(nlohmann::json& j, const Proof& p) {
    j = {{"leaf_index", p.leaf_index}, {"merkle_path", p.merkle_path}, {"peaks", p.peaks}};
}

void from_json(const nlohmann::json& j, Proof& p) {
    p.leaf_index = j.at("leaf_index").get<uint64_t>();
    p.merkle_path = j.at("merkle_path").get<std::vector<Digest>>();
    p.peaks = j.at("peaks").get<std::vector<Peak>>();
}

}  // namespace stateproof::mmr
