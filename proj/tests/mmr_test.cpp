// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#include <stateproof/errors.hpp>
#include <stateproof/json_util.hpp>
#include <stateproof/mmr.hpp>

#include <bit>
#include <set>

#include <catch_amalgamated.hpp>

#include "test_util.hpp"

namespace stateproof::mmr {

namespace {

constexpr HashId kKeccak = HashId::keccak256;

// Oracle: peak of a perfect subtree by direct recursion.
Digest perfect_root(std::span<const Digest> leaves) {
    if (leaves.size() == 1) return leaves[0];
    const size_t half = leaves.size() / 2;
    return digest_pair(kKeccak, perfect_root(leaves.subspan(0, half)), perfect_root(leaves.subspan(half)));
}

// Oracle: peaks from the binary decomposition of n, highest bit first.
std::vector<Peak> oracle_peaks(std::span<const Digest> leaves) {
    std::vector<Peak> peaks;
    size_t offset = 0;
    for (int bit = 63; bit >= 0; --bit) {
        const size_t width = size_t{1} << bit;
        if (leaves.size() & width) {
            peaks.push_back({static_cast<uint32_t>(bit), perfect_root(leaves.subspan(offset, width))});
            offset += width;
        }
    }
    return peaks;
}

struct Built {
    State state;
    std::vector<Digest> log;
    std::vector<Witness> witnesses;
    std::vector<Digest> roots;
};

Built build(const std::vector<BlockHeader>& chain) {
    Built b;
    auto [s, w] = init(header_hash(chain[0]));
    b.state = s;
    b.witnesses.push_back(w);
    b.log.push_back(header_hash(chain[0]));
    b.roots.push_back(root(s));
    for (size_t i = 1; i < chain.size(); ++i) {
        const Digest leaf = header_hash(chain[i]);
        auto [next, wi] = append(b.state, leaf, chain[i], b.log.back());
        b.state = std::move(next);
        b.witnesses.push_back(std::move(wi));
        b.log.push_back(leaf);
        b.roots.push_back(root(b.state));
    }
    return b;
}

}  // namespace

TEST_CASE("mmr: sentinel value") {
    CHECK(empty_sentinel() == keccak256(std::string_view{"MMR_EMPTY_V1"}));
    const auto v = test::load_data("keccak_vectors.json");
    for (const auto& e : v["vectors"])
        if (e["name"] == "mmr_sentinel") CHECK(empty_sentinel().hex() == e["digest"].get<std::string>());
}

TEST_CASE("mmr: init holds one leaf") {
    const Digest d = keccak256(std::string_view{"genesis"});
    const auto [s, w] = init(d);
    CHECK(s.leaf_count == 1);
    CHECK(s.peaks == std::vector<Peak>{{0, d}});
    CHECK(root(s) == digest_pair(kKeccak, empty_sentinel(), d));
    CHECK(w.prior_root == empty_sentinel());
    const std::vector<Witness> chain{w};
    CHECK(replay_witnesses(chain));
}

TEST_CASE("mmr: empty accumulator has no root") {
    try {
        (void)root(State{});
        FAIL("expected EmptyAccumulator");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyAccumulator);
    }
}

TEST_CASE("mmr: second leaf merges into one peak") {
    const auto b = build(test::header_chain(2));
    REQUIRE(b.state.peaks.size() == 1);
    CHECK(b.state.peaks[0].height == 1);
    CHECK(b.state.peaks[0].digest == digest_pair(kKeccak, b.log[0], b.log[1]));
}

TEST_CASE("mmr: eleven leaves give peaks of heights 3, 1, 0") {
    const auto b = build(test::header_chain(11));
    REQUIRE(b.state.peaks.size() == 3);
    CHECK(b.state.peaks[0].height == 3);
    CHECK(b.state.peaks[1].height == 1);
    CHECK(b.state.peaks[2].height == 0);
    const auto& p = b.state.peaks;
    CHECK(root(b.state) ==
          digest_pair(kKeccak, digest_pair(kKeccak, digest_pair(kKeccak, empty_sentinel(), p[0].digest), p[1].digest),
                      p[2].digest));

    // element 6 (1-based) sits in the height-3 peak
    const auto proof = prove(b.state, b.log, 5);
    CHECK(proof.merkle_path.size() == 3);
    CHECK(proof.peaks.size() == 3);
    CHECK(verify(root(b.state), b.log[5], proof));
}

TEST_CASE("mmr: peak-count law for n <= 256") {
    const auto chain = test::header_chain(256, 0, 31);
    const auto b = build(chain);
    std::vector<Peak> peaks;
    for (size_t n = 1; n <= 256; ++n) {
        peaks = push_leaf(std::move(peaks), b.log[n - 1], kKeccak);
        INFO("n = " << n);
        CHECK(peaks.size() == static_cast<size_t>(std::popcount(n)));
        for (size_t k = 1; k < peaks.size(); ++k) CHECK(peaks[k].height < peaks[k - 1].height);
        std::vector<uint32_t> heights;
        for (int bit = 63; bit >= 0; --bit)
            if (n & (size_t{1} << bit)) heights.push_back(static_cast<uint32_t>(bit));
        std::vector<uint32_t> got;
        for (const auto& p : peaks) got.push_back(p.height);
        CHECK(got == heights);
    }
    CHECK(b.state.peaks == oracle_peaks(b.log));
}

TEST_CASE("mmr: peaks match the decomposition oracle") {
    const auto b = build(test::header_chain(100, 0, 32));
    for (size_t n = 1; n <= 100; ++n) {
        std::vector<Peak> peaks;
        for (size_t i = 0; i < n; ++i) peaks = push_leaf(std::move(peaks), b.log[i], kKeccak);
        CHECK(peaks == oracle_peaks(std::span{b.log}.first(n)));
        CHECK(b.roots[n - 1] == bag(oracle_peaks(std::span{b.log}.first(n)), kKeccak));
    }
}

TEST_CASE("mmr: every leaf round-trips for every n <= 64") {
    const auto chain = test::header_chain(64, 0, 33);
    const auto b = build(chain);
    for (size_t n = 1; n <= 64; ++n) {
        State s{n, oracle_peaks(std::span{b.log}.first(n)), kKeccak};
        const auto log = std::span{b.log}.first(n);
        for (size_t i = 0; i < n; ++i) {
            const auto proof = prove(s, log, i);
            CHECK(verify(root(s), b.log[i], proof));
            if (n > 1) CHECK_FALSE(verify(root(s), b.log[(i + 1) % n], proof));
        }
    }
}

TEST_CASE("mmr: roots are distinct across 64 appends") {
    const auto b = build(test::header_chain(64, 0, 34));
    CHECK(std::set<Digest>(b.roots.begin(), b.roots.end()).size() == 64);
}

TEST_CASE("mmr: appends never alter old leaves") {
    const auto chain = test::header_chain(64, 0, 35);
    auto [state, w] = init(header_hash(chain[0]));
    std::vector<Digest> log{header_hash(chain[0])};
    std::vector<Peak> previous = state.peaks;
    for (size_t n = 2; n <= 64; ++n) {
        const Digest leaf = header_hash(chain[n - 1]);
        state = append(state, leaf, chain[n - 1], log.back()).first;
        log.push_back(leaf);
        for (size_t i = 0; i < n; ++i) CHECK(verify(root(state), log[i], prove(state, log, i)));
        // surviving peaks are untouched, merged ones are absorbed whole
        const size_t kept = std::min(previous.size(), state.peaks.size()) - 1;
        for (size_t k = 0; k < kept; ++k) CHECK(state.peaks[k] == previous[k]);
        previous = state.peaks;
    }
}

TEST_CASE("mmr: append checks leaf and linkage") {
    const auto chain = test::header_chain(3);
    auto [s, w] = init(header_hash(chain[0]));
    BlockHeader forged = chain[1];
    forged.parent_hash[0] ^= 1;
    try {
        (void)append(s, header_hash(forged), forged, header_hash(chain[0]));
        FAIL("expected BrokenLinkage");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BrokenLinkage);
    }
    try {
        (void)append(s, header_hash(chain[2]), chain[1], header_hash(chain[0]));
        FAIL("expected LeafMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::LeafMismatch);
    }
}

TEST_CASE("mmr: prove rejects bad index and inconsistent logs") {
    const auto b = build(test::header_chain(7));
    CHECK_THROWS_AS(prove(b.state, b.log, 7), Error);
    auto log = b.log;
    log[3][0] ^= 1;
    try {
        (void)prove(b.state, log, 0);
        FAIL("expected InconsistentLog");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InconsistentLog);
    }
    log = b.log;
    log.pop_back();
    CHECK_THROWS_AS(prove(b.state, log, 0), Error);
}

TEST_CASE("mmr: single-leaf proof") {
    const auto b = build(test::header_chain(1));
    const auto proof = prove(b.state, b.log, 0);
    CHECK(proof.merkle_path.empty());
    CHECK(proof.peaks.size() == 1);
    CHECK(verify(root(b.state), b.log[0], proof));
}

TEST_CASE("mmr: every index of a 20-leaf range verifies") {
    const auto b = build(test::header_chain(20, 500, 36));
    for (size_t i = 0; i < 20; ++i) CHECK(verify(root(b.state), b.log[i], prove(b.state, b.log, i)));
}

TEST_CASE("mmr: tampered proofs are rejected") {
    const auto b = build(test::header_chain(11, 0, 37));
    const Digest r = root(b.state);
    const auto good = prove(b.state, b.log, 5);

    auto omit = good;
    omit.peaks.erase(omit.peaks.begin() + 1);
    CHECK_FALSE(verify(r, b.log[5], omit));

    auto wrong_index = good;
    wrong_index.leaf_index = 4;
    CHECK_FALSE(verify(r, b.log[5], wrong_index));

    auto sibling = good;
    sibling.merkle_path[1][7] ^= 0x40;
    CHECK_FALSE(verify(r, b.log[5], sibling));

    auto reorder = good;
    std::swap(reorder.peaks[1], reorder.peaks[2]);
    CHECK_FALSE(verify(r, b.log[5], reorder));

    auto past_end = good;
    past_end.leaf_index = 11;
    CHECK_FALSE(verify(r, b.log[5], past_end));
}

TEST_CASE("mmr: proof from an earlier state fails against a later root") {
    const auto chain = test::header_chain(30, 0, 38);
    const auto b = build(chain);
    for (size_t n = 1; n < 30; ++n) {
        State s{n, oracle_peaks(std::span{b.log}.first(n)), kKeccak};
        const auto old = prove(s, std::span{b.log}.first(n), 0);
        CHECK(verify(b.roots[n - 1], b.log[0], old));
        CHECK_FALSE(verify(b.roots.back(), b.log[0], old));
    }
}

TEST_CASE("mmr: honest witness chain replays") {
    const auto b = build(test::header_chain(10, 0, 39));
    const auto r = replay_witnesses(b.witnesses);
    CHECK(r.ok);
    CHECK(b.witnesses.back().new_root == root(b.state));
}

TEST_CASE("mmr: altered new_root fails at that step") {
    auto b = build(test::header_chain(10, 0, 40));
    b.witnesses[4].new_root[0] ^= 1;
    const auto r = replay_witnesses(b.witnesses);
    CHECK_FALSE(r.ok);
    REQUIRE(r.failing_step);
    CHECK(*r.failing_step == 4);
}

TEST_CASE("mmr: deleting a middle witness breaks continuity") {
    auto b = build(test::header_chain(10, 0, 41));
    b.witnesses.erase(b.witnesses.begin() + 5);
    const auto r = replay_witnesses(b.witnesses);
    CHECK_FALSE(r.ok);
    REQUIRE(r.failing_step);
    CHECK(*r.failing_step == 5);
}

TEST_CASE("mmr: every single-field mutation in a 20-step chain is caught") {
    const auto b = build(test::header_chain(20, 0, 42));
    REQUIRE(replay_witnesses(b.witnesses).ok);
    size_t mutations = 0;
    auto expect_fail = [&](std::vector<Witness> chain, size_t at) {
        ++mutations;
        const auto r = replay_witnesses(chain);
        CHECK_FALSE(r.ok);
        if (r.failing_step) CHECK(*r.failing_step <= at + 1);
    };
    for (size_t i = 0; i < b.witnesses.size(); ++i) {
        INFO("step " << i);
        auto c = b.witnesses;
        c[i].step_index += 1;
        expect_fail(c, i);
        c = b.witnesses;
        c[i].prior_root[31] ^= 1;
        expect_fail(c, i);
        c = b.witnesses;
        c[i].appended_leaf[0] ^= 1;
        expect_fail(c, i);
        c = b.witnesses;
        c[i].linkage.claimed_prev_hash[5] ^= 1;
        expect_fail(c, i);
        c = b.witnesses;
        c[i].linkage.expected_parent_hash[5] ^= 1;
        expect_fail(c, i);
        c = b.witnesses;
        c[i].linkage.claimed_prev_hash[9] ^= 1;
        c[i].linkage.expected_parent_hash[9] ^= 1;
        expect_fail(c, i);
        c = b.witnesses;
        c[i].new_root[16] ^= 1;
        expect_fail(c, i);
        for (size_t k = 0; k < b.witnesses[i].prior_peaks.size(); ++k) {
            c = b.witnesses;
            c[i].prior_peaks[k].digest[3] ^= 1;
            expect_fail(c, i);
            c = b.witnesses;
            c[i].prior_peaks[k].height += 1;
            expect_fail(c, i);
        }
        c = b.witnesses;
        c[i].prior_peaks.push_back({0, Digest{}});
        expect_fail(c, i);
    }
    CHECK(mutations > 140);
}

TEST_CASE("mmr: json round-trip") {
    const auto b = build(test::header_chain(11, 0, 43));
    const nlohmann::json js = b.state;
    CHECK(js["leaf_count"] == 11);
    CHECK(js["peaks"][0]["height"] == 3);
    CHECK(js.get<State>() == b.state);
    const nlohmann::json jw = b.witnesses;
    CHECK(jw.get<std::vector<Witness>>() == b.witnesses);
    const auto proof = prove(b.state, b.log, 5);
    const nlohmann::json jp = proof;
    CHECK(jp.get<Proof>() == proof);
}

TEST_CASE("mmr: mimc-hashed accumulator") {
    const auto chain = test::header_chain(9, 0, 44);
    auto [s, w] = init(header_hash(chain[0]), HashId::mimc_sponge);
    std::vector<Digest> log{header_hash(chain[0])};
    std::vector<Witness> ws{w};
    for (size_t i = 1; i < chain.size(); ++i) {
        auto [n, wi] = append(s, header_hash(chain[i]), chain[i], log.back());
        s = n;
        ws.push_back(wi);
        log.push_back(header_hash(chain[i]));
    }
    for (size_t i = 0; i < 9; ++i) CHECK(verify(root(s), log[i], prove(s, log, i), HashId::mimc_sponge));
    CHECK(replay_witnesses(ws, HashId::mimc_sponge).ok);
    CHECK_FALSE(replay_witnesses(ws, HashId::keccak256).ok);
}

}  // namespace stateproof::mmr
