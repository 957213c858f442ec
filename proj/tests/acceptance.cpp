// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Runtime budgets are wall-clock and part of the criterion.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <stateproof/blockcache.hpp>
#include <stateproof/chain.hpp>
#include <stateproof/hashing.hpp>
#include <stateproof/json_util.hpp>
#include <stateproof/merkle.hpp>
#include <stateproof/mmr.hpp>
#include <stateproof/mpt.hpp>
#include <stateproof/sim.hpp>

#include "test_util.hpp"

namespace sp = stateproof;

namespace {

struct Failed {
    std::string why;
};

void require(bool cond, const std::string& why) {
    if (!cond) throw Failed{why};
}

std::string read_file(const std::string& path) {
    std::ifstream in{path, std::ios::binary};
    if (!in) throw Failed{"cannot read " + path};
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string repo_path(const std::string& relative) { return std::string{STATEPROOF_SOURCE_DIR} + "/" + relative; }

// ---------------------------------------------------------------------------

std::string merkle_size_law() {
    using namespace sp::merkle;
    sp::SplitMix64 rng{1};
    auto blocks = [&](size_t n) {
        std::vector<sp::Bytes> out;
        for (size_t i = 0; i < n; ++i) out.push_back(rng.bytes(1 + rng.below(48)));
        return out;
    };
    size_t proofs = 0;
    for (size_t n = 1; n <= 1024; n *= 2) {
        const auto tree = Tree::build(sp::HashId::keccak256, blocks(n));
        const auto depth = static_cast<size_t>(std::countr_zero(n));
        for (size_t i = 0; i < n; ++i) {
            const auto p = tree.prove(i);
            require(p.siblings.size() == depth, "n=" + std::to_string(n) + " leaf " + std::to_string(i) + " has " +
                                                    std::to_string(p.siblings.size()) + " siblings");
            require(verify(tree.root(), tree.leaf_hash(i), p), "power-of-two proof rejected");
            ++proofs;
        }
    }

    // 10,000 random round-trips over random shapes and both hashes
    size_t trips = 0, rejected_tampers = 0;
    while (trips < 10000) {
        const auto hash = rng.below(10) == 0 ? sp::HashId::mimc_sponge : sp::HashId::keccak256;
        const size_t n = 1 + rng.below(300);
        const auto tree = Tree::build(hash, blocks(n));
        for (int k = 0; k < 100 && trips < 10000; ++k, ++trips) {
            const size_t i = rng.below(n);
            auto p = tree.prove(i);
            require(verify(tree.root(), tree.leaf_hash(i), p), "random round-trip rejected");
            if (n > 1) {
                require(!verify(tree.root(), tree.leaf_hash((i + 1) % n), p), "wrong leaf accepted");
                auto& s = p.siblings[rng.below(p.siblings.size())];
                s.digest[rng.below(32)] ^= 0x80;
                require(!verify(tree.root(), tree.leaf_hash(i), p), "tampered sibling accepted");
                ++rejected_tampers;
            }
        }
    }
    return std::to_string(proofs) + " size-law proofs, " + std::to_string(trips) + " round-trips, " +
           std::to_string(rejected_tampers) + " tampers rejected";
}

std::string mainnet_compat() {
    const auto fx = sp::test::load_repo_json("fixtures/mainnet_16329190_cryptopunks.json");
    const auto p = fx.get<sp::chain::HierarchicalProof>();
    const auto block_hash = fx.at("blockHash").get<sp::Digest>();
    const auto state_root = fx.at("stateRoot").get<sp::Digest>();

    require(sp::keccak256(p.header_preimage) == block_hash, "header preimage does not hash to blockHash");
    require(sp::chain::state_root_of_preimage(p.header_preimage) == state_root, "state root differs from header");
    const auto acct_rlp = sp::mpt::verify(state_root, sp::keccak256(p.address.view()).view(), p.account_proof);
    require(acct_rlp.has_value(), "account proof does not open to an account");
    const auto acct = sp::chain::decode_account(*acct_rlp);
    require(acct.storage_root == fx.at("storageHash").get<sp::Digest>(), "storage root differs from storageHash");
    require(acct.code_hash == fx.at("codeHash").get<sp::Digest>(), "code hash differs from codeHash");
    const auto slot_value =
        sp::mpt::verify(acct.storage_root, sp::keccak256(p.slot_key.view()).view(), p.storage_proof);
    const auto via_hierarchy = sp::chain::verify_hierarchical(block_hash, p);
    require(slot_value.has_value() == via_hierarchy.has_value(), "mpt and hierarchical verifiers disagree");

    auto rejects = [&](const sp::chain::HierarchicalProof& bad) {
        try {
            sp::chain::verify_hierarchical(block_hash, bad);
            return false;
        } catch (const sp::chain::InvalidHierarchicalProof&) {
            return true;
        }
    };
    size_t tampers = 0;
    for (int which = 0; which < 2; ++which) {
        const size_t count = which ? p.storage_proof.nodes.size() : p.account_proof.nodes.size();
        for (size_t n = 0; n < count; ++n) {
            const size_t len = (which ? p.storage_proof.nodes[n] : p.account_proof.nodes[n]).size();
            for (size_t b = 0; b < len; ++b) {
                auto bad = p;
                auto& node = which ? bad.storage_proof.nodes[n] : bad.account_proof.nodes[n];
                node[b] ^= 0x01;
                require(rejects(bad), "tamper accepted at node " + std::to_string(n) + " byte " + std::to_string(b));
                ++tampers;
            }
        }
    }
    return "account and slot verified; " + std::to_string(tampers) + " single-byte tampers rejected";
}

std::string mpt_roots() {
    const auto v = sp::test::load_data("mpt_vectors.json");
    const std::string expected = "0x56e81f171bcc55a6ff8345e692c0f86e5b48e01b996cadc001622fb5e363b421";
    require(sp::mpt::empty_root().hex() == expected, "empty root " + sp::mpt::empty_root().hex());
    require(v.at("empty_root").get<std::string>() == expected, "oracle file disagrees on the empty root");
    size_t instances = 0;
    for (const auto& inst : v.at("small")) {
        sp::mpt::Trie t{sp::HashId::keccak256};
        for (const auto& kv : inst.at("entries"))
            t = t.insert(sp::from_hex(kv[0].get<std::string>()), sp::from_hex(kv[1].get<std::string>()));
        require(t.root().hex() == inst.at("root").get<std::string>(),
                "instance " + std::to_string(instances) + " root mismatch");
        ++instances;
    }
    require(instances > 0, "no small instances");
    return "empty root matches; " + std::to_string(instances) + " small instances match";
}

std::string mmr_structure() {
    using namespace sp::mmr;
    const auto headers = sp::test::header_chain(256, 0, 41);
    std::vector<sp::Digest> log;
    std::vector<State> states;
    auto [s, w] = init(sp::header_hash(headers[0]));
    log.push_back(sp::header_hash(headers[0]));
    states.push_back(s);
    for (size_t i = 1; i < headers.size(); ++i) {
        const auto leaf = sp::header_hash(headers[i]);
        states.push_back(append(states.back(), leaf, headers[i], log.back()).first);
        log.push_back(leaf);
    }

    const auto& eleven = states[10].peaks;
    require(eleven.size() == 3 && eleven[0].height == 3 && eleven[1].height == 1 && eleven[2].height == 0,
            "11 appends do not give peaks (3,1,0)");
    for (size_t n = 1; n <= 256; ++n)
        require(states[n - 1].peaks.size() == static_cast<size_t>(std::popcount(n)),
                "peak count != popcount at n=" + std::to_string(n));
    size_t trips = 0;
    for (size_t n = 1; n <= 64; ++n) {
        const auto& st = states[n - 1];
        const auto r = root(st);
        for (size_t i = 0; i < n; ++i) {
            const auto proof = prove(st, std::span{log}.first(n), i);
            require(verify(r, log[i], proof), "leaf " + std::to_string(i) + " of n=" + std::to_string(n));
            ++trips;
        }
    }
    return "peaks (3,1,0); popcount law to 256; " + std::to_string(trips) + " round-trips";
}

std::string cache_mutations() {
    using namespace sp::blockcache;
    const auto headers = sp::test::header_chain(10, 100, 51);
    size_t rejected = 0;

    // construction side: the cache refuses bad appends and prepends
    auto expect_throw = [&](auto fn, sp::ErrorCode code, const std::string& what) {
        try {
            fn();
        } catch (const sp::Error& e) {
            require(e.code() == code, what + ": got " + std::string{sp::to_string(e.code())});
            ++rejected;
            return;
        }
        throw Failed{what + ": accepted"};
    };
    Cache mid = Cache::init(headers[5]).first;
    mid = mid.append(headers[6]).first;
    {
        auto h = headers[7];
        h.parent_hash[0] ^= 1;
        expect_throw([&] { (void)mid.append(h); }, sp::ErrorCode::LinkageViolation, "append wrong parent");
        expect_throw([&] { (void)mid.append(headers[8]); }, sp::ErrorCode::NumberGap, "append wrong number");
        auto p = headers[4];
        p.state_root[0] ^= 1;  // its hash no longer matches block 5's parent
        expect_throw([&] { (void)mid.prepend(p); }, sp::ErrorCode::LinkageViolation, "prepend wrong parent");
        expect_throw([&] { (void)mid.prepend(headers[3]); }, sp::ErrorCode::NumberGap, "prepend wrong number");
    }

    // verifier side: every witness step, every conjunct
    Cache cache = Cache::init(headers[5]).first;
    for (size_t i = 6; i < 10; ++i) cache = cache.append(headers[i]).first;
    for (int i = 4; i >= 0; --i) cache = cache.prepend(headers[static_cast<size_t>(i)]).first;
    for (uint64_t n = 100; n < 110; ++n) {
        const auto b = cache.prove(n);
        require(static_cast<bool>(verify(b)), "honest block " + std::to_string(n) + " rejected");
        require(b.hash == sp::header_hash(headers[n - 100]), "honest bundle carries a wrong hash");
    }
    const auto honest = cache.prove(105);
    size_t appends = 0, prepends = 0;
    for (size_t step = 1; step < honest.witnesses.size(); ++step) {
        const bool is_append = std::holds_alternative<AppendWitness>(honest.witnesses[step]);
        (is_append ? appends : prepends)++;
        auto header_of = [&](Witness& w) -> sp::BlockHeader& {
            return is_append ? std::get<AppendWitness>(w).appended : std::get<PrependWitness>(w).prepended;
        };
        auto result_of = [&](Witness& w) -> sp::Digest& {
            return is_append ? std::get<AppendWitness>(w).resulting_root : std::get<PrependWitness>(w).resulting_root;
        };
        auto expect = [&](const char* what, auto mutate, Failure f) {
            auto b = honest;
            mutate(b.witnesses[step]);
            const auto r = verify(b);
            const std::string where = std::string{is_append ? "append" : "prepend"} + " step " +
                                      std::to_string(step) + " " + what;
            require(!r.ok, where + ": accepted");
            require(r.failure == f, where + ": wrong failure " + std::string{to_string(*r.failure)});
            require(r.failing_step == step, where + ": blamed another step");
            ++rejected;
        };
        expect(
            "parent",
            [&](Witness& w) {
                if (is_append)
                    std::get<AppendWitness>(w).appended.parent_hash[0] ^= 1;
                else
                    std::get<PrependWitness>(w).current_leftmost.parent_hash[0] ^= 1;
            },
            Failure::linkage_violation);
        expect("number", [&](Witness& w) { header_of(w).number += 2; }, Failure::number_gap);
        expect(
            "stored hash",
            [&](Witness& w) {
                sp::mpt::Trie rebuilt{sp::HashId::keccak256};
                require(replay(std::span{honest.witnesses}.first(step), sp::HashId::keccak256, &rebuilt).ok,
                        "honest prefix does not replay");
                result_of(w) =
                    rebuilt.insert(number_key(header_of(w).number), sp::keccak256(std::string_view{"x"}).view())
                        .root();
            },
            Failure::stored_hash_mismatch);
    }
    require(appends == 4 && prepends == 5, "cache was not built from 4 appends and 5 prepends");
    return std::to_string(rejected) + " mutations rejected as intended; 10 honest blocks accepted";
}

std::string blockhash_boundaries() {
    using namespace sp::chain;
    ChainParams w;
    SimChain a{w};
    for (int i = 0; i < 1000; ++i) a.apply_block({});
    require(a.blockhash(1000, 1000 - 256) == a.block_hash(1000 - 256), "window256: distance 256 unavailable");
    require(!a.blockhash(1000, 1000 - 257).has_value(), "window256: distance 257 available");

    ChainParams r;
    r.blockhash_mode = BlockhashMode::ring8192;
    SimChain b{r};
    for (int i = 0; i < 9000; ++i) b.apply_block({});
    require(b.blockhash(9000, 9000 - 8192) == b.block_hash(9000 - 8192), "ring8192: distance 8192 unavailable");
    require(!b.blockhash(9000, 9000 - 8193).has_value(), "ring8192: distance 8193 available");
    return "256/257 and 8192/8193 exact";
}

std::string finality_timeline() {
    using namespace sp::sim;
    auto l1 = NetworkConfig::l1(1);
    auto l2 = NetworkConfig::l2(10);
    require(l2.challenge_period == 604800 && l1.l1_finality_delay == 780, "defaults changed");
    World w{{l1, l2}, 2026};
    const uint64_t end = 3600 + 604800 + 1800;
    w.advance(end);

    // first time in [from, to] at which a block reaches `level`, by bisection
    auto reached = [&](uint64_t chain, uint64_t block, Finality level, uint64_t from, uint64_t to) {
        require(w.finality_of(chain, block, to) >= level, "level never reached");
        while (from < to) {
            const uint64_t mid = from + (to - from) / 2;
            if (w.finality_of(chain, block, mid) >= level)
                to = mid;
            else
                from = mid + 1;
        }
        return from;
    };

    const auto& updates = w.state_updates();
    require(!updates.empty(), "no state updates");
    std::string out;
    for (uint64_t block : {1, 450, 900}) {
        const uint64_t born = w.chain(10).header(block).timestamp;
        const uint64_t weak = reached(10, block, Finality::weak, born, end);
        require(weak >= 1800 && weak <= 3600, "L2 block " + std::to_string(block) + " weak at " + std::to_string(weak));
        const auto covering = std::find_if(updates.begin(), updates.end(),
                                           [&](const StateUpdate& u) { return u.l2_chain == 10 && u.l2_block >= block; });
        require(covering != updates.end() && covering->time == weak, "weak time is not a state update landing");
        const uint64_t objective = reached(10, block, Finality::objective, weak, end);
        require(objective == covering->time + 604800,
                "L2 block " + std::to_string(block) + " objective at " + std::to_string(objective));
        if (out.empty()) out = "L2 weak@" + std::to_string(weak) + " objective@" + std::to_string(objective);
    }
    for (uint64_t block : {1, 10, 150, 300}) {
        const uint64_t born = w.chain(1).header(block).timestamp;
        require(w.finality_of(1, block, born + 779) == Finality::none, "L1 objective before +780");
        require(w.finality_of(1, block, born + 780) == Finality::objective, "L1 not objective at +780");
    }
    return out + "; L1 objective at +780";
}

// Damages one artifact so that a verifier must notice.
void corrupt(sp::sim::Artifact& a) {
    using namespace sp::sim;
    std::visit(
        [](auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, sp::chain::HierarchicalProof>) {
                v.storage_proof.nodes.back().back() ^= 0x01;
            } else if constexpr (std::is_same_v<T, StateUpdate>) {
                v.epoch += 1;
            } else if constexpr (std::is_same_v<T, InclusionProof>) {
                if (v.kind == Accumulator::mpt)
                    std::visit([](auto& x) { x.resulting_root[0] ^= 0x01; }, v.cache_witnesses.back());
                else
                    v.mmr_witnesses.back().new_root[0] ^= 0x01;
            } else if constexpr (std::is_same_v<T, HeaderPreimage>) {
                v.rlp.back() ^= 0x01;
            } else {
                v.l1_block += 1;
            }
        },
        a);
}

std::string flow_soundness() {
    using namespace sp::sim;
    size_t corruptions = 0, reports = 0;
    for (const std::string name : {"l2_to_l1_weak", "l1_to_l2_too_new", "l2_to_l2"}) {
        const auto s = nlohmann::json::parse(read_file(repo_path("scenarios/" + name + ".json"))).get<Scenario>();
        const auto golden_report = read_file(repo_path("tests/golden/" + name + ".report.json"));
        const auto golden_events = read_file(repo_path("tests/golden/" + name + ".events.ndjson"));
        for (int run = 0; run < 2; ++run) {
            const auto r = run_scenario(s);
            require(r.report_json(s.name) == golden_report, name + ": report differs from golden");
            require(r.event_log_ndjson() == golden_events, name + ": event log differs from golden");
        }

        // replay the scenario and corrupt each artifact of every gathered request
        World w{s.networks, s.seed, s.accumulator};
        for (const auto& e : s.events) {
            const auto at = e.at("at").get<uint64_t>();
            const auto chain = e.at("chain").get<uint64_t>();
            const auto kind = e.at("kind").get<std::string>();
            if (kind == "write")
                w.schedule_write(at, chain, e.at("address").get<sp::Address>(), e.at("slot").get<sp::Bytes32>(),
                                 e.at("value").get<sp::Bytes32>());
            else if (kind == "state_update")
                w.schedule_state_update(at, chain);
            else
                w.schedule_bridge_push(at, chain);
        }
        auto requests = s.requests;
        std::stable_sort(requests.begin(), requests.end(), [](const auto& a, const auto& b) { return a.at < b.at; });
        for (const auto& req : requests) {
            w.advance(req.at);
            const Gathered g = w.gather(req);
            if (g.error) continue;
            ++reports;
            const auto honest = w.check(req, g);
            for (const auto& st : honest.steps) require(st.pass, name + "/" + req.id + ": honest step fails");
            for (size_t i = 0; i < g.evidence.artifacts.size(); ++i) {
                Gathered bad = g;
                corrupt(bad.evidence.artifacts[i]);
                const auto r = w.check(req, bad);
                const auto fails = std::count_if(r.steps.begin(), r.steps.end(), [](const auto& x) { return !x.pass; });
                const std::string where = name + "/" + req.id + " artifact " + std::to_string(i);
                require(!r.accepted, where + ": accepted");
                require(fails == 1 && !r.steps.at(i).pass, where + ": did not flip exactly its own step");
                ++corruptions;
            }
        }
    }
    require(reports > 0 && corruptions > 0, "no gathered evidence to corrupt");
    return "3 scenarios x2 byte-identical; " + std::to_string(corruptions) + " corruptions over " +
           std::to_string(reports) + " requests each flip one step";
}

std::string accumulator_equivalence() {
    const auto headers = sp::test::header_chain(32, 0, 61);
    std::vector<sp::Digest> log;
    std::vector<sp::mmr::Witness> mmr_ws;
    auto [state, w0] = sp::mmr::init(sp::header_hash(headers[0]));
    mmr_ws.push_back(w0);
    log.push_back(sp::header_hash(headers[0]));
    for (size_t i = 1; i < headers.size(); ++i) {
        const auto leaf = sp::header_hash(headers[i]);
        auto [next, wi] = sp::mmr::append(state, leaf, headers[i], log.back());
        state = std::move(next);
        mmr_ws.push_back(std::move(wi));
        log.push_back(leaf);
    }
    const auto mmr_root = sp::mmr::root(state);
    const bool history_ok = sp::mmr::replay_witnesses(mmr_ws).ok && mmr_ws.back().new_root == mmr_root;
    require(history_ok, "mmr witness chain does not replay to its root");

    const auto cache = sp::blockcache::Cache::from_range(headers);
    const auto cache_ws = cache.witnesses();

    std::vector<sp::Digest> claims = log;
    claims.push_back(sp::keccak256(std::string_view{"not a block"}));
    size_t checked = 0, accepted = 0;
    for (uint64_t n = 0; n < 32; ++n) {
        const auto mmr_proof = sp::mmr::prove(state, log, n);
        const auto bundle = cache.prove(n);
        for (const auto& claim : claims) {
            const bool by_mmr = history_ok && sp::mmr::verify(mmr_root, claim, mmr_proof);
            const bool by_cache = sp::blockcache::verify(cache.root(), n, claim, bundle.mpt_proof, cache_ws).ok;
            require(by_mmr == by_cache, "accumulators disagree on block " + std::to_string(n));
            require(by_mmr == (claim == log[n]), "wrong decision on block " + std::to_string(n));
            ++checked;
            accepted += by_mmr ? 1 : 0;
        }
    }
    return std::to_string(checked) + " claims, " + std::to_string(accepted) + " accepted by both";
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in{s};
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

std::string bench_and_vectors() {
    const std::vector<sp::HashId> hashes{sp::HashId::keccak256, sp::HashId::mimc_sponge};
    const std::vector<size_t> sizes{32, 4096};
    const auto csv = sp::bench_hashes(hashes, sizes, 20, 42).to_csv();
    auto lines = split(csv, '\n');
    require(lines.size() == 6, "expected comment, header and 4 rows");
    require(lines[0].starts_with("#"), "missing comment line");
    require(lines[1] == "hash,input_size,iterations,total_ns,throughput_bps,last_digest_hex", "bad header");
    size_t row = 0;
    for (auto hash : hashes) {
        for (size_t size : sizes) {
            const auto f = split(lines[2 + row++], ',');
            require(f.size() == 6, "row has " + std::to_string(f.size()) + " fields");
            require(f[0] == sp::to_string(hash) && f[1] == std::to_string(size) && f[2] == "20", "row order");
            require(std::stoull(f[3]) > 0 && std::stod(f[4]) > 0, "non-positive timing");
            require(f[5] == sp::digest(hash, sp::seeded_bytes(42, size)).hex(), "last digest not reproducible");
        }
    }

    const auto v = sp::test::load_data("keccak_vectors.json");
    size_t matched = 0;
    bool boundary = false;
    for (const auto& x : v.at("vectors")) {
        const auto input = sp::from_hex(x.at("input").get<std::string>());
        require(sp::keccak256(input).hex() == x.at("digest").get<std::string>(),
                "keccak vector " + x.at("name").get<std::string>());
        boundary = boundary || input.size() == 136;
        ++matched;
    }
    for (const auto& x : v.at("seeded")) {
        const auto input = sp::seeded_bytes(x.at("seed").get<uint64_t>(), x.at("size").get<size_t>());
        require(sp::keccak256(input).hex() == x.at("digest").get<std::string>(), "seeded keccak vector");
        ++matched;
    }
    require(matched >= 10 && boundary, "too few vectors or no rate-boundary input");
    return "CSV well-formed (4 rows); " + std::to_string(matched) + " keccak vectors match";
}

struct Criterion {
    int id;
    const char* name;
    std::function<std::string()> run;
    double budget_s;  // 0: no runtime bound
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "merkle proof size law", merkle_size_law, 5},
        {2, "ethereum mainnet proof compatibility", mainnet_compat, 1},
        {3, "mpt empty root and small-instance roots", mpt_roots, 0},
        {4, "mmr structure law", mmr_structure, 10},
        {5, "block cache single-conjunct mutations", cache_mutations, 0},
        {6, "blockhash window boundaries", blockhash_boundaries, 0},
        {7, "finality timeline", finality_timeline, 0},
        {8, "flow soundness and golden reports", flow_soundness, 30},
        {9, "mmr and block cache accept the same claims", accumulator_equivalence, 0},
        {10, "bench CSV and keccak vectors", bench_and_vectors, 0},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = true;
        try {
            detail = c.run();
        } catch (const Failed& f) {
            ok = false;
            detail = f.why;
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string{"exception: "} + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (ok && c.budget_s > 0 && secs >= c.budget_s) {
            ok = false;
            detail += "; over the " + std::to_string(static_cast<int>(c.budget_s)) + " s budget";
        }
        std::printf("%s [%2d] %s (%.2f s): %s\n", ok ? "PASS" : "FAIL", c.id, c.name, secs, detail.c_str());
        failures += ok ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
