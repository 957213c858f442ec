// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

// stateproof command-line tool.
//
// Exit codes: 0 accepted / done, 1 domain rejection, 2 usage or parse error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include <stateproof/blockcache.hpp>
#include <stateproof/chain.hpp>
#include <stateproof/hashing.hpp>
#include <stateproof/json_util.hpp>
#include <stateproof/mmr.hpp>
#include <stateproof/sim.hpp>

namespace sp = stateproof;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kRejected = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw UsageError(path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

sp::HashId resolve_hash(const std::string& flag) {
    std::string name = flag;
    if (name.empty()) {
        if (const char* env = std::getenv("STATEPROOF_HASH")) name = env;
    }
    if (name.empty()) return sp::HashId::keccak256;
    try {
        return sp::parse_hash_id(name);
    } catch (const std::exception&) {
        throw UsageError("unknown hash: " + name);
    }
}

// ---------------------------------------------------------------------------
// chain

struct ChainGenArgs {
    size_t blocks{0};
    size_t accounts{4};
    uint64_t seed{0};
    std::string mode{"window256"};
    std::string out;
};

int chain_gen(const ChainGenArgs& a, sp::HashId hash) {
    sp::chain::ChainParams params;
    params.hash_id = hash;
    params.blockhash_mode = sp::chain::parse_blockhash_mode(a.mode);
    const auto chain = sp::chain::generate_chain(a.blocks, a.accounts, a.seed, params);
    write_json(a.out, chain.to_fixture());
    std::cout << chain.block_hash(chain.head_number()).hex() << "\n";
    return kOk;
}

sp::chain::SimChain load_chain(const std::string& path) {
    try {
        return sp::chain::SimChain::from_fixture(read_json(path));
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(path + ": " + e.what());
    }
}

struct BlockhashArgs {
    std::string fixture;
    uint64_t current{0};
    uint64_t target{0};
};

int chain_blockhash(const BlockhashArgs& a) {
    const auto chain = load_chain(a.fixture);
    const auto mode = chain.params().blockhash_mode;
    const auto h = chain.blockhash(a.current, a.target);
    const auto cls = sp::chain::classify_block(a.current, a.target, mode);
    if (!h) {
        std::cout << "unavailable class=" << sp::chain::to_string(cls) << " mode=" << sp::chain::to_string(mode) << "\n";
        return kRejected;
    }
    std::cout << h->hex() << " class=" << sp::chain::to_string(cls) << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// proof

struct ProofMakeArgs {
    std::string fixture;
    uint64_t block{0};
    std::string address;
    std::string slot;
    std::string out;
};

int proof_make(const ProofMakeArgs& a) {
    const auto chain = load_chain(a.fixture);
    sp::Address addr;
    sp::Bytes32 slot;
    try {
        addr = sp::Address::from_hex(a.address);
        slot = sp::Bytes32::from_hex(a.slot);
    } catch (const std::exception& e) {
        throw UsageError(std::string{"bad address or slot: "} + e.what());
    }
    if (a.block > chain.head_number()) throw UsageError("fixture has no block " + std::to_string(a.block));
    json j = chain.make_storage_proof(a.block, addr, slot);
    j["blockNumber"] = a.block;
    j["blockHash"] = chain.block_hash(a.block).hex();
    write_json(a.out, j);
    std::cout << chain.block_hash(a.block).hex() << "\n";
    return kOk;
}

struct ProofVerifyArgs {
    std::string proof;
    std::string block_hash;
};

int proof_verify(const ProofVerifyArgs& a, sp::HashId hash) {
    const json j = read_json(a.proof);
    sp::chain::HierarchicalProof p;
    sp::Digest block_hash;
    try {
        p = j.get<sp::chain::HierarchicalProof>();
        if (!a.block_hash.empty()) {
            block_hash = sp::Digest::from_hex(a.block_hash);
        } else if (j.contains("blockHash")) {
            block_hash = j.at("blockHash").get<sp::Digest>();
        } else {
            throw UsageError("no --block-hash given and the proof file records none");
        }
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(a.proof + ": " + e.what());
    }
    try {
        const auto v = sp::chain::verify_hierarchical(block_hash, p, hash);
        std::cout << "accepted value=" << (v ? v->hex() : std::string{"absent"}) << "\n";
        return kOk;
    } catch (const sp::chain::InvalidHierarchicalProof& e) {
        std::cout << "rejected layer=" << sp::chain::to_string(e.layer()) << " " << e.what() << "\n";
        return kRejected;
    }
}

// ---------------------------------------------------------------------------
// acc

struct AccArgs {
    std::string kind;
    std::string state;
    std::string fixture;
    uint64_t block{0};
    bool block_set{false};
    std::string header;
    uint64_t number{0};
    std::string proof;
    std::string out;
};

sp::BlockHeader header_arg(const AccArgs& a) {
    if (!a.header.empty()) {
        try {
            return read_json(a.header).get<sp::BlockHeader>();
        } catch (const UsageError&) {
            throw;
        } catch (const std::exception& e) {
            throw UsageError(a.header + ": " + e.what());
        }
    }
    if (a.fixture.empty() || !a.block_set) throw UsageError("give --header, or --fixture with --block");
    const auto chain = load_chain(a.fixture);
    if (a.block > chain.head_number()) throw UsageError("fixture has no block " + std::to_string(a.block));
    return chain.header(a.block);
}

// Cache rebuilt by re-running the recorded operations.
sp::blockcache::Cache load_cache(const json& st, sp::HashId hash) {
    const auto ws = st.at("witnesses").get<std::vector<sp::blockcache::Witness>>();
    if (ws.empty() || !std::holds_alternative<sp::blockcache::InitWitness>(ws[0]))
        throw UsageError("state file does not start with init");
    auto cache = sp::blockcache::Cache::init(std::get<sp::blockcache::InitWitness>(ws[0]).header, hash).first;
    for (size_t i = 1; i < ws.size(); ++i) {
        if (const auto* ap = std::get_if<sp::blockcache::AppendWitness>(&ws[i])) {
            cache = cache.append(ap->appended).first;
        } else if (const auto* pp = std::get_if<sp::blockcache::PrependWitness>(&ws[i])) {
            cache = cache.prepend(pp->prepended).first;
        } else {
            throw UsageError("state file has init after the first step");
        }
    }
    return cache;
}

json cache_state(const sp::blockcache::Cache& c) {
    return {{"kind", "mpt"},
            {"hash", sp::to_string(c.hash_id())},
            {"root", c.root().hex()},
            {"lowest", c.lowest()},
            {"highest", c.highest()},
            {"witnesses", c.witnesses()}};
}

struct MmrFile {
    sp::mmr::State state;
    uint64_t first_number{0};
    sp::Digest last_hash;
    std::vector<sp::Digest> leaves;
    std::vector<sp::mmr::Witness> witnesses;
};

MmrFile load_mmr(const json& st) {
    MmrFile f;
    f.state = st.at("state").get<sp::mmr::State>();
    f.first_number = st.at("first_number").get<uint64_t>();
    f.leaves = st.at("leaves").get<std::vector<sp::Digest>>();
    f.witnesses = st.at("witnesses").get<std::vector<sp::mmr::Witness>>();
    if (f.leaves.empty()) throw UsageError("mmr state has no leaves");
    f.last_hash = f.leaves.back();
    return f;
}

json mmr_state(const MmrFile& f) {
    return {{"kind", "mmr"},
            {"hash", sp::to_string(f.state.hash_id)},
            {"root", sp::mmr::root(f.state).hex()},
            {"first_number", f.first_number},
            {"state", f.state},
            {"leaves", f.leaves},
            {"witnesses", f.witnesses}};
}

int acc_mpt(const std::string& action, const AccArgs& a, sp::HashId hash) {
    if (action == "init") {
        const auto cache = sp::blockcache::Cache::init(header_arg(a), hash).first;
        write_json(a.state, cache_state(cache));
        std::cout << cache.root().hex() << "\n";
        return kOk;
    }
    if (action == "verify") {
        const auto bundle = read_json(a.proof).get<sp::blockcache::Bundle>();
        const auto r = sp::blockcache::verify(bundle, hash);
        if (!r) {
            std::cout << "rejected " << sp::blockcache::to_string(*r.failure);
            if (r.failing_step) std::cout << " at witness " << *r.failing_step;
            std::cout << ": " << r.reason << "\n";
            return kRejected;
        }
        std::cout << "accepted block=" << bundle.number << " hash=" << bundle.hash.hex() << "\n";
        return kOk;
    }
    auto cache = load_cache(read_json(a.state), hash);
    if (action == "prove") {
        try {
            write_json(a.out, cache.prove(a.number));
        } catch (const sp::Error& e) {
            std::cout << "rejected " << e.what() << "\n";
            return kRejected;
        }
        return kOk;
    }
    const auto header = header_arg(a);
    try {
        cache = action == "append" ? cache.append(header).first : cache.prepend(header).first;
    } catch (const sp::Error& e) {
        std::cout << "rejected " << e.what() << "\n";
        return kRejected;
    }
    write_json(a.state, cache_state(cache));
    std::cout << cache.root().hex() << "\n";
    return kOk;
}

int acc_mmr(const std::string& action, const AccArgs& a, sp::HashId hash) {
    if (action == "prepend") {
        std::cerr << "error: an MMR only grows to the right; prepend is not supported (use the mpt cache)\n";
        return kUsage;
    }
    if (action == "init") {
        const auto header = header_arg(a);
        MmrFile f;
        f.first_number = header.number;
        f.leaves.push_back(sp::header_hash(header));
        auto [state, w] = sp::mmr::init(f.leaves[0], hash);
        f.state = std::move(state);
        f.witnesses.push_back(std::move(w));
        write_json(a.state, mmr_state(f));
        std::cout << sp::mmr::root(f.state).hex() << "\n";
        return kOk;
    }
    if (action == "verify") {
        const json j = read_json(a.proof);
        const auto root = j.at("root").get<sp::Digest>();
        const auto number = j.at("number").get<uint64_t>();
        const auto leaf = j.at("hash").get<sp::Digest>();
        const auto first = j.at("first_number").get<uint64_t>();
        const auto proof = j.at("proof").get<sp::mmr::Proof>();
        const auto ws = j.at("witnesses").get<std::vector<sp::mmr::Witness>>();
        const auto r = sp::mmr::replay_witnesses(ws, hash);
        if (!r) {
            std::cout << "rejected witness chain";
            if (r.failing_step) std::cout << " at step " << *r.failing_step;
            std::cout << ": " << r.reason << "\n";
            return kRejected;
        }
        if (ws.back().new_root != root) {
            std::cout << "rejected: witness chain does not end at the root\n";
            return kRejected;
        }
        if (number < first || proof.leaf_index != number - first || !sp::mmr::verify(root, leaf, proof, hash)) {
            std::cout << "rejected: block " << number << " is not in the accumulator with that hash\n";
            return kRejected;
        }
        std::cout << "accepted block=" << number << " hash=" << leaf.hex() << "\n";
        return kOk;
    }
    MmrFile f = load_mmr(read_json(a.state));
    if (f.state.hash_id != hash) throw UsageError("state file uses another hash");
    if (action == "prove") {
        if (a.number < f.first_number || a.number - f.first_number >= f.leaves.size()) {
            std::cout << "rejected block " << a.number << " is not in the accumulator\n";
            return kRejected;
        }
        const uint64_t idx = a.number - f.first_number;
        write_json(a.out, {{"root", sp::mmr::root(f.state).hex()},
                           {"number", a.number},
                           {"hash", f.leaves[idx].hex()},
                           {"first_number", f.first_number},
                           {"proof", sp::mmr::prove(f.state, f.leaves, idx)},
                           {"witnesses", f.witnesses}});
        return kOk;
    }
    // append
    const auto header = header_arg(a);
    if (header.number != f.first_number + f.leaves.size()) {
        std::cout << "rejected NumberGap: expected block " << f.first_number + f.leaves.size() << "\n";
        return kRejected;
    }
    const auto leaf = sp::header_hash(header);
    try {
        auto [state, w] = sp::mmr::append(f.state, leaf, header, f.last_hash);
        f.state = std::move(state);
        f.witnesses.push_back(std::move(w));
    } catch (const sp::Error& e) {
        std::cout << "rejected " << e.what() << "\n";
        return kRejected;
    }
    f.leaves.push_back(leaf);
    write_json(a.state, mmr_state(f));
    std::cout << sp::mmr::root(f.state).hex() << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// sim, bench

struct SimArgs {
    std::string scenario;
    std::string report;
    std::string events;
    bool strict{false};
};

int sim_run(const SimArgs& a) {
    sp::sim::Scenario s;
    try {
        s = read_json(a.scenario).get<sp::sim::Scenario>();
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(a.scenario + ": " + e.what());
    }
    const auto result = sp::sim::run_scenario(s);
    write_text(a.report, result.report_json(s.name));
    if (!a.events.empty()) write_text(a.events, result.event_log_ndjson());
    size_t rejected = 0;
    for (const auto& r : result.reports) rejected += r.accepted ? 0 : 1;
    std::cerr << result.reports.size() << " request(s), " << rejected << " rejected\n";
    return a.strict && rejected ? kRejected : kOk;
}

struct BenchArgs {
    std::vector<std::string> hashes{"keccak256", "mimc_sponge"};
    std::vector<size_t> sizes{32, 4096};
    size_t iters{1000};
    uint64_t seed{42};
    std::string out;
};

int bench(const BenchArgs& a) {
    std::vector<sp::HashId> ids;
    for (const auto& h : a.hashes) ids.push_back(resolve_hash(h));
    const auto report = sp::bench_hashes(ids, a.sizes, a.iters, a.seed);
    write_text(a.out, report.to_csv());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stateproof: storage proofs, block-hash accumulators and cross-chain verification"};
    app.require_subcommand(1);
    std::string hash_flag;
    app.add_option("--hash", hash_flag, "keccak256 or mimc_sponge (default: $STATEPROOF_HASH, else keccak256)");

    auto* chain = app.add_subcommand("chain", "chain fixtures")->require_subcommand(1);
    ChainGenArgs gen;
    auto* gen_cmd = chain->add_subcommand("gen", "generate a seeded chain fixture; prints the head hash");
    gen_cmd->add_option("--blocks", gen.blocks, "number of headers, genesis included")->required()->check(
        CLI::Range(size_t{1}, size_t{1} << 24));
    gen_cmd->add_option("--accounts", gen.accounts, "funded accounts")->check(CLI::Range(size_t{0}, size_t{1} << 16));
    gen_cmd->add_option("--seed", gen.seed, "generator seed");
    gen_cmd->add_option("--blockhash-mode", gen.mode, "window256 or ring8192")
        ->check(CLI::IsMember({"window256", "ring8192"}));
    gen_cmd->add_option("-o,--out", gen.out, "output file (default stdout)");

    BlockhashArgs bh;
    auto* bh_cmd = chain->add_subcommand("blockhash", "BLOCKHASH lookup; exits 1 when unavailable");
    bh_cmd->add_option("--fixture", bh.fixture)->required();
    bh_cmd->add_option("--current", bh.current, "block executing the lookup")->required();
    bh_cmd->add_option("--target", bh.target, "block whose hash is requested")->required();

    auto* proof = app.add_subcommand("proof", "storage proofs")->require_subcommand(1);
    ProofMakeArgs make;
    auto* make_cmd = proof->add_subcommand("make", "eth_getProof-style proof of one slot; prints the block hash");
    make_cmd->add_option("--fixture", make.fixture)->required();
    make_cmd->add_option("--block", make.block)->required();
    make_cmd->add_option("--address", make.address)->required();
    make_cmd->add_option("--slot", make.slot)->required();
    make_cmd->add_option("-o,--out", make.out, "output file (default stdout)");

    ProofVerifyArgs verify;
    auto* verify_cmd = proof->add_subcommand("verify", "check header -> account -> storage; exits 1 on rejection");
    verify_cmd->add_option("--proof", verify.proof)->required();
    verify_cmd->add_option("--block-hash", verify.block_hash, "trusted block hash (default: the file's blockHash)");

    auto* acc = app.add_subcommand("acc", "block-hash accumulators")->require_subcommand(1);
    AccArgs acc_args;
    std::string acc_action;
    for (const char* kind : {"mmr", "mpt"}) {
        auto* k = acc->add_subcommand(kind, std::string{kind} + " accumulator");
        k->add_option("action", acc_action, "init | append | prepend | prove | verify")
            ->required()
            ->check(CLI::IsMember({"init", "append", "prepend", "prove", "verify"}));
        k->add_option("--state", acc_args.state, "accumulator state file (read and rewritten)");
        k->add_option("--fixture", acc_args.fixture, "chain fixture supplying headers");
        k->add_option("--block", acc_args.block, "header number within --fixture");
        k->add_option("--header", acc_args.header, "header JSON file (instead of --fixture/--block)");
        k->add_option("--number", acc_args.number, "block number to prove");
        k->add_option("--proof", acc_args.proof, "proof file to verify");
        k->add_option("-o,--out", acc_args.out, "proof output file (default stdout)");
    }

    auto* sim = app.add_subcommand("sim", "multi-chain simulation")->require_subcommand(1);
    SimArgs sim_args;
    auto* run_cmd = sim->add_subcommand("run", "run a scenario file; writes the report JSON");
    run_cmd->add_option("scenario", sim_args.scenario)->required();
    run_cmd->add_option("--report", sim_args.report, "report file (default stdout)");
    run_cmd->add_option("--events", sim_args.events, "NDJSON event log file");
    run_cmd->add_flag("--strict", sim_args.strict, "exit 1 if any request is rejected");

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "hash throughput CSV");
    bench_cmd->add_option("--hashes", bench_args.hashes)->delimiter(',');
    bench_cmd->add_option("--sizes", bench_args.sizes)->delimiter(',');
    bench_cmd->add_option("--iters", bench_args.iters)->check(CLI::Range(size_t{1}, size_t{1} << 30));
    bench_cmd->add_option("--seed", bench_args.seed);
    bench_cmd->add_option("-o,--out", bench_args.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        const auto hash = resolve_hash(hash_flag);
        if (gen_cmd->parsed()) return chain_gen(gen, hash);
        if (bh_cmd->parsed()) return chain_blockhash(bh);
        if (make_cmd->parsed()) return proof_make(make);
        if (verify_cmd->parsed()) return proof_verify(verify, hash);
        if (run_cmd->parsed()) return sim_run(sim_args);
        if (bench_cmd->parsed()) return bench(bench_args);
        for (const auto* k : acc->get_subcommands()) {
            if (!k->parsed()) continue;
            acc_args.block_set = k->count("--block") > 0;
            if (acc_action != "verify" && acc_args.state.empty()) throw UsageError("--state is required");
            if (acc_action == "verify" && acc_args.proof.empty()) throw UsageError("--proof is required");
            if (acc_action == "prove" && k->count("--number") == 0) throw UsageError("--number is required");
            return k->get_name() == "mmr" ? acc_mmr(acc_action, acc_args, hash) : acc_mpt(acc_action, acc_args, hash);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const json::exception& e) {
        std::cerr << "error: malformed input: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: malformed input: " << e.what() << "\n";
        return kUsage;
    } catch (const sp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == sp::ErrorCode::InvalidConfig ? kUsage : kRejected;
    }
    return kUsage;
}
