// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#include <stateproof/sim.hpp>

#include <algorithm>
#include <functional>
#include <set>

#include <stateproof/errors.hpp>
#include <stateproof/json_util.hpp>

namespace stateproof::sim {

using nlohmann::json;

std::string_view to_string(Layer l) noexcept { return l == Layer::L1 ? "L1" : "L2"; }

std::string_view to_string(Finality f) noexcept {
    switch (f) {
        case Finality::none: return "NoneFinality";
        case Finality::weak: return "WeakFinality";
        case Finality::objective: return "ObjectiveFinality";
    }
    return "unknown";
}

std::string_view to_string(Flow f) noexcept {
    switch (f) {
        case Flow::l2_to_l1: return "L2toL1";
        case Flow::l1_to_l2: return "L1toL2";
        case Flow::l2_to_l2: return "L2toL2";
    }
    return "unknown";
}

std::string_view to_string(Accumulator a) noexcept { return a == Accumulator::mpt ? "mpt" : "mmr"; }

Finality parse_finality(std::string_view s) {
    for (auto f : {Finality::none, Finality::weak, Finality::objective})
        if (s == to_string(f)) return f;
    throw Error(ErrorCode::InvalidConfig, "unknown finality: " + std::string{s});
}

Flow parse_flow(std::string_view s) {
    for (auto f : {Flow::l2_to_l1, Flow::l1_to_l2, Flow::l2_to_l2})
        if (s == to_string(f)) return f;
    throw Error(ErrorCode::InvalidConfig, "unknown flow: " + std::string{s});
}

Accumulator parse_accumulator(std::string_view s) {
    if (s == "mpt") return Accumulator::mpt;
    if (s == "mmr") return Accumulator::mmr;
    throw Error(ErrorCode::InvalidConfig, "unknown accumulator: " + std::string{s});
}

NetworkConfig NetworkConfig::l1(uint64_t chain_id) {
    NetworkConfig c;
    c.chain_id = chain_id;
    c.layer = Layer::L1;
    c.block_time = 12;
    return c;
}

NetworkConfig NetworkConfig::l2(uint64_t chain_id, uint64_t parent) {
    NetworkConfig c;
    c.chain_id = chain_id;
    c.layer = Layer::L2;
    c.block_time = 2;
    c.parent = parent;
    return c;
}

void validate(const std::vector<NetworkConfig>& configs) {
    std::set<uint64_t> ids;
    std::optional<uint64_t> l1;
    for (const auto& c : configs) {
        if (!ids.insert(c.chain_id).second)
            throw Error(ErrorCode::InvalidConfig, "duplicate chain id " + std::to_string(c.chain_id));
        if (c.block_time == 0) throw Error(ErrorCode::InvalidConfig, "block_time must be positive");
        if (c.layer == Layer::L1) {
            if (l1) throw Error(ErrorCode::InvalidConfig, "exactly one L1 network is supported");
            l1 = c.chain_id;
        }
    }
    if (!l1) throw Error(ErrorCode::InvalidConfig, "no L1 network configured");
    for (const auto& c : configs)
        if (c.layer == Layer::L2 && c.parent != *l1)
            throw Error(ErrorCode::InvalidConfig,
                        "L2 " + std::to_string(c.chain_id) + " must name the L1 (" + std::to_string(*l1) + ") as parent");
}

namespace {

Address contract_address(std::string_view tag) {
    const Digest d = keccak256(tag);
    return Address::from_view(d.view().subspan(12));
}

Bytes be8(uint64_t v) {
    Bytes out(8);
    for (int i = 7; i >= 0; --i, v >>= 8) out[static_cast<size_t>(i)] = static_cast<uint8_t>(v & 0xff);
    return out;
}

const Address& background_contract() {
    static const Address a = contract_address("stateproof.sim.background");
    return a;
}

}  // namespace

const Address& rollup_contract() {
    static const Address a = contract_address("stateproof.sim.rollup");
    return a;
}

const Address& bridge_contract() {
    static const Address a = contract_address("stateproof.sim.l1block");
    return a;
}

Bytes32 state_update_slot(uint64_t l2_chain, uint64_t epoch) { return keccak256(concat(be8(l2_chain), be8(epoch))); }

Bytes32 bridge_slot() { return Bytes32{}; }

// ---------------------------------------------------------------------------
// Inclusion

InclusionProof make_inclusion(const chain::SimChain& chain, Accumulator kind, uint64_t target, uint64_t anchor) {
    if (target > anchor || anchor > chain.head_number())
        throw Error(ErrorCode::OutOfRange, "inclusion range " + std::to_string(target) + ".." + std::to_string(anchor));
    const std::span<const BlockHeader> range{chain.headers().data() + target, anchor - target + 1};
    InclusionProof p;
    p.kind = kind;
    p.chain_id = chain.params().chain_id;
    p.first_number = target;
    p.target_number = target;
    p.anchor_number = anchor;
    if (kind == Accumulator::mpt) {
        const auto cache = blockcache::Cache::from_range(range);
        p.root = cache.root();
        p.target_mpt = cache.trie().prove(blockcache::number_key(target));
        p.anchor_mpt = cache.trie().prove(blockcache::number_key(anchor));
        p.cache_witnesses = cache.witnesses();
        return p;
    }
    std::vector<Digest> leaves;
    leaves.reserve(range.size());
    leaves.push_back(header_hash(range[0]));
    auto [state, w0] = mmr::init(leaves[0]);
    p.mmr_witnesses.push_back(std::move(w0));
    for (size_t i = 1; i < range.size(); ++i) {
        leaves.push_back(header_hash(range[i]));
        auto [next, w] = mmr::append(state, leaves[i], range[i], leaves[i - 1]);
        state = std::move(next);
        p.mmr_witnesses.push_back(std::move(w));
    }
    p.root = mmr::root(state);
    p.target_mmr = mmr::prove(state, leaves, 0);
    p.anchor_mmr = mmr::prove(state, leaves, anchor - target);
    return p;
}

namespace {

std::string check_cached(const InclusionProof& p, const BlockRef& ref, const mpt::Proof& proof) {
    try {
        const auto v = mpt::verify(p.root, blockcache::number_key(ref.number), proof);
        if (!v || *v != Bytes(ref.hash.bytes.begin(), ref.hash.bytes.end()))
            return "block " + std::to_string(ref.number) + " is not cached with the claimed hash";
    } catch (const mpt::InvalidProof& e) {
        return std::string{"cache proof: "} + e.what();
    }
    return {};
}

std::string check_mmr_leaf(const InclusionProof& p, const BlockRef& ref, const mmr::Proof& proof) {
    if (ref.number < p.first_number || proof.leaf_index != ref.number - p.first_number)
        return "mmr proof leaf index does not match block " + std::to_string(ref.number);
    if (!mmr::verify(p.root, ref.hash, proof)) return "mmr proof rejects block " + std::to_string(ref.number);
    return {};
}

}  // namespace

std::string check_inclusion(const InclusionProof& p, const BlockRef& target, const BlockRef& anchor) {
    if (p.target_number != target.number || p.anchor_number != anchor.number)
        return "inclusion proof covers other blocks";
    if (p.kind == Accumulator::mpt) {
        mpt::Trie rebuilt;
        const auto r = blockcache::replay(p.cache_witnesses, HashId::keccak256, &rebuilt);
        if (!r) {
            std::string where = r.failing_step ? " at witness " + std::to_string(*r.failing_step) : "";
            return std::string{"witness chain: "} + std::string{blockcache::to_string(*r.failure)} + where + ": " +
                   r.reason;
        }
        if (rebuilt.root() != p.root) return "witness chain does not end at the cache root";
        if (auto e = check_cached(p, target, p.target_mpt); !e.empty()) return e;
        return check_cached(p, anchor, p.anchor_mpt);
    }
    const auto r = mmr::replay_witnesses(p.mmr_witnesses);
    if (!r) {
        std::string where = r.failing_step ? " at witness " + std::to_string(*r.failing_step) : "";
        return "witness chain" + where + ": " + r.reason;
    }
    if (p.mmr_witnesses.back().new_root != p.root) return "witness chain does not end at the mmr root";
    if (auto e = check_mmr_leaf(p, target, p.target_mmr); !e.empty()) return e;
    return check_mmr_leaf(p, anchor, p.anchor_mmr);
}

// ---------------------------------------------------------------------------
// Steps

namespace {

using CheckFn = std::function<std::string(const World&, const Claims&, const Artifact&)>;
using DescribeFn = std::function<std::string(const Claims&)>;

struct StepSpec {
    std::string name;
    CheckFn check;
    DescribeFn describe;
};

using RefOf = std::function<BlockRef(const Claims&)>;
using ChainOf = std::function<uint64_t(const Claims&)>;

std::string ref_text(uint64_t chain_id, uint64_t number) {
    return "chain=" + std::to_string(chain_id) + " block=" + std::to_string(number);
}

template <class T>
const T* as(const Artifact& a) {
    return std::get_if<T>(&a);
}

std::optional<uint64_t> preimage_number(ByteView rlp) {
    try {
        return decode_header(rlp).number;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

// Proof of an account slot at `ref`, checked against a value.
std::string check_slot(const Artifact& a, const BlockRef& ref, const Address& address, const Bytes32& slot,
                       const std::optional<Bytes32>& expected) {
    const auto* p = as<chain::HierarchicalProof>(a);
    if (!p) return "expected a storage proof";
    if (p->address != address || p->slot_key != slot) return "storage proof is for another account or slot";
    if (preimage_number(p->header_preimage) != ref.number)
        return "header preimage is not block " + std::to_string(ref.number);
    std::optional<Bytes32> value;
    try {
        value = chain::verify_hierarchical(ref.hash, *p);
    } catch (const chain::InvalidHierarchicalProof& e) {
        return e.what();
    }
    if (value != expected)
        return "slot holds " + (value ? value->hex() : std::string{"nothing"}) + ", expected " +
               (expected ? expected->hex() : std::string{"nothing"});
    return {};
}

StepSpec value_proof(std::string name, ChainOf chain_of, RefOf ref_of) {
    return {std::move(name),
            [=](const World&, const Claims& c, const Artifact& a) {
                return check_slot(a, ref_of(c), c.address, c.slot, c.value);
            },
            [=](const Claims& c) { return "storage_proof " + ref_text(chain_of(c), ref_of(c).number); }};
}

StepSpec rollup_proof(std::string name) {
    return {std::move(name),
            [](const World&, const Claims& c, const Artifact& a) {
                return check_slot(a, c.l1_landing, rollup_contract(), state_update_slot(c.source_chain, c.epoch),
                                  c.l2_transfered.hash);
            },
            [](const Claims& c) {
                return "rollup_slot " + ref_text(c.l1_chain, c.l1_landing.number) + " epoch=" + std::to_string(c.epoch);
            }};
}

StepSpec bridge_proof(std::string name, ChainOf chain_of) {
    return {std::move(name),
            [](const World&, const Claims& c, const Artifact& a) {
                return check_slot(a, c.dest_proof_block, bridge_contract(), bridge_slot(), c.l1_transfered.hash);
            },
            [=](const Claims& c) { return "bridge_slot " + ref_text(chain_of(c), c.dest_proof_block.number); }};
}

StepSpec state_update_step(std::string name) {
    return {std::move(name),
            [](const World&, const Claims& c, const Artifact& a) -> std::string {
                const auto* u = as<StateUpdate>(a);
                if (!u) return "expected a state update record";
                if (u->l2_chain != c.source_chain) return "state update belongs to another chain";
                if (u->l2_block < c.source_proof_block.number) return "state update predates the proof block";
                if (u->l2_block != c.l2_transfered.number || u->l2_hash != c.l2_transfered.hash)
                    return "state update does not carry the transferred block";
                if (u->l1_block != c.l1_landing.number) return "state update landed in another L1 block";
                if (u->epoch != c.epoch) return "state update epoch mismatch";
                return {};
            },
            [](const Claims& c) {
                return "state_update chain=" + std::to_string(c.source_chain) + " epoch=" + std::to_string(c.epoch) +
                       " l2_block=" + std::to_string(c.l2_transfered.number);
            }};
}

StepSpec bridge_step(std::string name) {
    return {std::move(name),
            [](const World&, const Claims& c, const Artifact& a) -> std::string {
                const auto* b = as<BridgePush>(a);
                if (!b) return "expected a bridge record";
                if (b->l2_chain != c.dest_chain) return "bridge record belongs to another chain";
                if (b->l1_block != c.l1_transfered.number || b->l1_hash != c.l1_transfered.hash)
                    return "bridge record does not carry the transferred L1 block";
                if (b->l2_block != c.dest_proof_block.number) return "bridge record landed in another block";
                return {};
            },
            [](const Claims& c) {
                return "bridge_push chain=" + std::to_string(c.dest_chain) +
                       " l1_block=" + std::to_string(c.l1_transfered.number) +
                       " l2_block=" + std::to_string(c.dest_proof_block.number);
            }};
}

StepSpec inclusion_step(std::string name, ChainOf chain_of, RefOf target_of, RefOf anchor_of) {
    return {std::move(name),
            [=](const World&, const Claims& c, const Artifact& a) -> std::string {
                const auto* p = as<InclusionProof>(a);
                if (!p) return "expected an inclusion proof";
                if (p->chain_id != chain_of(c)) return "inclusion proof is for another chain";
                return check_inclusion(*p, target_of(c), anchor_of(c));
            },
            [=](const Claims& c) {
                return "inclusion chain=" + std::to_string(chain_of(c)) +
                       " blocks=" + std::to_string(target_of(c).number) + ".." + std::to_string(anchor_of(c).number);
            }};
}

std::string check_preimage(const Artifact& a, const BlockRef& ref) {
    const auto* h = as<HeaderPreimage>(a);
    if (!h) return "expected a header preimage";
    if (keccak256(h->rlp) != ref.hash) return "header preimage does not hash to the claimed block hash";
    if (preimage_number(h->rlp) != ref.number) return "header preimage is not block " + std::to_string(ref.number);
    return {};
}

StepSpec header_step(std::string name, ChainOf chain_of, RefOf ref_of) {
    return {std::move(name), [=](const World&, const Claims& c, const Artifact& a) { return check_preimage(a, ref_of(c)); },
            [=](const Claims& c) { return "header " + ref_text(chain_of(c), ref_of(c).number); }};
}

// The final step reads the anchor hash through BLOCKHASH on the verifying chain.
StepSpec anchor_step(std::string name, ChainOf chain_of) {
    return {std::move(name),
            [=](const World& w, const Claims& c, const Artifact& a) -> std::string {
                if (auto e = check_preimage(a, c.anchor); !e.empty()) return e;
                const auto h = w.chain(chain_of(c)).blockhash(c.verification_block, c.anchor.number);
                if (!h) return "anchor block hash is not available to the verification block";
                if (*h != c.anchor.hash) return "BLOCKHASH disagrees with the anchor hash";
                return {};
            },
            [=](const Claims& c) {
                return "blockhash chain=" + std::to_string(chain_of(c)) + " block=" + std::to_string(c.anchor.number) +
                       " from=" + std::to_string(c.verification_block);
            }};
}

BlockRef source_ref(const Claims& c) { return c.source_proof_block; }
BlockRef l2_transfered(const Claims& c) { return c.l2_transfered; }
BlockRef l1_landing(const Claims& c) { return c.l1_landing; }
BlockRef l1_transfered(const Claims& c) { return c.l1_transfered; }
BlockRef dest_ref(const Claims& c) { return c.dest_proof_block; }
BlockRef anchor_ref(const Claims& c) { return c.anchor; }
uint64_t source_chain(const Claims& c) { return c.source_chain; }
uint64_t dest_chain(const Claims& c) { return c.dest_chain; }
uint64_t l1_chain(const Claims& c) { return c.l1_chain; }

const std::vector<StepSpec>& specs(Flow f) {
    static const std::vector<StepSpec> l2_to_l1 = {
        value_proof("l2_storage_proof", source_chain, source_ref),
        state_update_step("state_update"),
        inclusion_step("l2_inclusion", source_chain, source_ref, l2_transfered),
        header_step("l1_landing_block", l1_chain, l1_landing),
        rollup_proof("l1_storage_proof"),
        inclusion_step("l1_inclusion", l1_chain, l1_landing, anchor_ref),
        anchor_step("verify_on_l1", l1_chain),
    };
    static const std::vector<StepSpec> l1_to_l2 = {
        bridge_step("bridge_delivery"),
        value_proof("l1_storage_proof", l1_chain, source_ref),
        inclusion_step("l1_inclusion", l1_chain, source_ref, l1_transfered),
        bridge_proof("l2_storage_proof", dest_chain),
        inclusion_step("l2_inclusion", dest_chain, dest_ref, anchor_ref),
        anchor_step("verify_on_l2", dest_chain),
    };
    static const std::vector<StepSpec> l2_to_l2 = {
        value_proof("source_storage_proof", source_chain, source_ref),
        state_update_step("state_update"),
        inclusion_step("source_inclusion", source_chain, source_ref, l2_transfered),
        header_step("l1_landing_block", l1_chain, l1_landing),
        rollup_proof("l1_storage_proof"),
        inclusion_step("l1_inclusion", l1_chain, l1_landing, l1_transfered),
        header_step("l1_transfered_block", l1_chain, l1_transfered),
        bridge_step("bridge_delivery"),
        bridge_proof("dest_storage_proof", dest_chain),
        inclusion_step("dest_inclusion", dest_chain, dest_ref, anchor_ref),
        anchor_step("verify_on_dest", dest_chain),
    };
    switch (f) {
        case Flow::l2_to_l1: return l2_to_l1;
        case Flow::l1_to_l2: return l1_to_l2;
        case Flow::l2_to_l2: return l2_to_l2;
    }
    return l2_to_l1;
}

}  // namespace

const std::vector<std::string>& step_names(Flow f) {
    static const auto names = [] {
        std::map<Flow, std::vector<std::string>> m;
        for (auto fl : {Flow::l2_to_l1, Flow::l1_to_l2, Flow::l2_to_l2})
            for (const auto& s : specs(fl)) m[fl].push_back(s.name);
        return m;
    }();
    return names.at(f);
}

// ---------------------------------------------------------------------------
// World

namespace {

enum Phase : int {
    kWrites = 0,
    kL2Blocks = 1,
    kStateUpdates = 2,
    kL1Blocks = 3,
    kBridgePushes = 4,
};

}  // namespace

World::World(std::vector<NetworkConfig> configs, uint64_t seed, Accumulator accumulator)
    : accumulator_{accumulator} {
    validate(configs);
    for (const auto& c : configs) {
        chain::ChainParams params;
        params.chain_id = c.chain_id;
        params.block_time = c.block_time;
        params.blockhash_mode = c.blockhash_mode;
        Node n{c, chain::SimChain{params}, {}, {}, {}, {}, 0, SplitMix64{seed ^ (c.chain_id * 0x9E3779B97F4A7C15ULL)}};
        nodes_.emplace(c.chain_id, std::move(n));
        if (c.layer == Layer::L1) l1_id_ = c.chain_id;
    }
    for (const auto& [id, n] : nodes_) {
        const auto& c = n.config;
        push_event(c.block_time, EventKind::produce, id, true);
        if (c.activity_interval) push_event(c.activity_interval, EventKind::activity, id, true);
        if (c.layer == Layer::L2) {
            if (c.state_update_interval) push_event(c.state_update_interval, EventKind::state_update, id, true);
            if (c.bridge && c.bridge_push_interval)
                push_event(c.bridge_push_interval, EventKind::bridge_push, id, true);
        }
    }
}

void World::push_event(uint64_t time, EventKind kind, uint64_t chain_id, bool periodic, chain::Change change) {
    int phase = kWrites;
    switch (kind) {
        case EventKind::write:
        case EventKind::activity: phase = kWrites; break;
        case EventKind::produce: phase = node(chain_id).config.layer == Layer::L1 ? kL1Blocks : kL2Blocks; break;
        case EventKind::state_update: phase = kStateUpdates; break;
        case EventKind::bridge_push: phase = kBridgePushes; break;
    }
    queue_.push(Event{time, phase, seq_++, kind, chain_id, std::move(change), periodic});
}

World::Node& World::node(uint64_t chain_id) {
    const auto it = nodes_.find(chain_id);
    if (it == nodes_.end()) throw Error(ErrorCode::UnknownChain, "no chain " + std::to_string(chain_id));
    return it->second;
}

const World::Node& World::node(uint64_t chain_id) const { return const_cast<World*>(this)->node(chain_id); }

const chain::SimChain& World::chain(uint64_t chain_id) const { return node(chain_id).chain; }
const NetworkConfig& World::config(uint64_t chain_id) const { return node(chain_id).config; }

void World::schedule_write(uint64_t at, uint64_t chain_id, const Address& a, const Bytes32& slot,
                           const Bytes32& value) {
    (void)node(chain_id);
    if (at < clock_) throw Error(ErrorCode::InvalidConfig, "cannot schedule in the past");
    if (value.is_zero()) throw Error(ErrorCode::MalformedChange, "zero storage value");
    push_event(at, EventKind::write, chain_id, false, chain::set_storage(a, slot, value));
}

void World::schedule_state_update(uint64_t at, uint64_t l2_chain) {
    if (node(l2_chain).config.layer != Layer::L2)
        throw Error(ErrorCode::InvalidConfig, "state updates come from L2 chains");
    if (at < clock_) throw Error(ErrorCode::InvalidConfig, "cannot schedule in the past");
    push_event(at, EventKind::state_update, l2_chain, false);
}

void World::schedule_bridge_push(uint64_t at, uint64_t l2_chain) {
    const auto& c = node(l2_chain).config;
    if (c.layer != Layer::L2 || !c.bridge)
        throw Error(ErrorCode::InvalidConfig, "chain " + std::to_string(l2_chain) + " has no bridge");
    if (at < clock_) throw Error(ErrorCode::InvalidConfig, "cannot schedule in the past");
    push_event(at, EventKind::bridge_push, l2_chain, false);
}

void World::advance(uint64_t until_time) {
    while (!queue_.empty() && queue_.top().time <= until_time) {
        const Event e = queue_.top();
        queue_.pop();
        clock_ = e.time;
        handle(e);
    }
    clock_ = std::max(clock_, until_time);
}

void World::log(json line) { event_log_.push_back(line.dump()); }

void World::handle(const Event& e) {
    Node& n = node(e.chain_id);
    const auto again = [&](uint64_t interval) {
        if (e.periodic) push_event(e.time + interval, e.kind, e.chain_id, true);
    };
    switch (e.kind) {
        case EventKind::write:
            n.pending.push_back(e.change);
            n.pending_writes.push_back({{"address", e.change.address.hex()},
                                        {"slot", e.change.slot.hex()},
                                        {"value", e.change.value.hex()},
                                        {"submitted_at", e.time}});
            break;
        case EventKind::activity: {
            Bytes32 slot = chain::u256(n.rng.next() % 16);
            Bytes32 value = n.rng.fixed<32>();
            value[31] |= 1;
            n.pending.push_back(chain::set_storage(background_contract(), slot, value));
            again(n.config.activity_interval);
            break;
        }
        case EventKind::produce:
            produce(n, e.time);
            again(n.config.block_time);
            break;
        case EventKind::state_update: {
            Node& l1 = node(l1_id_);
            StateUpdate u;
            u.l2_chain = e.chain_id;
            u.l2_block = n.chain.head_number();
            u.l2_hash = n.chain.block_hash(u.l2_block);
            u.epoch = n.next_epoch++;
            u.submitted_at = e.time;
            l1.pending.push_back(chain::set_storage(rollup_contract(), state_update_slot(u.l2_chain, u.epoch), u.l2_hash));
            l1.pending_updates.push_back(u);
            again(n.config.state_update_interval);
            break;
        }
        case EventKind::bridge_push: {
            const Node& l1 = node(l1_id_);
            BridgePush b;
            b.l1_block = l1.chain.head_number();
            b.l1_hash = l1.chain.block_hash(b.l1_block);
            b.l2_chain = e.chain_id;
            b.submitted_at = e.time;
            n.pending.push_back(chain::set_storage(bridge_contract(), bridge_slot(), b.l1_hash));
            n.pending_pushes.push_back(b);
            again(n.config.bridge_push_interval);
            break;
        }
    }
}

void World::produce(Node& n, uint64_t time) {
    const auto& h = n.chain.apply_block(n.pending, time);
    n.pending.clear();
    for (auto& w : n.pending_writes) {
        w["event"] = "write";
        w["chain"] = n.config.chain_id;
        w["block"] = h.number;
        w["time"] = time;
        log(std::move(w));
    }
    n.pending_writes.clear();
    for (auto& u : n.pending_updates) {
        u.l1_block = h.number;
        u.time = time;
        state_updates_.push_back(u);
        log({{"event", "state_update"},
             {"time", time},
             {"l2_chain", u.l2_chain},
             {"l2_block", u.l2_block},
             {"l2_hash", u.l2_hash.hex()},
             {"epoch", u.epoch},
             {"submitted_at", u.submitted_at},
             {"l1_block", u.l1_block}});
    }
    n.pending_updates.clear();
    for (auto& b : n.pending_pushes) {
        b.l2_block = h.number;
        b.time = time;
        bridge_log_.push_back(b);
        log({{"event", "bridge_push"},
             {"time", time},
             {"l1_block", b.l1_block},
             {"l1_hash", b.l1_hash.hex()},
             {"l2_chain", b.l2_chain},
             {"l2_block", b.l2_block},
             {"submitted_at", b.submitted_at}});
    }
    n.pending_pushes.clear();
}

Finality World::finality_of(uint64_t chain_id, uint64_t block_number, uint64_t at_time) const {
    const Node& n = node(chain_id);
    if (at_time > clock_) throw Error(ErrorCode::InvalidConfig, "finality query beyond the simulation clock");
    const auto& h = n.chain.header(block_number);
    if (h.timestamp > at_time)
        throw Error(ErrorCode::UnknownBlock, "block " + std::to_string(block_number) + " did not exist yet");
    if (n.config.layer == Layer::L1)
        return at_time >= h.timestamp + n.config.l1_finality_delay ? Finality::objective : Finality::none;
    for (const auto& u : state_updates_) {
        if (u.time > at_time) break;
        if (u.l2_chain != chain_id || u.l2_block < block_number) continue;
        return at_time >= u.time + n.config.challenge_period ? Finality::objective : Finality::weak;
    }
    return Finality::none;
}

// ---------------------------------------------------------------------------
// Gathering

namespace {

struct Abort {
    FlowError error;
};

[[noreturn]] void abort_at(size_t step, std::string code, std::string message) {
    throw Abort{FlowError{std::move(code), step, std::move(message)}};
}

BlockRef ref_at(const chain::SimChain& c, uint64_t number) { return {number, c.block_hash(number)}; }

HeaderPreimage preimage_of(const chain::SimChain& c, uint64_t number) {
    return {c.params().chain_id, encode_header(c.header(number))};
}

}  // namespace

Gathered World::gather(const Request& r) const {
    switch (r.flow) {
        case Flow::l2_to_l1: return gather_l2_on_l1(r);
        case Flow::l1_to_l2: return gather_l1_on_l2(r);
        case Flow::l2_to_l2: return gather_l2_on_l2(r);
    }
    return {};
}

namespace {

// Shared opening of the flows that start on an L2: the value proof, the
// covering state update, and inclusion of the proof block in the
// transferred block's history.
void gather_source(const World& w, const Request& r, Evidence& ev, std::span<const StateUpdate> updates,
                   Accumulator acc) {
    const auto& l1 = w.chain(ev.claims.l1_chain);
    auto& c = ev.claims;
    const auto& src = w.chain(r.source_chain);
    if (w.config(r.source_chain).layer != Layer::L2)
        abort_at(0, "InvalidConfig", "source chain " + std::to_string(r.source_chain) + " is not an L2");
    if (r.proof_block > src.head_number())
        abort_at(0, "UnknownBlock", "source chain has no block " + std::to_string(r.proof_block) + " yet");
    c.source_proof_block = ref_at(src, r.proof_block);
    c.value = src.state_at(r.proof_block)->storage(r.address, r.slot);
    ev.artifacts.emplace_back(src.make_storage_proof(r.proof_block, r.address, r.slot));

    const StateUpdate* covering = nullptr;
    for (const auto& u : updates)
        if (u.l2_chain == r.source_chain && u.l2_block >= r.proof_block) {
            covering = &u;
            break;
        }
    if (!covering)
        abort_at(1, "NotYetCommitted",
                 "no state update covering block " + std::to_string(r.proof_block) + " has landed on L1");
    c.l2_transfered = {covering->l2_block, covering->l2_hash};
    c.epoch = covering->epoch;
    ev.artifacts.emplace_back(*covering);
    c.l1_landing = ref_at(l1, covering->l1_block);

    ev.artifacts.emplace_back(make_inclusion(src, acc, r.proof_block, covering->l2_block));
}

const BridgePush* latest_bridge(std::span<const BridgePush> log, uint64_t l2_chain, uint64_t before_block) {
    const BridgePush* out = nullptr;
    for (const auto& b : log)
        if (b.l2_chain == l2_chain && b.l2_block < before_block) out = &b;
    return out;
}

}  // namespace

Gathered World::gather_l2_on_l1(const Request& r) const {
    Gathered g;
    auto& ev = g.evidence;
    auto& c = ev.claims;
    ev.flow = Flow::l2_to_l1;
    c.source_chain = r.source_chain;
    c.dest_chain = l1_id_;
    c.l1_chain = l1_id_;
    c.address = r.address;
    c.slot = r.slot;
    const auto& l1 = chain(l1_id_);
    c.verification_block = l1.head_number();
    try {
        gather_source(*this, r, ev, state_updates_, accumulator_);
        ev.artifacts.emplace_back(preimage_of(l1, c.l1_landing.number));
        ev.artifacts.emplace_back(
            l1.make_storage_proof(c.l1_landing.number, rollup_contract(), state_update_slot(r.source_chain, c.epoch)));
        if (c.l1_landing.number >= c.verification_block)
            abort_at(5, "InclusionUnprovable",
                     "L1 block " + std::to_string(c.l1_landing.number) + " is not older than the verification block");
        c.anchor = ref_at(l1, c.verification_block - 1);
        ev.artifacts.emplace_back(make_inclusion(l1, accumulator_, c.l1_landing.number, c.anchor.number));
        ev.artifacts.emplace_back(preimage_of(l1, c.anchor.number));
    } catch (const Abort& a) {
        g.error = a.error;
    }
    return g;
}

Gathered World::gather_l1_on_l2(const Request& r) const {
    Gathered g;
    auto& ev = g.evidence;
    auto& c = ev.claims;
    ev.flow = Flow::l1_to_l2;
    c.source_chain = l1_id_;
    c.dest_chain = r.dest_chain;
    c.l1_chain = l1_id_;
    c.address = r.address;
    c.slot = r.slot;
    const auto& l1 = chain(l1_id_);
    try {
        const auto& dcfg = config(r.dest_chain);
        if (dcfg.layer != Layer::L2) abort_at(0, "InvalidConfig", "destination is not an L2");
        const auto& dst = chain(r.dest_chain);
        c.verification_block = dst.head_number();
        if (!dcfg.bridge) abort_at(0, "BridgeUnavailable", "chain " + std::to_string(r.dest_chain) + " has no bridge");
        const auto* b = latest_bridge(bridge_log_, r.dest_chain, c.verification_block);
        if (!b) abort_at(0, "NotYetCommitted", "no L1 block hash has been bridged yet");
        c.l1_transfered = {b->l1_block, b->l1_hash};
        c.dest_proof_block = ref_at(dst, b->l2_block);
        ev.artifacts.emplace_back(*b);

        if (r.proof_block > l1.head_number())
            abort_at(1, "UnknownBlock", "L1 has no block " + std::to_string(r.proof_block) + " yet");
        c.source_proof_block = ref_at(l1, r.proof_block);
        c.value = l1.state_at(r.proof_block)->storage(r.address, r.slot);
        ev.artifacts.emplace_back(l1.make_storage_proof(r.proof_block, r.address, r.slot));

        if (r.proof_block > b->l1_block)
            abort_at(2, "ProofBlockTooNew",
                     "L1 block " + std::to_string(r.proof_block) + " is newer than the last bridged block " +
                         std::to_string(b->l1_block));
        ev.artifacts.emplace_back(make_inclusion(l1, accumulator_, r.proof_block, b->l1_block));
        ev.artifacts.emplace_back(dst.make_storage_proof(b->l2_block, bridge_contract(), bridge_slot()));
        c.anchor = ref_at(dst, c.verification_block - 1);
        ev.artifacts.emplace_back(make_inclusion(dst, accumulator_, b->l2_block, c.anchor.number));
        ev.artifacts.emplace_back(preimage_of(dst, c.anchor.number));
    } catch (const Abort& a) {
        g.error = a.error;
    }
    return g;
}

Gathered World::gather_l2_on_l2(const Request& r) const {
    Gathered g;
    auto& ev = g.evidence;
    auto& c = ev.claims;
    ev.flow = Flow::l2_to_l2;
    c.source_chain = r.source_chain;
    c.dest_chain = r.dest_chain;
    c.l1_chain = l1_id_;
    c.address = r.address;
    c.slot = r.slot;
    const auto& l1 = chain(l1_id_);
    try {
        const auto& dcfg = config(r.dest_chain);
        if (dcfg.layer != Layer::L2) abort_at(0, "InvalidConfig", "destination is not an L2");
        const auto& dst = chain(r.dest_chain);
        c.verification_block = dst.head_number();
        gather_source(*this, r, ev, state_updates_, accumulator_);
        ev.artifacts.emplace_back(preimage_of(l1, c.l1_landing.number));
        ev.artifacts.emplace_back(
            l1.make_storage_proof(c.l1_landing.number, rollup_contract(), state_update_slot(r.source_chain, c.epoch)));

        if (!dcfg.bridge) abort_at(5, "BridgeUnavailable", "chain " + std::to_string(r.dest_chain) + " has no bridge");
        const auto* b = latest_bridge(bridge_log_, r.dest_chain, c.verification_block);
        if (!b || b->l1_block < c.l1_landing.number)
            abort_at(5, "NotYetCommitted",
                     "the last L1 block bridged to chain " + std::to_string(r.dest_chain) +
                         " predates the state update at L1 block " + std::to_string(c.l1_landing.number));
        c.l1_transfered = {b->l1_block, b->l1_hash};
        c.dest_proof_block = ref_at(dst, b->l2_block);
        ev.artifacts.emplace_back(make_inclusion(l1, accumulator_, c.l1_landing.number, b->l1_block));
        ev.artifacts.emplace_back(preimage_of(l1, b->l1_block));
        ev.artifacts.emplace_back(*b);
        ev.artifacts.emplace_back(dst.make_storage_proof(b->l2_block, bridge_contract(), bridge_slot()));
        c.anchor = ref_at(dst, c.verification_block - 1);
        ev.artifacts.emplace_back(make_inclusion(dst, accumulator_, b->l2_block, c.anchor.number));
        ev.artifacts.emplace_back(preimage_of(dst, c.anchor.number));
    } catch (const Abort& a) {
        g.error = a.error;
    }
    return g;
}

// ---------------------------------------------------------------------------
// Checking

VerificationReport World::check(const Request& r, const Gathered& g) const {
    VerificationReport rep;
    rep.request_id = r.id;
    rep.flow = g.evidence.flow;
    rep.time = clock_;
    rep.policy = r.policy;

    const auto& steps = specs(g.evidence.flow);
    const auto& c = g.evidence.claims;
    const size_t limit = g.error ? g.error->step : steps.size();
    bool all_pass = true;
    for (size_t i = 0; i < limit; ++i) {
        StepResult s{steps[i].name, steps[i].describe(c), false, {}};
        if (i < g.evidence.artifacts.size()) {
            try {
                s.detail = steps[i].check(*this, c, g.evidence.artifacts[i]);
            } catch (const std::exception& e) {
                s.detail = e.what();
            }
            s.pass = s.detail.empty();
        } else {
            s.detail = "missing artifact";
        }
        all_pass = all_pass && s.pass;
        rep.steps.push_back(std::move(s));
    }
    if (g.error) {
        rep.steps.push_back({steps.at(g.error->step).name, "-", false, g.error->code + ": " + g.error->message});
        all_pass = false;
    }

    auto safe_finality = [&](uint64_t chain_id, uint64_t number) {
        try {
            return finality_of(chain_id, number, clock_);
        } catch (const Error&) {
            return Finality::none;
        }
    };
    switch (g.evidence.flow) {
        case Flow::l2_to_l1: rep.finality_at_verification = safe_finality(r.source_chain, r.proof_block); break;
        case Flow::l1_to_l2: rep.finality_at_verification = safe_finality(l1_id_, r.proof_block); break;
        case Flow::l2_to_l2: {
            Finality f = safe_finality(r.source_chain, r.proof_block);
            // The source state update must itself be final on L1.
            const bool landed = g.evidence.artifacts.size() > 1;
            const Finality l1f = landed ? safe_finality(l1_id_, c.l1_landing.number) : Finality::none;
            rep.finality_at_verification = std::min(f, l1f == Finality::objective ? Finality::objective : Finality::none);
            break;
        }
    }

    if (g.error) {
        rep.error = g.error->code;
    } else if (!all_pass) {
        rep.error = "VerificationFailed";
    } else if (rep.finality_at_verification < r.policy) {
        rep.error = "FinalityInsufficient";
    } else {
        rep.accepted = true;
        rep.value = c.value;
    }
    return rep;
}

VerificationReport World::run(const Request& r) {
    const auto rep = check(r, gather(r));
    log({{"event", "verification"},
         {"time", clock_},
         {"request", r.id},
         {"flow", to_string(r.flow)},
         {"accepted", rep.accepted},
         {"error", rep.error ? json(*rep.error) : json(nullptr)}});
    return rep;
}

VerificationReport World::verify_l2_on_l1(uint64_t l2_chain, uint64_t l2_proof_block, const Address& a,
                                          const Bytes32& slot, Finality policy) {
    Request r;
    r.flow = Flow::l2_to_l1;
    r.at = clock_;
    r.source_chain = l2_chain;
    r.proof_block = l2_proof_block;
    r.address = a;
    r.slot = slot;
    r.dest_chain = l1_id_;
    r.policy = policy;
    return run(r);
}

VerificationReport World::verify_l1_on_l2(uint64_t l1_proof_block, const Address& a, const Bytes32& slot,
                                          uint64_t l2_chain, Finality policy) {
    Request r;
    r.flow = Flow::l1_to_l2;
    r.at = clock_;
    r.source_chain = l1_id_;
    r.proof_block = l1_proof_block;
    r.address = a;
    r.slot = slot;
    r.dest_chain = l2_chain;
    r.policy = policy;
    return run(r);
}

VerificationReport World::verify_l2_on_l2(uint64_t source_l2, uint64_t source_proof_block, const Address& a,
                                          const Bytes32& slot, uint64_t dest_l2, Finality policy) {
    Request r;
    r.flow = Flow::l2_to_l2;
    r.at = clock_;
    r.source_chain = source_l2;
    r.proof_block = source_proof_block;
    r.address = a;
    r.slot = slot;
    r.dest_chain = dest_l2;
    r.policy = policy;
    return run(r);
}

// ---------------------------------------------------------------------------
// Scenarios

ScenarioResult run_scenario(const Scenario& s) {
    World w{s.networks, s.seed, s.accumulator};
    for (const auto& e : s.events) {
        const uint64_t at = e.at("at").get<uint64_t>();
        const uint64_t chain_id = e.at("chain").get<uint64_t>();
        const auto kind = e.at("kind").get<std::string>();
        if (kind == "write") {
            w.schedule_write(at, chain_id, e.at("address").get<Address>(), e.at("slot").get<Bytes32>(),
                             e.at("value").get<Bytes32>());
        } else if (kind == "state_update") {
            w.schedule_state_update(at, chain_id);
        } else if (kind == "bridge_push") {
            w.schedule_bridge_push(at, chain_id);
        } else {
            throw Error(ErrorCode::InvalidConfig, "unknown event kind: " + kind);
        }
    }
    auto requests = s.requests;
    std::stable_sort(requests.begin(), requests.end(), [](const Request& a, const Request& b) { return a.at < b.at; });
    ScenarioResult out;
    for (const auto& r : requests) {
        w.advance(r.at);
        out.reports.push_back(w.run(r));
    }
    w.advance(std::max(s.until, w.clock()));
    out.event_log = w.event_log();
    return out;
}

std::string ScenarioResult::report_json(const std::string& name) const {
    return json{{"scenario", name}, {"reports", reports}}.dump(2) + "\n";
}

std::string ScenarioResult::event_log_ndjson() const {
    std::string out;
    for (const auto& line : event_log) out += line + "\n";
    return out;
}

void to_json(json& j, const NetworkConfig& c) {
    j = {{"chain_id", c.chain_id},
         {"layer", to_string(c.layer)},
         {"block_time", c.block_time},
         {"activity_interval", c.activity_interval},
         {"blockhash_mode", to_string(c.blockhash_mode)}};
    if (c.layer == Layer::L1) {
        j["l1_finality_delay"] = c.l1_finality_delay;
    } else {
        j["parent"] = c.parent;
        j["state_update_interval"] = c.state_update_interval;
        j["challenge_period"] = c.challenge_period;
        j["bridge"] = c.bridge;
        j["bridge_push_interval"] = c.bridge_push_interval;
    }
}

void from_json(const json& j, NetworkConfig& c) {
    const auto layer = j.at("layer").get<std::string>();
    const uint64_t id = j.at("chain_id").get<uint64_t>();
    if (layer == "L1") {
        c = NetworkConfig::l1(id);
    } else if (layer == "L2") {
        c = NetworkConfig::l2(id, j.value("parent", uint64_t{1}));
    } else {
        throw Error(ErrorCode::InvalidConfig, "unknown layer: " + layer);
    }
    c.block_time = j.value("block_time", c.block_time);
    c.state_update_interval = j.value("state_update_interval", c.state_update_interval);
    c.challenge_period = j.value("challenge_period", c.challenge_period);
    c.bridge = j.value("bridge", c.bridge);
    c.bridge_push_interval = j.value("bridge_push_interval", c.bridge_push_interval);
    c.l1_finality_delay = j.value("l1_finality_delay", c.l1_finality_delay);
    c.activity_interval = j.value("activity_interval", c.activity_interval);
    if (j.contains("blockhash_mode"))
        c.blockhash_mode = chain::parse_blockhash_mode(j.at("blockhash_mode").get<std::string>());
}

void to_json(json& j, const Request& r) {
    j = {{"id", r.id},
         {"at", r.at},
         {"flow", to_string(r.flow)},
         {"source_chain", r.source_chain},
         {"proof_block", r.proof_block},
         {"address", r.address.hex()},
         {"slot", r.slot.hex()},
         {"dest_chain", r.dest_chain},
         {"policy", to_string(r.policy)}};
}

void from_json(const json& j, Request& r) {
    r.id = j.value("id", std::string{});
    r.at = j.at("at").get<uint64_t>();
    r.flow = parse_flow(j.at("flow").get<std::string>());
    r.source_chain = j.value("source_chain", uint64_t{0});
    r.proof_block = j.at("proof_block").get<uint64_t>();
    r.address = j.at("address").get<Address>();
    r.slot = j.at("slot").get<Bytes32>();
    r.dest_chain = j.value("dest_chain", uint64_t{0});
    r.policy = parse_finality(j.value("policy", std::string{"WeakFinality"}));
}

void from_json(const json& j, Scenario& s) {
    s.name = j.value("name", std::string{"scenario"});
    s.seed = j.value("seed", uint64_t{0});
    s.accumulator = parse_accumulator(j.value("accumulator", std::string{"mpt"}));
    s.networks = j.at("networks").get<std::vector<NetworkConfig>>();
    s.events = j.value("events", json::array());
    s.requests = j.value("requests", std::vector<Request>{});
    s.until = j.value("until", uint64_t{0});
}

void to_json(json& j, const VerificationReport& r) {
    json steps = json::array();
    for (size_t i = 0; i < r.steps.size(); ++i) {
        const auto& s = r.steps[i];
        steps.push_back(
            {{"index", i + 1}, {"name", s.name}, {"evidence", s.evidence}, {"pass", s.pass}, {"detail", s.detail}});
    }
    j = {{"request_id", r.request_id},
         {"flow", to_string(r.flow)},
         {"time", r.time},
         {"policy", to_string(r.policy)},
         {"steps", std::move(steps)},
         {"finality_at_verification", to_string(r.finality_at_verification)},
         {"accepted", r.accepted},
         {"error", r.error ? json(*r.error) : json(nullptr)},
         {"value", r.value ? json(r.value->hex()) : json(nullptr)}};
}

}  // namespace stateproof::sim
