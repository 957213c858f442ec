// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#include <stateproof/chain.hpp>
#include <stateproof/json_util.hpp>
#include <stateproof/rlp.hpp>

namespace stateproof::chain {

U256 u256(uint64_t v) { return U256::from_view(be_trimmed(v)); }

const Digest& empty_code_hash() {
    static const Digest h = keccak256(ByteView{});
    return h;
}

Bytes encode_account(const Account& a) {
    return rlp::encode_list({rlp::encode_uint(a.nonce), rlp::encode(trim_leading_zeros(a.balance.view())),
                             rlp::encode(a.storage_root.view()), rlp::encode(a.code_hash.view())});
}

namespace {

Digest digest_item(const rlp::Item& item) {
    if (item.is_list || item.payload.size() != 32) throw rlp::DecodeError("expected a 32-byte string");
    return Digest::from_view(item.payload);
}

U256 u256_item(const rlp::Item& item) {
    if (item.is_list || item.payload.size() > 32) throw rlp::DecodeError("expected an integer of at most 32 bytes");
    if (!item.payload.empty() && item.payload[0] == 0) throw rlp::DecodeError("integer with leading zero");
    return U256::from_view(item.payload);
}

Bytes storage_value(const Bytes32& v) { return rlp::encode(trim_leading_zeros(v.view())); }

Bytes32 decode_storage_value(ByteView encoded) {
    const auto item = rlp::decode(encoded);
    const U256 v = u256_item(item);
    if (v.is_zero()) throw rlp::DecodeError("stored zero value");
    return v;
}

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::MalformedChange, what); }

}  // namespace

Account decode_account(ByteView encoded) {
    const auto items = rlp::decode_list(encoded);
    if (items.size() != 4) throw rlp::DecodeError("account must have 4 fields");
    Account a;
    a.nonce = rlp::decode_uint(items[0]);
    a.balance = u256_item(items[1]);
    a.storage_root = digest_item(items[2]);
    a.code_hash = digest_item(items[3]);
    return a;
}

Change set_storage(const Address& a, const Bytes32& slot, const Bytes32& value) {
    return {ChangeKind::storage, a, slot, value};
}
Change set_nonce(const Address& a, uint64_t nonce) { return {ChangeKind::nonce, a, {}, u256(nonce)}; }
Change set_balance(const Address& a, const U256& balance) { return {ChangeKind::balance, a, {}, balance}; }
Change set_code_hash(const Address& a, const Digest& code_hash) { return {ChangeKind::code_hash, a, {}, code_hash}; }

// ---------------------------------------------------------------------------
// WorldState

WorldState WorldState::apply(std::span<const Change> changes) const {
    WorldState next = *this;
    std::map<Address, bool> touched;
    for (const auto& c : changes) {
        auto it = next.accounts_.find(c.address);
        if (it == next.accounts_.end()) it = next.accounts_.emplace(c.address, Entry{{}, mpt::Trie{hash_id()}}).first;
        Entry& e = it->second;
        switch (c.kind) {
            case ChangeKind::storage:
                if (c.value.is_zero()) malformed("zero storage value for slot " + c.slot.hex());
                e.storage = e.storage.insert(keccak256(c.slot.view()).view(), storage_value(c.value));
                e.account.storage_root = e.storage.root();
                break;
            case ChangeKind::nonce:
                if (trim_leading_zeros(c.value.view()).size() > 8) malformed("nonce wider than 64 bits");
                e.account.nonce = 0;
                for (uint8_t b : trim_leading_zeros(c.value.view())) e.account.nonce = (e.account.nonce << 8) | b;
                break;
            case ChangeKind::balance:
                e.account.balance = c.value;
                break;
            case ChangeKind::code_hash:
                e.account.code_hash = c.value;
                break;
        }
        touched[c.address] = true;
    }
    for (const auto& [addr, _] : touched)
        next.state_ = next.state_.insert(keccak256(addr.view()).view(), encode_account(next.accounts_.at(addr).account));
    return next;
}

std::optional<Account> WorldState::account(const Address& a) const {
    const auto it = accounts_.find(a);
    if (it == accounts_.end()) return std::nullopt;
    return it->second.account;
}

std::optional<Bytes32> WorldState::storage(const Address& a, const Bytes32& slot) const {
    const auto it = accounts_.find(a);
    if (it == accounts_.end()) return std::nullopt;
    const auto v = it->second.storage.get(keccak256(slot.view()).view());
    if (!v) return std::nullopt;
    return decode_storage_value(*v);
}

std::vector<Address> WorldState::addresses() const {
    std::vector<Address> out;
    for (const auto& [a, _] : accounts_) out.push_back(a);
    return out;
}

mpt::Proof WorldState::account_proof(const Address& a) const { return state_.prove(keccak256(a.view()).view()); }

mpt::Proof WorldState::storage_proof(const Address& a, const Bytes32& slot) const {
    const auto it = accounts_.find(a);
    if (it == accounts_.end()) return {};
    return it->second.storage.prove(keccak256(slot.view()).view());
}

// ---------------------------------------------------------------------------
// Hierarchical proofs

std::string_view to_string(ProofLayer l) noexcept {
    switch (l) {
        case ProofLayer::header: return "header";
        case ProofLayer::account: return "account";
        case ProofLayer::storage: return "storage";
    }
    return "unknown";
}

Digest state_root_of_preimage(ByteView preimage) {
    const auto items = rlp::decode_list(preimage);
    if (items.size() == 6) return digest_item(items[2]);
    if (items.size() >= 15) return digest_item(items[3]);
    throw rlp::DecodeError("unrecognised header layout");
}

std::optional<Bytes32> verify_hierarchical(const Digest& block_hash, const HierarchicalProof& proof, HashId hash_id) {
    if (keccak256(proof.header_preimage) != block_hash)
        throw InvalidHierarchicalProof(ProofLayer::header, "preimage does not hash to the block hash");
    Digest state_root;
    try {
        state_root = state_root_of_preimage(proof.header_preimage);
    } catch (const rlp::DecodeError& e) {
        throw InvalidHierarchicalProof(ProofLayer::header, e.what());
    }

    std::optional<Bytes> account_rlp;
    try {
        account_rlp = mpt::verify(state_root, keccak256(proof.address.view()).view(), proof.account_proof, hash_id);
    } catch (const mpt::InvalidProof& e) {
        throw InvalidHierarchicalProof(ProofLayer::account, e.what());
    }
    if (!account_rlp) {
        if (!proof.storage_proof.nodes.empty())
            throw InvalidHierarchicalProof(ProofLayer::storage, "storage proof given for an absent account");
        return std::nullopt;
    }
    Account account;
    try {
        account = decode_account(*account_rlp);
    } catch (const rlp::DecodeError& e) {
        throw InvalidHierarchicalProof(ProofLayer::account, std::string{"bad account encoding: "} + e.what());
    }

    std::optional<Bytes> value;
    try {
        value = mpt::verify(account.storage_root, keccak256(proof.slot_key.view()).view(), proof.storage_proof, hash_id);
    } catch (const mpt::InvalidProof& e) {
        throw InvalidHierarchicalProof(ProofLayer::storage, e.what());
    }
    if (!value) return std::nullopt;
    try {
        return decode_storage_value(*value);
    } catch (const rlp::DecodeError& e) {
        throw InvalidHierarchicalProof(ProofLayer::storage, std::string{"bad slot encoding: "} + e.what());
    }
}

// ---------------------------------------------------------------------------
// Blockhash access

std::string_view to_string(BlockhashMode m) noexcept {
    return m == BlockhashMode::window256 ? "window256" : "ring8192";
}

BlockhashMode parse_blockhash_mode(std::string_view s) {
    if (s == "window256") return BlockhashMode::window256;
    if (s == "ring8192") return BlockhashMode::ring8192;
    throw std::invalid_argument("unknown blockhash mode: " + std::string{s});
}

uint64_t window_size(BlockhashMode m) noexcept { return m == BlockhashMode::window256 ? 256 : Eip2935Ring::kSize; }

std::string_view to_string(BlockClass c) noexcept {
    switch (c) {
        case BlockClass::current: return "current";
        case BlockClass::recent: return "recent";
        case BlockClass::historical: return "historical";
    }
    return "unknown";
}

BlockClass classify_block(uint64_t current_number, uint64_t target_number, BlockhashMode mode) {
    if (target_number > current_number) throw std::invalid_argument("target block is in the future");
    if (target_number == current_number) return BlockClass::current;
    return current_number - target_number <= window_size(mode) ? BlockClass::recent : BlockClass::historical;
}

void Eip2935Ring::write(uint64_t number, const Digest& hash) noexcept { slots_[number % kSize] = {number, hash, true}; }

std::optional<Digest> Eip2935Ring::read(uint64_t current, uint64_t target) const noexcept {
    if (target >= current || current - target > kSize) return std::nullopt;
    const Slot& s = slots_[target % kSize];
    if (!s.set || s.number != target) return std::nullopt;
    return s.hash;
}

// ---------------------------------------------------------------------------
// SimChain

SimChain::SimChain(ChainParams params, std::span<const Change> genesis) : params_{params} {
    if (params_.block_time == 0) throw Error(ErrorCode::InvalidConfig, "block time must be positive");
    auto state = std::make_shared<const WorldState>(WorldState{params_.hash_id}.apply(genesis));
    push(std::move(state), {genesis.begin(), genesis.end()}, params_.genesis_time, Digest{});
}

const BlockHeader& SimChain::push(std::shared_ptr<const WorldState> state, std::vector<Change> changes, uint64_t ts,
                                  const Digest& parent) {
    BlockHeader h;
    h.number = headers_.size();
    h.parent_hash = parent;
    h.state_root = state->state_root();
    h.transactions_root = mpt::empty_root(params_.hash_id);
    h.receipts_root = mpt::empty_root(params_.hash_id);
    h.timestamp = ts;
    snapshots_.try_emplace(h.state_root, std::move(state));
    headers_.push_back(h);
    hashes_.push_back(header_hash(h));
    changes_.push_back(std::move(changes));
    if (h.number > 0) ring_.write(h.number - 1, hashes_[h.number - 1]);
    return headers_.back();
}

const BlockHeader& SimChain::apply_block(std::span<const Change> changes) {
    return apply_block(changes, head().timestamp + params_.block_time);
}

const BlockHeader& SimChain::apply_block(std::span<const Change> changes, uint64_t timestamp) {
    if (timestamp < head().timestamp) throw Error(ErrorCode::MalformedChange, "block timestamp goes backwards");
    const auto parent_state = snapshots_.at(head().state_root);
    auto state = changes.empty() ? parent_state : std::make_shared<const WorldState>(parent_state->apply(changes));
    return push(std::move(state), {changes.begin(), changes.end()}, timestamp, hashes_.back());
}

const BlockHeader& SimChain::header(uint64_t number) const {
    if (number >= headers_.size())
        throw Error(ErrorCode::UnknownBlock, "chain " + std::to_string(params_.chain_id) + " has no block " +
                                                 std::to_string(number));
    return headers_[number];
}

Digest SimChain::block_hash(uint64_t number) const {
    (void)header(number);
    return hashes_[number];
}

const std::vector<Change>& SimChain::changes(uint64_t number) const {
    (void)header(number);
    return changes_[number];
}

std::shared_ptr<const WorldState> SimChain::state_at(uint64_t number) const {
    return snapshots_.at(header(number).state_root);
}

std::shared_ptr<const WorldState> SimChain::snapshot(const Digest& state_root) const {
    const auto it = snapshots_.find(state_root);
    return it == snapshots_.end() ? nullptr : it->second;
}

HierarchicalProof SimChain::make_storage_proof(uint64_t number, const Address& a, const Bytes32& slot) const {
    const auto state = state_at(number);
    return HierarchicalProof{encode_header(headers_[number]), a, slot, state->account_proof(a),
                             state->storage_proof(a, slot)};
}

std::optional<Digest> SimChain::blockhash(uint64_t current, uint64_t target) const {
    if (current > head_number() || target >= current) return std::nullopt;
    const uint64_t distance = current - target;
    if (params_.blockhash_mode == BlockhashMode::window256) {
        if (distance > 256) return std::nullopt;
        return hashes_[target];
    }
    if (current == head_number()) return ring_.read(current, target);
    // The ring as it stood at `current`: the slot still holds `target` unless
    // block target+8192 had been written by then.
    if (distance > Eip2935Ring::kSize) return std::nullopt;
    return hashes_[target];
}

nlohmann::json SimChain::to_fixture() const {
    nlohmann::json blocks = nlohmann::json::array();
    for (size_t i = 0; i < headers_.size(); ++i)
        blocks.push_back({{"number", i}, {"hash", hashes_[i].hex()}, {"header", headers_[i]}, {"changes", changes_[i]}});
    return {{"params", params_}, {"blocks", std::move(blocks)}};
}

SimChain SimChain::from_fixture(const nlohmann::json& j) {
    const auto params = j.at("params").get<ChainParams>();
    const auto& blocks = j.at("blocks");
    if (blocks.empty()) throw std::invalid_argument("fixture has no blocks");
    SimChain chain{params, blocks[0].at("changes").get<std::vector<Change>>()};
    for (size_t i = 1; i < blocks.size(); ++i) {
        const auto changes = blocks[i].at("changes").get<std::vector<Change>>();
        chain.apply_block(changes, blocks[i].at("header").at("timestamp").get<uint64_t>());
    }
    for (size_t i = 0; i < blocks.size(); ++i) {
        if (chain.hashes_[i] != blocks[i].at("hash").get<Digest>())
            throw std::invalid_argument("fixture block " + std::to_string(i) + " does not rebuild to its hash");
    }
    return chain;
}

SimChain generate_chain(size_t blocks, size_t accounts, uint64_t seed, ChainParams params) {
    if (blocks == 0) throw Error(ErrorCode::InvalidConfig, "a chain needs at least one block");
    SplitMix64 rng{seed};
    std::vector<Address> addrs;
    std::vector<Address> contracts;
    std::vector<Change> genesis;
    for (size_t i = 0; i < accounts; ++i) {
        const Address a = Address::from_view(keccak256(rng.bytes(32)).view().subspan(12));
        addrs.push_back(a);
        genesis.push_back(set_balance(a, U256::from_view(rng.bytes(12))));
        if (i % 2 == 0) {
            contracts.push_back(a);
            genesis.push_back(set_code_hash(a, keccak256(rng.bytes(64))));
            for (uint64_t s = 0; s < 3; ++s) genesis.push_back(set_storage(a, u256(s), u256(1 + rng.below(1u << 30))));
        }
    }
    SimChain chain{params, genesis};
    for (size_t b = 1; b < blocks; ++b) {
        std::vector<Change> changes;
        if (!addrs.empty()) {
            const size_t n = 1 + rng.below(3);
            for (size_t k = 0; k < n; ++k) {
                if (!contracts.empty() && rng.below(3) != 0) {
                    const Address& c = contracts[rng.below(contracts.size())];
                    changes.push_back(set_storage(c, u256(rng.below(8)), u256(1 + rng.below(1u << 30))));
                } else {
                    const Address& a = addrs[rng.below(addrs.size())];
                    changes.push_back(set_balance(a, U256::from_view(rng.bytes(12))));
                }
            }
        }
        chain.apply_block(changes);
    }
    return chain;
}

// ---------------------------------------------------------------------------
// JSON

void to_json(nlohmann::json& j, const Account& a) {
    j = {{"nonce", a.nonce},
         {"balance", to_hex(trim_leading_zeros(a.balance.view()))},
         {"storage_root", a.storage_root.hex()},
         {"code_hash", a.code_hash.hex()}};
}

void to_json(nlohmann::json& j, const Change& c) {
    j = {{"address", c.address.hex()}};
    switch (c.kind) {
        case ChangeKind::storage:
            j["kind"] = "storage";
            j["slot"] = c.slot.hex();
            j["value"] = c.value.hex();
            break;
        case ChangeKind::nonce:
            j["kind"] = "nonce";
            j["value"] = to_hex(trim_leading_zeros(c.value.view()));
            break;
        case ChangeKind::balance:
            j["kind"] = "balance";
            j["value"] = to_hex(trim_leading_zeros(c.value.view()));
            break;
        case ChangeKind::code_hash:
            j["kind"] = "code_hash";
            j["value"] = c.value.hex();
            break;
    }
}

void from_json(const nlohmann::json& j, Change& c) {
    try {
        const auto kind = j.at("kind").get<std::string>();
        const Bytes addr = bytes_from_json(j.at("address"));
        if (addr.size() != 20) malformed("address must be 20 bytes");
        c.address = Address::from_view(addr);
        c.slot = Bytes32{};
        auto word = [&](const char* field) {
            const Bytes b = bytes_from_json(j.at(field));
            if (b.size() > 32) malformed(std::string{field} + " wider than 32 bytes");
            return Bytes32::from_view(b);
        };
        if (kind == "storage") {
            c.kind = ChangeKind::storage;
            const Bytes slot = bytes_from_json(j.at("slot"));
            if (slot.size() != 32) malformed("slot must be 32 bytes");
            c.slot = Bytes32::from_view(slot);
        } else if (kind == "nonce") {
            c.kind = ChangeKind::nonce;
        } else if (kind == "balance") {
            c.kind = ChangeKind::balance;
        } else if (kind == "code_hash") {
            c.kind = ChangeKind::code_hash;
        } else {
            malformed("unknown change kind " + kind);
        }
        c.value = word("value");
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        malformed(e.what());
    }
}

void to_json(nlohmann::json& j, const ChainParams& p) {
    j = {{"chain_id", p.chain_id},
         {"block_time", p.block_time},
         {"genesis_time", p.genesis_time},
         {"blockhash_mode", to_string(p.blockhash_mode)},
         {"hash", p.hash_id}};
}

void from_json(const nlohmann::json& j, ChainParams& p) {
    p.chain_id = j.value("chain_id", uint64_t{1});
    p.block_time = j.value("block_time", uint64_t{12});
    p.genesis_time = j.value("genesis_time", uint64_t{0});
    p.blockhash_mode = parse_blockhash_mode(j.value("blockhash_mode", std::string{"window256"}));
    p.hash_id = j.value("hash", HashId::keccak256);
}

void to_json(nlohmann::json& j, const HierarchicalProof& p) {
    j = {{"headerRlp", to_hex(p.header_preimage)},
         {"address", p.address.hex()},
         {"accountProof", mpt::nodes_to_json(p.account_proof)},
         {"storageProof", {{{"key", p.slot_key.hex()}, {"proof", mpt::nodes_to_json(p.storage_proof)}}}}};
}

void from_json(const nlohmann::json& j, HierarchicalProof& p) {
    p.header_preimage = bytes_from_json(j.at("headerRlp"));
    p.address = j.at("address").get<Address>();
    p.account_proof = mpt::nodes_from_json(j.at("accountProof"));
    const auto& sp = j.at("storageProof");
    if (sp.size() != 1) throw std::invalid_argument("expected exactly one storageProof entry");
    p.slot_key = Bytes32::from_view(bytes_from_json(sp[0].at("key")));
    p.storage_proof = mpt::nodes_from_json(sp[0].at("proof"));
}

}  // namespace stateproof::chain
