// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include <stateproof/bytes.hpp>
#include <stateproof/errors.hpp>
#include <stateproof/hashing.hpp>
#include <stateproof/header.hpp>
#include <stateproof/mpt.hpp>

// Ethereum-like chain without execution: blocks carry explicit state
// changes, the world state lives in secure (keccak-keyed) tries, and every
// block's state stays queryable after later blocks.
namespace stateproof::chain {

using U256 = FixedBytes<32>;  //!< big-endian unsigned 256-bit integer

U256 u256(uint64_t v);

//! keccak256 of empty code.
const Digest& empty_code_hash();

struct Account {
    uint64_t nonce{0};
    U256 balance;
    Digest storage_root{mpt::empty_root()};
    Digest code_hash{empty_code_hash()};

    friend bool operator==(const Account&, const Account&) = default;
};

//! RLP [nonce, balance, storage_root, code_hash] with minimal integers.
Bytes encode_account(const Account& a);
//! Throws rlp::DecodeError.
Account decode_account(ByteView encoded);

enum class ChangeKind { storage, nonce, balance, code_hash };

struct Change {
    ChangeKind kind{ChangeKind::storage};
    Address address;
    Bytes32 slot;   //!< storage only
    Bytes32 value;  //!< slot value, or the new nonce / balance / code hash

    friend bool operator==(const Change&, const Change&) = default;
};

Change set_storage(const Address& a, const Bytes32& slot, const Bytes32& value);
Change set_nonce(const Address& a, uint64_t nonce);
Change set_balance(const Address& a, const U256& balance);
Change set_code_hash(const Address& a, const Digest& code_hash);

//! Immutable world state. apply() returns a new version sharing every
//! untouched trie node with this one.
class WorldState {
  public:
    explicit WorldState(HashId hash_id = HashId::keccak256) : state_{hash_id} {}

    //! Throws Error(MalformedChange) for zero storage values (deletion is not
    //! modelled) or a nonce wider than 64 bits.
    WorldState apply(std::span<const Change> changes) const;

    Digest state_root() const { return state_.root(); }
    HashId hash_id() const noexcept { return state_.hash_id(); }
    std::optional<Account> account(const Address& a) const;
    std::optional<Bytes32> storage(const Address& a, const Bytes32& slot) const;
    std::vector<Address> addresses() const;

    mpt::Proof account_proof(const Address& a) const;
    mpt::Proof storage_proof(const Address& a, const Bytes32& slot) const;

  private:
    struct Entry {
        Account account;
        mpt::Trie storage;
    };
    mpt::Trie state_;
    std::map<Address, Entry> accounts_;
};

//! Header, account and storage proofs for one slot at one block.
struct HierarchicalProof {
    Bytes header_preimage;
    Address address;
    Bytes32 slot_key;
    mpt::Proof account_proof;
    mpt::Proof storage_proof;
};

enum class ProofLayer { header, account, storage };
std::string_view to_string(ProofLayer l) noexcept;

class InvalidHierarchicalProof : public Error {
  public:
    InvalidHierarchicalProof(ProofLayer layer, const std::string& reason)
        : Error(ErrorCode::InvalidProof, std::string{to_string(layer)} + ": " + reason), layer_{layer} {}
    ProofLayer layer() const noexcept { return layer_; }

  private:
    ProofLayer layer_;
};

//! State root of a header preimage: the simplified 6-field header, or an
//! Ethereum mainnet header (15+ fields, state root at index 3).
Digest state_root_of_preimage(ByteView preimage);

//! Checks header -> account -> storage in that order. Returns the slot value,
//! or nullopt when the account or slot is absent. Throws InvalidHierarchicalProof.
std::optional<Bytes32> verify_hierarchical(const Digest& block_hash, const HierarchicalProof& proof,
                                           HashId hash_id = HashId::keccak256);

enum class BlockhashMode { window256, ring8192 };
std::string_view to_string(BlockhashMode m) noexcept;
BlockhashMode parse_blockhash_mode(std::string_view s);
uint64_t window_size(BlockhashMode m) noexcept;

enum class BlockClass { current, recent, historical };
std::string_view to_string(BlockClass c) noexcept;

BlockClass classify_block(uint64_t current_number, uint64_t target_number, BlockhashMode mode);

//! Fixed-size store of recent block hashes indexed by number mod 8192. The
//! hash of block N is written when block N+1 is produced.
class Eip2935Ring {
  public:
    static constexpr uint64_t kSize = 8192;

    void write(uint64_t number, const Digest& hash) noexcept;
    //! Readable from block `current` iff target < current and the slot was not
    //! overwritten since.
    std::optional<Digest> read(uint64_t current, uint64_t target) const noexcept;

  private:
    struct Slot {
        uint64_t number{0};
        Digest hash;
        bool set{false};
    };
    std::vector<Slot> slots_ = std::vector<Slot>(kSize);
};

struct ChainParams {
    uint64_t chain_id{1};
    uint64_t block_time{12};
    uint64_t genesis_time{0};
    BlockhashMode blockhash_mode{BlockhashMode::window256};
    HashId hash_id{HashId::keccak256};
};

class SimChain {
  public:
    //! Creates block 0 holding `genesis` applied to an empty state.
    explicit SimChain(ChainParams params = {}, std::span<const Change> genesis = {});

    //! Appends one block at previous timestamp + block_time (or the given
    //! timestamp, which must not go backwards). Throws Error(MalformedChange).
    const BlockHeader& apply_block(std::span<const Change> changes);
    const BlockHeader& apply_block(std::span<const Change> changes, uint64_t timestamp);

    const ChainParams& params() const noexcept { return params_; }
    uint64_t head_number() const noexcept { return headers_.size() - 1; }
    const BlockHeader& head() const noexcept { return headers_.back(); }
    const std::vector<BlockHeader>& headers() const noexcept { return headers_; }
    //! Throws Error(UnknownBlock).
    const BlockHeader& header(uint64_t number) const;
    Digest block_hash(uint64_t number) const;
    const std::vector<Change>& changes(uint64_t number) const;

    //! State as of the given block; throws Error(UnknownBlock).
    std::shared_ptr<const WorldState> state_at(uint64_t number) const;
    std::shared_ptr<const WorldState> snapshot(const Digest& state_root) const;

    //! Throws Error(UnknownBlock).
    HierarchicalProof make_storage_proof(uint64_t number, const Address& a, const Bytes32& slot) const;

    //! The BLOCKHASH view from block `current`: nullopt when unavailable.
    std::optional<Digest> blockhash(uint64_t current, uint64_t target) const;

    nlohmann::json to_fixture() const;
    //! Rebuilds from a fixture and checks every recorded hash; throws
    //! Error(MalformedChange) or std::invalid_argument on mismatch.
    static SimChain from_fixture(const nlohmann::json& j);

  private:
    const BlockHeader& push(std::shared_ptr<const WorldState> state, std::vector<Change> changes, uint64_t ts,
                            const Digest& parent);

    ChainParams params_;
    std::vector<BlockHeader> headers_;
    std::vector<Digest> hashes_;
    std::vector<std::vector<Change>> changes_;
    std::map<Digest, std::shared_ptr<const WorldState>> snapshots_;
    Eip2935Ring ring_;
};

inline std::optional<Digest> blockhash_lookup(const SimChain& chain, uint64_t current_number,
                                              uint64_t target_number) {
    return chain.blockhash(current_number, target_number);
}

//! Seeded fixture: genesis funds `accounts` accounts (every other one gets
//! contract code and storage), then each later block writes a few slots.
SimChain generate_chain(size_t blocks, size_t accounts, uint64_t seed, ChainParams params = {});

void to_json(nlohmann::json& j, const Account& a);
void to_json(nlohmann::json& j, const Change& c);
//! Throws Error(MalformedChange) on a malformed entry.
void from_json(const nlohmann::json& j, Change& c);
void to_json(nlohmann::json& j, const ChainParams& p);
void from_json(const nlohmann::json& j, ChainParams& p);
//! eth_getProof-style naming: headerRlp, address, accountProof, storageProof[0].{key, proof}.
void to_json(nlohmann::json& j, const HierarchicalProof& p);
void from_json(const nlohmann::json& j, HierarchicalProof& p);

}  // namespace stateproof::chain
