// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include <stateproof/bytes.hpp>
#include <stateproof/hashing.hpp>
#include <stateproof/header.hpp>
#include <stateproof/mpt.hpp>

// Block-hash cache kept in a Merkle-Patricia trie: 8-byte big-endian block
// number -> 32-byte block hash over one contiguous range. Unlike the MMR it
// grows in both directions. Every change emits a witness, and the witness
// chain alone is enough to rebuild the trie and re-check each link.
namespace stateproof::blockcache {

Bytes number_key(uint64_t number);

struct InitWitness {
    BlockHeader header;
    Digest resulting_root;

    friend bool operator==(const InitWitness&, const InitWitness&) = default;
};

//! Adds a new rightmost block: appended.parent_hash must be the cached hash
//! at the old highest number, and its header hash becomes the new entry.
struct AppendWitness {
    Digest prior_root;
    BlockHeader appended;
    Digest resulting_root;

    friend bool operator==(const AppendWitness&, const AppendWitness&) = default;
};

//! Adds a new leftmost block: the current leftmost header (whose hash is
//! cached at the old lowest number) must name the prepended block as parent.
struct PrependWitness {
    Digest prior_root;
    BlockHeader prepended;
    BlockHeader current_leftmost;
    Digest resulting_root;

    friend bool operator==(const PrependWitness&, const PrependWitness&) = default;
};

using Witness = std::variant<InitWitness, AppendWitness, PrependWitness>;

//! Inclusion claim for one block number, plus the construction history.
struct Bundle {
    Digest root;
    uint64_t number{0};
    Digest hash;
    mpt::Proof mpt_proof;
    std::vector<Witness> witnesses;
};

class Cache {
  public:
    static std::pair<Cache, InitWitness> init(const BlockHeader& header, HashId hash_id = HashId::keccak256);

    //! Init with the first header, then append the rest in order.
    static Cache from_range(std::span<const BlockHeader> headers, HashId hash_id = HashId::keccak256);

    //! Error(NumberGap) unless header.number == highest()+1; Error(LinkageViolation)
    //! unless header.parent_hash is the cached hash at highest().
    std::pair<Cache, AppendWitness> append(const BlockHeader& header) const;

    //! Error(NumberGap) unless header.number == lowest()-1; Error(LinkageViolation)
    //! unless the current leftmost header's parent_hash is header_hash(header).
    std::pair<Cache, PrependWitness> prepend(const BlockHeader& header) const;

    //! Error(OutOfRange) outside [lowest(), highest()].
    Bundle prove(uint64_t number) const;

    std::optional<Digest> hash_at(uint64_t number) const;
    Digest root() const { return trie_.root(); }
    uint64_t lowest() const noexcept { return lowest_; }
    uint64_t highest() const noexcept { return highest_; }
    const BlockHeader& leftmost() const noexcept { return leftmost_; }
    HashId hash_id() const noexcept { return trie_.hash_id(); }
    const mpt::Trie& trie() const noexcept { return trie_; }
    std::vector<Witness> witnesses() const;

  private:
    struct LogLink {
        Witness witness;
        std::shared_ptr<const LogLink> prev;
    };

    Cache(mpt::Trie trie, uint64_t lowest, uint64_t highest, BlockHeader leftmost, Digest highest_hash,
          std::shared_ptr<const LogLink> log, size_t log_size)
        : trie_{std::move(trie)}, lowest_{lowest}, highest_{highest}, leftmost_{std::move(leftmost)},
          highest_hash_{highest_hash}, log_{std::move(log)}, log_size_{log_size} {}

    Cache with(mpt::Trie trie, Witness w) const;

    mpt::Trie trie_;
    uint64_t lowest_{0};
    uint64_t highest_{0};
    BlockHeader leftmost_;
    Digest highest_hash_;
    std::shared_ptr<const LogLink> log_;  // newest first, shared between versions
    size_t log_size_{0};
};

enum class Failure {
    malformed_chain,
    root_discontinuity,
    linkage_violation,
    number_gap,
    stored_hash_mismatch,
    invalid_proof,
    value_mismatch,
};
std::string_view to_string(Failure f) noexcept;

struct VerifyResult {
    bool ok{true};
    std::optional<Failure> failure;
    std::optional<size_t> failing_step;  //!< witness position, when the chain is at fault
    std::string reason;

    explicit operator bool() const noexcept { return ok; }
};

//! Replays the witness chain (which must end at `root`), then checks the MPT
//! proof binds number -> claimed_hash under `root`.
VerifyResult verify(const Digest& root, uint64_t number, const Digest& claimed_hash, const mpt::Proof& proof,
                    std::span<const Witness> witnesses, HashId hash_id = HashId::keccak256);

inline VerifyResult verify(const Bundle& b, HashId hash_id = HashId::keccak256) {
    return verify(b.root, b.number, b.hash, b.mpt_proof, b.witnesses, hash_id);
}

//! Witness-only replay. Returns the rebuilt trie on success.
VerifyResult replay(std::span<const Witness> witnesses, HashId hash_id, mpt::Trie* rebuilt = nullptr);

void to_json(nlohmann::json& j, const Witness& w);
void from_json(const nlohmann::json& j, Witness& w);
void to_json(nlohmann::json& j, const Bundle& b);
void from_json(const nlohmann::json& j, Bundle& b);

}  // namespace stateproof::blockcache
