// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include <stateproof/bytes.hpp>
#include <stateproof/hashing.hpp>

namespace stateproof::merkle {

//! Which side of the running hash a sibling sits on.
enum class Side { left, right };

struct Sibling {
    Digest digest;
    Side side{Side::left};

    friend bool operator==(const Sibling&, const Sibling&) = default;
};

struct Proof {
    size_t leaf_index{0};
    std::vector<Sibling> siblings;  //!< bottom-up
    HashId hash_id{HashId::keccak256};

    friend bool operator==(const Proof&, const Proof&) = default;
};

//! Binary Merkle tree over hashed data blocks. An unpaired node at the end of a
//! level is promoted unchanged; nodes are never duplicated. Leaf and interior
//! hashing share one function (no domain separation).
class Tree {
  public:
    //! Throws Error(EmptyInput) for zero blocks.
    static Tree build(HashId hash_id, std::span<const Bytes> blocks);
    //! Same shape, starting from precomputed leaf hashes.
    static Tree from_leaf_hashes(HashId hash_id, std::vector<Digest> leaves);

    const Digest& root() const noexcept { return levels_.back().front(); }
    size_t leaf_count() const noexcept { return levels_.front().size(); }
    HashId hash_id() const noexcept { return hash_id_; }
    const Digest& leaf_hash(size_t i) const { return levels_.front().at(i); }
    const std::vector<std::vector<Digest>>& levels() const noexcept { return levels_; }

    //! Throws Error(IndexOutOfRange).
    Proof prove(size_t leaf_index) const;

  private:
    Tree(HashId hash_id, std::vector<std::vector<Digest>> levels)
        : hash_id_{hash_id}, levels_{std::move(levels)} {}

    HashId hash_id_;
    std::vector<std::vector<Digest>> levels_;
};

//! Folds leaf_hash through the siblings. Never throws.
Digest fold(const Digest& leaf_hash, std::span<const Sibling> siblings, HashId hash_id);

bool verify(const Digest& root, const Digest& leaf_hash, const Proof& proof) noexcept;

void to_json(nlohmann::json& j, const Proof& proof);
void from_json(const nlohmann::json& j, Proof& proof);

}  // namespace stateproof::merkle
