// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#include <stateproof/errors.hpp>
#include <stateproof/json_util.hpp>
#include <stateproof/merkle.hpp>

namespace stateproof::merkle {

Tree Tree::build(HashId hash_id, std::span<const Bytes> blocks) {
    if (blocks.empty()) throw Error(ErrorCode::EmptyInput, "merkle tree needs at least one block");
    std::vector<Digest> leaves;
    leaves.reserve(blocks.size());
    for (const auto& block : blocks) leaves.push_back(digest(hash_id, block));
    return from_leaf_hashes(hash_id, std::move(leaves));
}

Tree Tree::from_leaf_hashes(HashId hash_id, std::vector<Digest> leaves) {
    if (leaves.empty()) throw Error(ErrorCode::EmptyInput, "merkle tree needs at least one leaf");
    std::vector<std::vector<Digest>> levels;
    levels.push_back(std::move(leaves));
    while (levels.back().size() > 1) {
        const auto& below = levels.back();
        std::vector<Digest> above;
        above.reserve((below.size() + 1) / 2);
        for (size_t i = 0; i + 1 < below.size(); i += 2) above.push_back(digest_pair(hash_id, below[i], below[i + 1]));
        if (below.size() % 2 == 1) above.push_back(below.back());
        levels.push_back(std::move(above));
    }
    return Tree{hash_id, std::move(levels)};
}

Proof Tree::prove(size_t leaf_index) const {
    if (leaf_index >= leaf_count())
        throw Error(ErrorCode::IndexOutOfRange,
                    "leaf " + std::to_string(leaf_index) + " of " + std::to_string(leaf_count()));
    Proof proof;
    proof.leaf_index = leaf_index;
    proof.hash_id = hash_id_;
    size_t index = leaf_index;
    for (size_t level = 0; level + 1 < levels_.size(); ++level) {
        const auto& nodes = levels_[level];
        if (index % 2 == 1) {
            proof.siblings.push_back({nodes[index - 1], Side::left});
        } else if (index + 1 < nodes.size()) {
            proof.siblings.push_back({nodes[index + 1], Side::right});
        }
        // else: promoted, no sibling at this level
        index /= 2;
    }
    return proof;
}

Digest fold(const Digest& leaf_hash, std::span<const Sibling> siblings, HashId hash_id) {
    Digest acc = leaf_hash;
    for (const auto& s : siblings)
        acc = s.side == Side::left ? digest_pair(hash_id, s.digest, acc) : digest_pair(hash_id, acc, s.digest);
    return acc;
}

bool verify(const Digest& root, const Digest& leaf_hash, const Proof& proof) noexcept {
    return fold(leaf_hash, proof.siblings, proof.hash_id) == root;
}

void to_json(nlohmann::json& j, const Proof& proof) {
    j = nlohmann::json::object();
    j["leaf_index"] = proof.leaf_index;
    j["hash"] = proof.hash_id;
    auto& siblings = j["siblings"] = nlohmann::json::array();
    for (const auto& s : proof.siblings)
        siblings.push_back({{"digest", s.digest.hex()}, {"side", s.side == Side::left ? "left" : "right"}});
}

void from_json(const nlohmann::json& j, Proof& proof) {
    proof.leaf_index = j.at("leaf_index").get<size_t>();
    proof.hash_id = j.at("hash").get<HashId>();
    proof.siblings.clear();
    for (const auto& s : j.at("siblings")) {
        const auto side = s.at("side").get<std::string>();
        if (side != "left" && side != "right") throw std::invalid_argument("sibling side must be left or right");
        proof.siblings.push_back({s.at("digest").get<Digest>(), side == "left" ? Side::left : Side::right});
    }
}

}  // namespace stateproof::merkle
