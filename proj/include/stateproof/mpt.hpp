// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <vector>

#include <json.hpp>

#include <stateproof/bytes.hpp>
#include <stateproof/errors.hpp>
#include <stateproof/hashing.hpp>

// Hex-nibble Merkle-Patricia trie with Ethereum's node encoding: RLP lists,
// hex-prefix compact paths, and child references that are inlined when the
// child's encoding is shorter than 32 bytes and hashed otherwise.
//
// The trie is persistent. Insert returns a new trie that shares every
// untouched subtree with the old one, so any earlier root keeps resolving.
// Keys are used raw; hashing keys (secure-trie style) is the caller's job.
namespace stateproof::mpt {

struct NibblePath {
    std::vector<uint8_t> nibbles;  // each < 16

    size_t size() const noexcept { return nibbles.size(); }
    bool empty() const noexcept { return nibbles.empty(); }
    uint8_t operator[](size_t i) const noexcept { return nibbles[i]; }

    static NibblePath from_key(ByteView key);
    NibblePath slice(size_t from, size_t to) const;
    NibblePath slice(size_t from) const { return slice(from, nibbles.size()); }

    friend bool operator==(const NibblePath&, const NibblePath&) = default;
};

//! Compact (hex-prefix) encoding; flag nibble = 2*is_leaf + odd.
Bytes hex_prefix_encode(const NibblePath& path, bool is_leaf);

struct HexPrefixDecoded {
    NibblePath path;
    bool is_leaf{false};
};
//! Throws rlp::DecodeError on an invalid flag nibble or padding.
HexPrefixDecoded hex_prefix_decode(ByteView encoded);

class Node;
using NodePtr = std::shared_ptr<const Node>;

enum class NodeKind { leaf, extension, branch };

//! Immutable trie node. Encoding and hash are fixed at construction.
class Node {
  public:
    static NodePtr leaf(HashId hash_id, NibblePath path, Bytes value);
    static NodePtr extension(HashId hash_id, NibblePath shared, NodePtr child);
    static NodePtr branch(HashId hash_id, std::array<NodePtr, 16> children, Bytes value);

    NodeKind kind() const noexcept { return kind_; }
    const NibblePath& path() const noexcept { return path_; }          //!< leaf remainder or extension prefix
    const Bytes& value() const noexcept { return value_; }             //!< leaf value, or branch value (empty = none)
    const NodePtr& child() const noexcept { return children_[0]; }     //!< extension child
    const std::array<NodePtr, 16>& children() const noexcept { return children_; }

    const Bytes& encoding() const noexcept { return encoding_; }
    const Digest& hash() const noexcept { return hash_; }
    bool is_inline() const noexcept { return encoding_.size() < 32; }
    //! RLP item a parent embeds: the encoding itself when inline, else the encoded hash.
    Bytes reference() const;

  private:
    Node() = default;
    void seal(HashId hash_id);

    NodeKind kind_{NodeKind::leaf};
    NibblePath path_;
    Bytes value_;
    std::array<NodePtr, 16> children_{};
    Bytes encoding_;
    Digest hash_;
};

//! Ordered root-first node encodings. Only hash-referenced nodes appear
//! (the root always does); inline children stay inside their parent, matching
//! eth_getProof output.
struct Proof {
    std::vector<Bytes> nodes;

    friend bool operator==(const Proof&, const Proof&) = default;
};

enum class ProofFailure { root_mismatch, broken_link, bad_encoding, path_overrun };
std::string_view to_string(ProofFailure f) noexcept;

class InvalidProof : public Error {
  public:
    InvalidProof(ProofFailure reason, const std::string& detail)
        : Error(ErrorCode::InvalidProof, std::string{to_string(reason)} + ": " + detail), reason_{reason} {}
    ProofFailure reason() const noexcept { return reason_; }

  private:
    ProofFailure reason_;
};

class Trie {
  public:
    explicit Trie(HashId hash_id = HashId::keccak256) : hash_id_{hash_id} {}

    //! Returns the updated trie; *this is unchanged. Throws Error(EmptyValue)
    //! for an empty value since deletion is not supported.
    [[nodiscard]] Trie insert(ByteView key, ByteView value) const;

    //! nodes_visited, when given, receives the number of nodes examined.
    std::optional<Bytes> get(ByteView key, size_t* nodes_visited = nullptr) const;

    Digest root() const;
    bool empty() const noexcept { return root_ == nullptr; }
    HashId hash_id() const noexcept { return hash_id_; }
    const NodePtr& root_node() const noexcept { return root_; }

    //! Inclusion proof for present keys, exclusion proof for absent ones.
    Proof prove(ByteView key) const;

  private:
    Trie(HashId hash_id, NodePtr root) : hash_id_{hash_id}, root_{std::move(root)} {}

    HashId hash_id_;
    NodePtr root_;
};

//! Root of the empty trie: digest of the RLP empty string.
Digest empty_root(HashId hash_id = HashId::keccak256);

//! Walks the proof along the key's nibbles. Returns the stored value, or
//! nullopt for a well-formed exclusion proof. Throws InvalidProof otherwise.
//! Also accepts proofs that list inline nodes as separate entries.
std::optional<Bytes> verify(const Digest& root, ByteView key, const Proof& proof,
                            HashId hash_id = HashId::keccak256);

//! JSON document `{ "root", "key", "nodes" }`; nodes are 0x-hex RLP, root first.
struct ProofDocument {
    Digest root;
    Bytes key;
    Proof proof;
};
void to_json(nlohmann::json& j, const ProofDocument& doc);
void from_json(const nlohmann::json& j, ProofDocument& doc);
nlohmann::json nodes_to_json(const Proof& proof);
Proof nodes_from_json(const nlohmann::json& j);

//! Registry of trie versions keyed by root digest. Readers may run
//! concurrently; registering a new version takes an exclusive lock.
class SnapshotStore {
  public:
    void put(const Trie& trie);
    std::optional<Trie> get(const Digest& root) const;
    size_t size() const;

  private:
    mutable std::shared_mutex mutex_;
    std::map<Digest, Trie> versions_;
};

}  // namespace stateproof::mpt
