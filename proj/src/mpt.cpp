// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#include <stateproof/json_util.hpp>
#include <stateproof/mpt.hpp>
#include <stateproof/rlp.hpp>

#include <mutex>
#include <variant>

namespace stateproof::mpt {

NibblePath NibblePath::from_key(ByteView key) {
    NibblePath p;
    p.nibbles.reserve(key.size() * 2);
    for (uint8_t b : key) {
        p.nibbles.push_back(b >> 4);
        p.nibbles.push_back(b & 0x0f);
    }
    return p;
}

NibblePath NibblePath::slice(size_t from, size_t to) const {
    NibblePath p;
    p.nibbles.assign(nibbles.begin() + static_cast<std::ptrdiff_t>(from),
                     nibbles.begin() + static_cast<std::ptrdiff_t>(to));
    return p;
}

Bytes hex_prefix_encode(const NibblePath& path, bool is_leaf) {
    const bool odd = path.size() % 2 == 1;
    const uint8_t flag = static_cast<uint8_t>((is_leaf ? 2 : 0) + (odd ? 1 : 0));
    Bytes out;
    out.reserve(path.size() / 2 + 1);
    size_t i = 0;
    if (odd) {
        out.push_back(static_cast<uint8_t>((flag << 4) | path[0]));
        i = 1;
    } else {
        out.push_back(static_cast<uint8_t>(flag << 4));
    }
    for (; i < path.size(); i += 2) out.push_back(static_cast<uint8_t>((path[i] << 4) | path[i + 1]));
    return out;
}

HexPrefixDecoded hex_prefix_decode(ByteView encoded) {
    if (encoded.empty()) throw rlp::DecodeError("empty hex-prefix path");
    const uint8_t flag = encoded[0] >> 4;
    if (flag > 3) throw rlp::DecodeError("invalid hex-prefix flag");
    const bool odd = flag & 1;
    HexPrefixDecoded out;
    out.is_leaf = flag & 2;
    if (odd) {
        out.path.nibbles.push_back(encoded[0] & 0x0f);
    } else if ((encoded[0] & 0x0f) != 0) {
        throw rlp::DecodeError("non-zero hex-prefix padding");
    }
    for (size_t i = 1; i < encoded.size(); ++i) {
        out.path.nibbles.push_back(encoded[i] >> 4);
        out.path.nibbles.push_back(encoded[i] & 0x0f);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Nodes

NodePtr Node::leaf(HashId hash_id, NibblePath path, Bytes value) {
    auto n = std::shared_ptr<Node>(new Node);
    n->kind_ = NodeKind::leaf;
    n->path_ = std::move(path);
    n->value_ = std::move(value);
    n->seal(hash_id);
    return n;
}

NodePtr Node::extension(HashId hash_id, NibblePath shared, NodePtr child) {
    auto n = std::shared_ptr<Node>(new Node);
    n->kind_ = NodeKind::extension;
    n->path_ = std::move(shared);
    n->children_[0] = std::move(child);
    n->seal(hash_id);
    return n;
}

NodePtr Node::branch(HashId hash_id, std::array<NodePtr, 16> children, Bytes value) {
    auto n = std::shared_ptr<Node>(new Node);
    n->kind_ = NodeKind::branch;
    n->children_ = std::move(children);
    n->value_ = std::move(value);
    n->seal(hash_id);
    return n;
}

Bytes Node::reference() const { return is_inline() ? encoding_ : rlp::encode(hash_.view()); }

void Node::seal(HashId hash_id) {
    switch (kind_) {
        case NodeKind::leaf:
            encoding_ = rlp::encode_list({rlp::encode(hex_prefix_encode(path_, true)), rlp::encode(value_)});
            break;
        case NodeKind::extension:
            encoding_ = rlp::encode_list({rlp::encode(hex_prefix_encode(path_, false)), children_[0]->reference()});
            break;
        case NodeKind::branch: {
            std::vector<Bytes> items;
            items.reserve(17);
            for (const auto& c : children_) items.push_back(c ? c->reference() : rlp::encode(ByteView{}));
            items.push_back(rlp::encode(value_));
            encoding_ = rlp::encode_list(items);
            break;
        }
    }
    hash_ = digest(hash_id, encoding_);
}

// ---------------------------------------------------------------------------
// Trie

namespace {

size_t common_prefix(const NibblePath& a, const NibblePath& b, size_t b_offset) {
    size_t n = 0;
    while (n < a.size() && b_offset + n < b.size() && a[n] == b[b_offset + n]) ++n;
    return n;
}

NodePtr insert_at(HashId h, const NodePtr& node, const NibblePath& key, size_t pos, const Bytes& value) {
    if (!node) return Node::leaf(h, key.slice(pos), value);

    switch (node->kind()) {
        case NodeKind::leaf: {
            const NibblePath& lp = node->path();
            const size_t c = common_prefix(lp, key, pos);
            const size_t rest = key.size() - pos;
            if (c == lp.size() && c == rest) return Node::leaf(h, lp, value);

            std::array<NodePtr, 16> children{};
            Bytes branch_value;
            if (c == lp.size()) {
                branch_value = node->value();
            } else {
                children[lp[c]] = Node::leaf(h, lp.slice(c + 1), node->value());
            }
            if (c == rest) {
                branch_value = value;
            } else {
                children[key[pos + c]] = Node::leaf(h, key.slice(pos + c + 1), value);
            }
            NodePtr branch = Node::branch(h, std::move(children), std::move(branch_value));
            return c > 0 ? Node::extension(h, lp.slice(0, c), std::move(branch)) : branch;
        }
        case NodeKind::extension: {
            const NibblePath& ep = node->path();
            const size_t c = common_prefix(ep, key, pos);
            if (c == ep.size()) return Node::extension(h, ep, insert_at(h, node->child(), key, pos + c, value));

            std::array<NodePtr, 16> children{};
            Bytes branch_value;
            children[ep[c]] = (c + 1 == ep.size()) ? node->child() : Node::extension(h, ep.slice(c + 1), node->child());
            if (pos + c == key.size()) {
                branch_value = value;
            } else {
                children[key[pos + c]] = Node::leaf(h, key.slice(pos + c + 1), value);
            }
            NodePtr branch = Node::branch(h, std::move(children), std::move(branch_value));
            return c > 0 ? Node::extension(h, ep.slice(0, c), std::move(branch)) : branch;
        }
        case NodeKind::branch: {
            if (pos == key.size()) return Node::branch(h, node->children(), value);
            auto children = node->children();
            const uint8_t slot = key[pos];
            children[slot] = insert_at(h, children[slot], key, pos + 1, value);
            return Node::branch(h, std::move(children), node->value());
        }
    }
    return nullptr;
}

bool path_matches(const NibblePath& path, const NibblePath& key, size_t pos) {
    if (key.size() - pos < path.size()) return false;
    for (size_t i = 0; i < path.size(); ++i)
        if (path[i] != key[pos + i]) return false;
    return true;
}

}  // namespace

Trie Trie::insert(ByteView key, ByteView value) const {
    if (value.empty()) throw Error(ErrorCode::EmptyValue, "empty values (deletion) are not supported");
    const NibblePath path = NibblePath::from_key(key);
    return Trie{hash_id_, insert_at(hash_id_, root_, path, 0, Bytes(value.begin(), value.end()))};
}

std::optional<Bytes> Trie::get(ByteView key, size_t* nodes_visited) const {
    const NibblePath path = NibblePath::from_key(key);
    size_t pos = 0;
    size_t visited = 0;
    const Node* node = root_.get();
    std::optional<Bytes> result;
    while (node) {
        ++visited;
        if (node->kind() == NodeKind::leaf) {
            if (path_matches(node->path(), path, pos) && pos + node->path().size() == path.size())
                result = node->value();
            break;
        }
        if (node->kind() == NodeKind::extension) {
            if (!path_matches(node->path(), path, pos)) break;
            pos += node->path().size();
            node = node->child().get();
            continue;
        }
        if (pos == path.size()) {
            if (!node->value().empty()) result = node->value();
            break;
        }
        node = node->children()[path[pos++]].get();
    }
    if (nodes_visited) *nodes_visited = visited;
    return result;
}

Digest Trie::root() const { return root_ ? root_->hash() : empty_root(hash_id_); }

Proof Trie::prove(ByteView key) const {
    Proof proof;
    const NibblePath path = NibblePath::from_key(key);
    size_t pos = 0;
    const Node* node = root_.get();
    bool first = true;
    while (node) {
        if (first || !node->is_inline()) proof.nodes.push_back(node->encoding());
        first = false;
        if (node->kind() == NodeKind::leaf) break;
        if (node->kind() == NodeKind::extension) {
            if (!path_matches(node->path(), path, pos)) break;
            pos += node->path().size();
            node = node->child().get();
            continue;
        }
        if (pos == path.size()) break;
        node = node->children()[path[pos++]].get();
    }
    return proof;
}

Digest empty_root(HashId hash_id) {
    static constexpr uint8_t kEmptyString[] = {0x80};
    return digest(hash_id, ByteView{kEmptyString, 1});
}

// ---------------------------------------------------------------------------
// Verification

std::string_view to_string(ProofFailure f) noexcept {
    switch (f) {
        case ProofFailure::root_mismatch: return "root_mismatch";
        case ProofFailure::broken_link: return "broken_link";
        case ProofFailure::bad_encoding: return "bad_encoding";
        case ProofFailure::path_overrun: return "path_overrun";
    }
    return "unknown";
}

namespace {

// A reference to the next node: its hash, or its inline encoding.
using ChildRef = std::variant<Digest, ByteView>;

std::optional<ChildRef> child_ref(const rlp::Item& item) {
    if (item.is_list) {
        if (item.raw.size() >= 32) throw InvalidProof(ProofFailure::bad_encoding, "inline node of 32+ bytes");
        return ChildRef{item.raw};
    }
    if (item.payload.empty()) return std::nullopt;
    if (item.payload.size() != 32) throw InvalidProof(ProofFailure::bad_encoding, "child reference is not 32 bytes");
    return ChildRef{Digest::from_view(item.payload)};
}

}  // namespace

std::optional<Bytes> verify(const Digest& root, ByteView key, const Proof& proof, HashId hash_id) {
    if (proof.nodes.empty()) {
        if (root == empty_root(hash_id)) return std::nullopt;
        throw InvalidProof(ProofFailure::root_mismatch, "empty proof for a non-empty root");
    }

    const NibblePath path = NibblePath::from_key(key);
    size_t pos = 0;
    size_t next = 0;
    ChildRef expected = root;
    std::optional<Bytes> result;

    for (;;) {
        ByteView encoding;
        if (const auto* h = std::get_if<Digest>(&expected)) {
            if (next >= proof.nodes.size())
                throw InvalidProof(ProofFailure::broken_link, "proof ends before the path terminates");
            encoding = proof.nodes[next];
            if (digest(hash_id, encoding) != *h) {
                throw InvalidProof(next == 0 ? ProofFailure::root_mismatch : ProofFailure::broken_link,
                                   "node " + std::to_string(next) + " does not match its reference");
            }
            ++next;
        } else {
            encoding = std::get<ByteView>(expected);
            if (next < proof.nodes.size() && std::equal(encoding.begin(), encoding.end(), proof.nodes[next].begin(),
                                                        proof.nodes[next].end()))
                ++next;
        }

        std::vector<rlp::Item> items;
        try {
            items = rlp::decode_list(encoding);
        } catch (const rlp::DecodeError& e) {
            throw InvalidProof(ProofFailure::bad_encoding, e.what());
        }

        if (items.size() == 2) {
            HexPrefixDecoded hp;
            try {
                if (items[0].is_list) throw rlp::DecodeError("path is a list");
                hp = hex_prefix_decode(items[0].payload);
            } catch (const rlp::DecodeError& e) {
                throw InvalidProof(ProofFailure::bad_encoding, e.what());
            }
            if (hp.is_leaf) {
                if (items[1].is_list || items[1].payload.empty())
                    throw InvalidProof(ProofFailure::bad_encoding, "leaf value must be a non-empty string");
                if (path_matches(hp.path, path, pos) && pos + hp.path.size() == path.size())
                    result = Bytes(items[1].payload.begin(), items[1].payload.end());
                break;
            }
            if (hp.path.empty()) throw InvalidProof(ProofFailure::bad_encoding, "extension with empty path");
            if (!path_matches(hp.path, path, pos)) break;
            pos += hp.path.size();
            const auto ref = child_ref(items[1]);
            if (!ref) throw InvalidProof(ProofFailure::bad_encoding, "extension without child");
            expected = *ref;
        } else if (items.size() == 17) {
            if (pos == path.size()) {
                if (items[16].is_list) throw InvalidProof(ProofFailure::bad_encoding, "branch value is a list");
                if (!items[16].payload.empty()) result = Bytes(items[16].payload.begin(), items[16].payload.end());
                break;
            }
            const auto ref = child_ref(items[path[pos++]]);
            if (!ref) break;
            expected = *ref;
        } else {
            throw InvalidProof(ProofFailure::bad_encoding, "node must have 2 or 17 items");
        }
    }

    if (next != proof.nodes.size())
        throw InvalidProof(ProofFailure::path_overrun, "proof has nodes past the end of the path");
    return result;
}

// ---------------------------------------------------------------------------
// JSON + snapshots

nlohmann::json nodes_to_json(const Proof& proof) {
    auto arr = nlohmann::json::array();
    for (const auto& n : proof.nodes) arr.push_back(to_hex(n));
    return arr;
}

Proof nodes_from_json(const nlohmann::json& j) {
    Proof p;
    for (const auto& n : j) p.nodes.push_back(bytes_from_json(n));
    return p;
}

void to_json(nlohmann::json& j, const ProofDocument& doc) {
    j = {{"root", doc.root.hex()}, {"key", to_hex(doc.key)}, {"nodes", nodes_to_json(doc.proof)}};
}

void from_json(const nlohmann::json& j, ProofDocument& doc) {
    doc.root = j.at("root").get<Digest>();
    doc.key = bytes_from_json(j.at("key"));
    doc.proof = nodes_from_json(j.at("nodes"));
}

void SnapshotStore::put(const Trie& trie) {
    std::unique_lock lock{mutex_};
    versions_.insert_or_assign(trie.root(), trie);
}

std::optional<Trie> SnapshotStore::get(const Digest& root) const {
    std::shared_lock lock{mutex_};
    const auto it = versions_.find(root);
    if (it == versions_.end()) return std::nullopt;
    return it->second;
}

size_t SnapshotStore::size() const {
    std::shared_lock lock{mutex_};
    return versions_.size();
}

}  // namespace stateproof::mpt
