// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#include <stateproof/blockcache.hpp>
#include <stateproof/errors.hpp>
#include <stateproof/json_util.hpp>

namespace stateproof::blockcache {

Bytes number_key(uint64_t number) {
    Bytes key(8);
    for (int i = 7; i >= 0; --i) {
        key[static_cast<size_t>(i)] = static_cast<uint8_t>(number & 0xff);
        number >>= 8;
    }
    return key;
}

namespace {

mpt::Trie put(const mpt::Trie& t, uint64_t number, const Digest& hash) {
    return t.insert(number_key(number), hash.view());
}

}  // namespace

std::pair<Cache, InitWitness> Cache::init(const BlockHeader& header, HashId hash_id) {
    const Digest h = header_hash(header);
    mpt::Trie trie = put(mpt::Trie{hash_id}, header.number, h);
    InitWitness w{header, trie.root()};
    auto log = std::make_shared<const LogLink>(LogLink{w, nullptr});
    return {Cache{std::move(trie), header.number, header.number, header, h, std::move(log), 1}, std::move(w)};
}

Cache Cache::from_range(std::span<const BlockHeader> headers, HashId hash_id) {
    if (headers.empty()) throw Error(ErrorCode::EmptyInput, "cache range needs at least one header");
    Cache c = init(headers[0], hash_id).first;
    for (size_t i = 1; i < headers.size(); ++i) c = c.append(headers[i]).first;
    return c;
}

Cache Cache::with(mpt::Trie trie, Witness w) const {
    Cache next = *this;
    next.trie_ = std::move(trie);
    next.log_ = std::make_shared<const LogLink>(LogLink{std::move(w), log_});
    next.log_size_ = log_size_ + 1;
    return next;
}

std::pair<Cache, AppendWitness> Cache::append(const BlockHeader& header) const {
    if (header.number != highest_ + 1)
        throw Error(ErrorCode::NumberGap, "append expects block " + std::to_string(highest_ + 1) + ", got " +
                                              std::to_string(header.number));
    if (header.parent_hash != highest_hash_)
        throw Error(ErrorCode::LinkageViolation,
                    "block " + std::to_string(header.number) + " does not name the cached block as parent");
    const Digest h = header_hash(header);
    mpt::Trie trie = put(trie_, header.number, h);
    AppendWitness w{root(), header, trie.root()};
    Cache next = with(std::move(trie), w);
    next.highest_ = header.number;
    next.highest_hash_ = h;
    return {std::move(next), std::move(w)};
}

std::pair<Cache, PrependWitness> Cache::prepend(const BlockHeader& header) const {
    if (lowest_ == 0 || header.number != lowest_ - 1)
        throw Error(ErrorCode::NumberGap, "prepend expects the block below " + std::to_string(lowest_) + ", got " +
                                              std::to_string(header.number));
    const Digest h = header_hash(header);
    if (leftmost_.parent_hash != h)
        throw Error(ErrorCode::LinkageViolation,
                    "block " + std::to_string(lowest_) + " does not name the prepended block as parent");
    mpt::Trie trie = put(trie_, header.number, h);
    PrependWitness w{root(), header, leftmost_, trie.root()};
    Cache next = with(std::move(trie), w);
    next.lowest_ = header.number;
    next.leftmost_ = header;
    return {std::move(next), std::move(w)};
}

std::optional<Digest> Cache::hash_at(uint64_t number) const {
    const auto v = trie_.get(number_key(number));
    if (!v) return std::nullopt;
    return Digest::from_view(*v);
}

Bundle Cache::prove(uint64_t number) const {
    if (number < lowest_ || number > highest_)
        throw Error(ErrorCode::OutOfRange, "block " + std::to_string(number) + " outside cached range [" +
                                               std::to_string(lowest_) + ", " + std::to_string(highest_) + "]");
    return Bundle{root(), number, *hash_at(number), trie_.prove(number_key(number)), witnesses()};
}

std::vector<Witness> Cache::witnesses() const {
    std::vector<Witness> out(log_size_);
    size_t i = log_size_;
    for (const LogLink* link = log_.get(); link; link = link->prev.get()) out[--i] = link->witness;
    return out;
}

std::string_view to_string(Failure f) noexcept {
    switch (f) {
        case Failure::malformed_chain: return "malformed_chain";
        case Failure::root_discontinuity: return "root_discontinuity";
        case Failure::linkage_violation: return "linkage_violation";
        case Failure::number_gap: return "number_gap";
        case Failure::stored_hash_mismatch: return "stored_hash_mismatch";
        case Failure::invalid_proof: return "invalid_proof";
        case Failure::value_mismatch: return "value_mismatch";
    }
    return "unknown";
}

VerifyResult replay(std::span<const Witness> witnesses, HashId hash_id, mpt::Trie* rebuilt) {
    auto fail = [](Failure f, size_t step, std::string reason) {
        return VerifyResult{false, f, step, std::move(reason)};
    };
    if (witnesses.empty()) return VerifyResult{false, Failure::malformed_chain, std::nullopt, "empty witness chain"};
    const auto* first = std::get_if<InitWitness>(&witnesses[0]);
    if (!first) return fail(Failure::malformed_chain, 0, "chain must start with init");

    mpt::Trie trie = put(mpt::Trie{hash_id}, first->header.number, header_hash(first->header));
    if (trie.root() != first->resulting_root) return fail(Failure::stored_hash_mismatch, 0, "init root mismatch");
    uint64_t lo = first->header.number;
    uint64_t hi = lo;
    Digest lo_hash = header_hash(first->header);
    Digest hi_hash = lo_hash;

    for (size_t i = 1; i < witnesses.size(); ++i) {
        if (const auto* a = std::get_if<AppendWitness>(&witnesses[i])) {
            if (a->prior_root != trie.root()) return fail(Failure::root_discontinuity, i, "prior root mismatch");
            if (a->appended.number != hi + 1) return fail(Failure::number_gap, i, "appended number not contiguous");
            if (a->appended.parent_hash != hi_hash)
                return fail(Failure::linkage_violation, i, "appended parent is not the cached highest block");
            hi = a->appended.number;
            hi_hash = header_hash(a->appended);
            trie = put(trie, hi, hi_hash);
            if (trie.root() != a->resulting_root)
                return fail(Failure::stored_hash_mismatch, i, "resulting root does not store the header hash");
        } else if (const auto* p = std::get_if<PrependWitness>(&witnesses[i])) {
            if (p->prior_root != trie.root()) return fail(Failure::root_discontinuity, i, "prior root mismatch");
            if (lo == 0 || p->prepended.number != lo - 1 || p->current_leftmost.number != lo)
                return fail(Failure::number_gap, i, "prepended number not contiguous");
            const Digest h = header_hash(p->prepended);
            if (p->current_leftmost.parent_hash != h)
                return fail(Failure::linkage_violation, i, "leftmost block does not name the prepended block");
            if (header_hash(p->current_leftmost) != lo_hash)
                return fail(Failure::linkage_violation, i, "claimed leftmost header is not the cached one");
            lo = p->prepended.number;
            lo_hash = h;
            trie = put(trie, lo, lo_hash);
            if (trie.root() != p->resulting_root)
                return fail(Failure::stored_hash_mismatch, i, "resulting root does not store the header hash");
        } else {
            return fail(Failure::malformed_chain, i, "init after the first step");
        }
    }
    if (rebuilt) *rebuilt = std::move(trie);
    return {};
}

VerifyResult verify(const Digest& root, uint64_t number, const Digest& claimed_hash, const mpt::Proof& proof,
                    std::span<const Witness> witnesses, HashId hash_id) {
    mpt::Trie rebuilt{hash_id};
    auto r = replay(witnesses, hash_id, &rebuilt);
    if (!r) return r;
    if (rebuilt.root() != root)
        return VerifyResult{false, Failure::root_discontinuity, witnesses.size() - 1,
                            "witness chain does not end at the claimed root"};
    try {
        const auto value = mpt::verify(root, number_key(number), proof, hash_id);
        if (!value || *value != Bytes(claimed_hash.bytes.begin(), claimed_hash.bytes.end()))
            return VerifyResult{false, Failure::value_mismatch, std::nullopt,
                                "block " + std::to_string(number) + " is not cached with the claimed hash"};
    } catch (const mpt::InvalidProof& e) {
        return VerifyResult{false, Failure::invalid_proof, std::nullopt, e.what()};
    }
    return {};
}

void to_json(nlohmann::json& j, const Witness& w) {
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, InitWitness>) {
                j = {{"op", "init"}, {"header", v.header}, {"resulting_root", v.resulting_root.hex()}};
            } else if constexpr (std::is_same_v<T, AppendWitness>) {
                j = {{"op", "append"},
                     {"prior_root", v.prior_root.hex()},
                     {"header", v.appended},
                     {"resulting_root", v.resulting_root.hex()}};
            } else {
                j = {{"op", "prepend"},
                     {"prior_root", v.prior_root.hex()},
                     {"header", v.prepended},
                     {"current_leftmost", v.current_leftmost},
                     {"resulting_root", v.resulting_root.hex()}};
            }
        },
        w);
}

void from_json(const nlohmann::json& j, Witness& w) {
    const auto op = j.at("op").get<std::string>();
    if (op == "init") {
        w = InitWitness{j.at("header").get<BlockHeader>(), j.at("resulting_root").get<Digest>()};
    } else if (op == "append") {
        w = AppendWitness{j.at("prior_root").get<Digest>(), j.at("header").get<BlockHeader>(),
                          j.at("resulting_root").get<Digest>()};
    } else if (op == "prepend") {
        w = PrependWitness{j.at("prior_root").get<Digest>(), j.at("header").get<BlockHeader>(),
                           j.at("current_leftmost").get<BlockHeader>(), j.at("resulting_root").get<Digest>()};
    } else {
        throw std::invalid_argument("unknown witness op: " + op);
    }
}

void to_json(nlohmann::json& j, const Bundle& b) {
    j = {{"root", b.root.hex()},
         {"number", b.number},
         {"hash", b.hash.hex()},
         {"mpt_proof", {{"nodes", mpt::nodes_to_json(b.mpt_proof)}}},
         {"witnesses", b.witnesses}};
}

void from_json(const nlohmann::json& j, Bundle& b) {
    b.root = j.at("root").get<Digest>();
    b.number = quantity_from_json(j.at("number"));
    b.hash = j.at("hash").get<Digest>();
    b.mpt_proof = mpt::nodes_from_json(j.at("mpt_proof").at("nodes"));
    b.witnesses = j.at("witnesses").get<std::vector<Witness>>();
}

}  // namespace stateproof::blockcache
