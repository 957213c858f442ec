// Copyright 2026 The Stateproof Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include <json.hpp>

#include <stateproof/blockcache.hpp>
#include <stateproof/chain.hpp>
#include <stateproof/mmr.hpp>

// Discrete-event model of one L1 and several optimistic-rollup L2s.
//
// L2s post their head block hash to a rollup contract on L1 every
// state_update_interval; an L1 -> L2 bridge writes the L1 head hash into a
// contract on the L2 every bridge_push_interval. Both are ordinary storage
// writes, so every cross-chain claim is checked with real storage and
// block-inclusion proofs.
namespace stateproof::sim {

enum class Layer { L1, L2 };
enum class Finality { none, weak, objective };
enum class Flow { l2_to_l1, l1_to_l2, l2_to_l2 };
enum class Accumulator { mpt, mmr };

std::string_view to_string(Layer l) noexcept;
std::string_view to_string(Finality f) noexcept;  //!< "NoneFinality" / "WeakFinality" / "ObjectiveFinality"
std::string_view to_string(Flow f) noexcept;      //!< "L2toL1" / "L1toL2" / "L2toL2"
std::string_view to_string(Accumulator a) noexcept;
Finality parse_finality(std::string_view s);
Flow parse_flow(std::string_view s);
Accumulator parse_accumulator(std::string_view s);

struct NetworkConfig {
    uint64_t chain_id{1};
    Layer layer{Layer::L1};
    uint64_t block_time{12};
    uint64_t parent{0};                      //!< L2 only: the L1 chain id
    uint64_t state_update_interval{1800};    //!< L2 only; 0 disables periodic updates
    uint64_t challenge_period{604800};       //!< L2 only
    bool bridge{true};                       //!< L2 only: receives L1 block hashes
    uint64_t bridge_push_interval{600};      //!< L2 only; 0 leaves only scripted pushes
    uint64_t l1_finality_delay{780};         //!< L1 only
    uint64_t activity_interval{60};          //!< seeded background writes; 0 disables
    chain::BlockhashMode blockhash_mode{chain::BlockhashMode::window256};

    static NetworkConfig l1(uint64_t chain_id = 1);
    static NetworkConfig l2(uint64_t chain_id, uint64_t parent = 1);
};

//! Throws Error(InvalidConfig) on zero block times, missing parents and so on.
void validate(const std::vector<NetworkConfig>& configs);

//! An L2 head hash written to the rollup contract. Logged when it lands.
struct StateUpdate {
    uint64_t l2_chain{0};
    uint64_t l2_block{0};  //!< the transferred block
    Digest l2_hash;
    uint64_t epoch{0};
    uint64_t submitted_at{0};
    uint64_t l1_block{0};  //!< where it landed
    uint64_t time{0};      //!< landing block timestamp

    friend bool operator==(const StateUpdate&, const StateUpdate&) = default;
};

//! An L1 head hash delivered to an L2. Logged when it lands.
struct BridgePush {
    uint64_t l1_block{0};  //!< the transferred block
    Digest l1_hash;
    uint64_t l2_chain{0};
    uint64_t submitted_at{0};
    uint64_t l2_block{0};  //!< where it landed
    uint64_t time{0};

    friend bool operator==(const BridgePush&, const BridgePush&) = default;
};

//! Where state updates and bridged hashes are stored.
const Address& rollup_contract();
const Address& bridge_contract();
Bytes32 state_update_slot(uint64_t l2_chain, uint64_t epoch);
Bytes32 bridge_slot();

struct BlockRef {
    uint64_t number{0};
    Digest hash;

    friend bool operator==(const BlockRef&, const BlockRef&) = default;
};

//! Evidence that `target` and `anchor` (target <= anchor) sit on one chain.
struct InclusionProof {
    Accumulator kind{Accumulator::mpt};
    uint64_t chain_id{0};
    Digest root;
    uint64_t first_number{0};
    uint64_t target_number{0};
    uint64_t anchor_number{0};
    mpt::Proof target_mpt;
    mpt::Proof anchor_mpt;
    std::vector<blockcache::Witness> cache_witnesses;
    mmr::Proof target_mmr;
    mmr::Proof anchor_mmr;
    std::vector<mmr::Witness> mmr_witnesses;
};

//! Builds the accumulator over [target, anchor] of `chain`.
InclusionProof make_inclusion(const chain::SimChain& chain, Accumulator kind, uint64_t target, uint64_t anchor);
//! Empty string on success, otherwise why it failed.
std::string check_inclusion(const InclusionProof& p, const BlockRef& target, const BlockRef& anchor);

//! Claims the prover makes. Every step checks one artifact against these.
struct Claims {
    uint64_t source_chain{0};
    uint64_t dest_chain{0};
    uint64_t l1_chain{0};
    Address address;
    Bytes32 slot;
    std::optional<Bytes32> value;  //!< nullopt claims the slot is empty
    BlockRef source_proof_block;
    BlockRef l2_transfered;
    BlockRef l1_landing;
    uint64_t epoch{0};
    BlockRef l1_transfered;
    BlockRef dest_proof_block;
    BlockRef anchor;
    uint64_t verification_block{0};
};

struct HeaderPreimage {
    uint64_t chain_id{0};
    Bytes rlp;
};

using Artifact = std::variant<chain::HierarchicalProof, StateUpdate, InclusionProof, HeaderPreimage, BridgePush>;

struct Evidence {
    Flow flow{Flow::l2_to_l1};
    Claims claims;
    std::vector<Artifact> artifacts;  //!< artifacts[i] belongs to step i
};

//! Step names of each flow, in order.
const std::vector<std::string>& step_names(Flow f);

struct Request {
    std::string id;
    uint64_t at{0};
    Flow flow{Flow::l2_to_l1};
    uint64_t source_chain{0};
    uint64_t proof_block{0};
    Address address;
    Bytes32 slot;
    uint64_t dest_chain{0};
    Finality policy{Finality::weak};
};

struct StepResult {
    std::string name;
    std::string evidence;
    bool pass{false};
    std::string detail;
};

struct VerificationReport {
    std::string request_id;
    Flow flow{Flow::l2_to_l1};
    uint64_t time{0};
    Finality policy{Finality::none};
    std::vector<StepResult> steps;
    Finality finality_at_verification{Finality::none};
    bool accepted{false};
    std::optional<std::string> error;  //!< e.g. "NotYetCommitted", "FinalityInsufficient"
    std::optional<Bytes32> value;
};

//! Prover-side failure: the flow cannot be assembled at `step`.
struct FlowError {
    std::string code;
    size_t step{0};
    std::string message;
};

struct Gathered {
    Evidence evidence;
    std::optional<FlowError> error;
};

class World {
  public:
    //! Genesis blocks at time 0. Throws Error(InvalidConfig).
    World(std::vector<NetworkConfig> configs, uint64_t seed, Accumulator accumulator = Accumulator::mpt);

    //! Processes every event due at or before until_time, ordered by
    //! (time, phase, insertion sequence).
    void advance(uint64_t until_time);
    uint64_t clock() const noexcept { return clock_; }

    const chain::SimChain& chain(uint64_t chain_id) const;
    const NetworkConfig& config(uint64_t chain_id) const;
    Accumulator accumulator() const noexcept { return accumulator_; }

    //! One-off events; `at` must not be in the past.
    void schedule_write(uint64_t at, uint64_t chain_id, const Address& a, const Bytes32& slot, const Bytes32& value);
    void schedule_state_update(uint64_t at, uint64_t l2_chain);
    void schedule_bridge_push(uint64_t at, uint64_t l2_chain);

    //! Status of a block as seen at `at_time` (<= clock). Throws Error(UnknownBlock).
    Finality finality_of(uint64_t chain_id, uint64_t block_number, uint64_t at_time) const;

    const std::vector<StateUpdate>& state_updates() const noexcept { return state_updates_; }
    const std::vector<BridgePush>& bridge_log() const noexcept { return bridge_log_; }
    //! Newline-delimited JSON: writes, state updates, bridge pushes, verifications.
    const std::vector<std::string>& event_log() const noexcept { return event_log_; }

    Gathered gather(const Request& r) const;
    VerificationReport check(const Request& r, const Gathered& g) const;
    //! gather + check at the current clock; also appends to the event log.
    VerificationReport run(const Request& r);

    VerificationReport verify_l2_on_l1(uint64_t l2_chain, uint64_t l2_proof_block, const Address& a,
                                       const Bytes32& slot, Finality policy);
    VerificationReport verify_l1_on_l2(uint64_t l1_proof_block, const Address& a, const Bytes32& slot,
                                       uint64_t l2_chain, Finality policy);
    VerificationReport verify_l2_on_l2(uint64_t source_l2, uint64_t source_proof_block, const Address& a,
                                       const Bytes32& slot, uint64_t dest_l2, Finality policy);

  private:
    enum class EventKind { write, produce, state_update, bridge_push, activity };
    struct Event {
        uint64_t time;
        int phase;
        uint64_t seq;
        EventKind kind;
        uint64_t chain_id;
        chain::Change change;  // writes only
        bool periodic;

        bool operator>(const Event& o) const {
            return std::tie(time, phase, seq) > std::tie(o.time, o.phase, o.seq);
        }
    };
    struct Node {
        NetworkConfig config;
        chain::SimChain chain;
        std::vector<chain::Change> pending;
        std::vector<nlohmann::json> pending_writes;
        std::vector<StateUpdate> pending_updates;  // L1 only
        std::vector<BridgePush> pending_pushes;    // L2 only
        uint64_t next_epoch{0};
        SplitMix64 rng{0};
    };

    void push_event(uint64_t time, EventKind kind, uint64_t chain_id, bool periodic, chain::Change change = {});
    void handle(const Event& e);
    void produce(Node& n, uint64_t time);
    Node& node(uint64_t chain_id);
    const Node& node(uint64_t chain_id) const;
    void log(nlohmann::json line);

    Gathered gather_l2_on_l1(const Request& r) const;
    Gathered gather_l1_on_l2(const Request& r) const;
    Gathered gather_l2_on_l2(const Request& r) const;

    std::map<uint64_t, Node> nodes_;
    uint64_t l1_id_{0};
    uint64_t clock_{0};
    uint64_t seq_{0};
    Accumulator accumulator_;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
    std::vector<StateUpdate> state_updates_;
    std::vector<BridgePush> bridge_log_;
    std::vector<std::string> event_log_;
};

//! Scenario file: networks, seed, accumulator, scripted events and requests.
struct Scenario {
    std::string name;
    uint64_t seed{0};
    Accumulator accumulator{Accumulator::mpt};
    std::vector<NetworkConfig> networks;
    nlohmann::json events = nlohmann::json::array();
    std::vector<Request> requests;
    uint64_t until{0};  //!< final clock; defaults to the last request time
};

struct ScenarioResult {
    std::vector<VerificationReport> reports;
    std::vector<std::string> event_log;

    //! {"scenario": name, "reports": [...]} dumped with two-space indent.
    std::string report_json(const std::string& name) const;
    std::string event_log_ndjson() const;
};

ScenarioResult run_scenario(const Scenario& s);

void to_json(nlohmann::json& j, const NetworkConfig& c);
void from_json(const nlohmann::json& j, NetworkConfig& c);
void to_json(nlohmann::json& j, const Request& r);
void from_json(const nlohmann::json& j, Request& r);
void from_json(const nlohmann::json& j, Scenario& s);
void to_json(nlohmann::json& j, const VerificationReport& r);

}  // namespace stateproof::sim
