#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dip/graph.hpp"
#include "dip/map.hpp"
#include "dip/state.hpp"

namespace dip::msg {

enum class ActKind {
  Commitment,       // sender announces its own action
  Proposal,         // sender suggests an action for the recipient
  Agreement,        // sender accepts the interlocutor's open proposal
  ThirdPartyReport, // action of a power that is neither sender nor recipient
  None,
};

struct CommunicativeAct {
  ActKind kind = ActKind::None;
  amr::IntentGraph action_graph;
  Power actor{};          // power whose unit would execute the action
  bool conditional = false;  // carries a :condition; detectors skip these
  std::vector<Order> grounded;

  bool operator==(const CommunicativeAct&) const = default;
};

struct MessageContext {
  Power sender{};
  Power recipient{};
  TurnId turn;
  GameState state;
  // Most recent ungrounded proposal from the interlocutor this turn, if any;
  // short-answer agreements bind to it.
  std::optional<CommunicativeAct> open_proposal;
};

// §-style normalization: contractions expanded, first/second-person pronouns
// replaced by country names, province abbreviations by full names. Idempotent.
std::string preprocess(const Map& map, const std::string& text,
                       const MessageContext& ctx);

// Pattern-grammar extraction over preprocessed text; returns zero or more
// acts. Unparseable strategic content degrades to no acts.
std::vector<CommunicativeAct> extract_acts(const Map& map,
                                           const std::string& text,
                                           const MessageContext& ctx);

// Fully specified intent graph for a concrete order (used when agents
// synthesize messages about their own or suggested orders).
amr::IntentGraph order_graph(const Map& map, const GameState& state,
                             Power owner, const Order& o);

// Template English for an act, written so that extract_acts on the rendered
// text recovers the same grounded order set.
std::string render_act_text(const Map& map, const GameState& state,
                            const CommunicativeAct& act, Power sender,
                            Power recipient);

// Wrap a bare intent graph (e.g. an AMR-channel message) as an act: actor is
// the acting unit's country when named, else the sender; kind follows from
// the actor's role in the conversation.
CommunicativeAct act_from_graph(const Map& map, const amr::IntentGraph& g,
                                const MessageContext& ctx);

struct NoActorUnit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Brute-force instantiation of the act's graph over state occupancy filtered
// by legality. Throws NoActorUnit when the named power has no unit matching
// the graph's unit constraints at all (distinct from empty-because-illegal).
std::vector<Order> ground(const Map& map, const CommunicativeAct& act,
                          const MessageContext& ctx);

// True iff the act is a persuasion attempt (a proposal: actor = recipient).
bool classify_attempt(const CommunicativeAct& act);

}  // namespace dip::msg
