#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "dip/state.hpp"

namespace dip {

enum class Outcome {
  Succeeds,
  Bounces,
  Cut,        // support orders whose support was cut
  Dislodged,  // the ordered unit was dislodged
  Invalid,    // order failed validation, treated as hold
  Holds,
};

struct OrderResult {
  Power power{};
  Order order;
  Outcome outcome{};
};

struct ResolutionReport {
  std::vector<OrderResult> results;
  const OrderResult* for_unit(const std::string& province) const;
};

struct PhaseMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using OrderSet = std::vector<Order>;

// Deterministic rulebook movement resolution: support cutting, head-to-head
// battles, equal-strength bounces, convoy routing with the all-hold
// convention (a convoyed attack does not cut support aimed at its own convoy
// fleet). Fall movement updates supply-center ownership for occupied centers
// at the adjustment step. Missing orders default to hold.
std::pair<GameState, ResolutionReport> adjudicate(
    const Map& map, const GameState& state,
    const std::map<Power, OrderSet>& orders);

// Retreat-phase resolution: dislodged units retreat (auto-disband when no
// legal retreat or when retreats collide).
std::pair<GameState, ResolutionReport> adjudicate_retreats(
    const Map& map, const GameState& state,
    const std::map<Power, OrderSet>& orders);

// Adjustment-phase resolution: builds at vacant owned home centers, disbands;
// shortfalls auto-disband farthest-from-home units, lexicographic tie-break.
std::pair<GameState, ResolutionReport> adjudicate_adjustments(
    const Map& map, const GameState& state,
    const std::map<Power, OrderSet>& orders);

// True if an army could be convoyed from `from` to `to` through the fleets in
// `state` occupying sea provinces (excluding any province in `exclude`).
bool convoy_path_exists(const Map& map, const GameState& state,
                        const std::string& from, const std::string& to,
                        const std::set<std::string>& via_only = {});

TurnId next_turn(const TurnId& t, bool any_dislodged, bool adjustment_needed);

}  // namespace dip
