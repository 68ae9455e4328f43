#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dip/map.hpp"
#include "dip/order.hpp"

namespace dip {

enum class Season { Spring, Fall };
enum class Phase { Movement, Retreat, Adjustment };

struct TurnId {
  int year = 1901;
  Season season = Season::Spring;
  Phase phase = Phase::Movement;

  bool operator==(const TurnId&) const = default;
  auto operator<=>(const TurnId&) const = default;
  // "S1901M", "F1901M", "F1901R", "W1901A"
  std::string key() const;
  static std::optional<TurnId> from_key(const std::string& key);
};

struct Dislodgement {
  Unit unit;
  std::string attacker_from;  // province the dislodging attack came from
  bool operator==(const Dislodgement&) const = default;
};

struct GameState {
  TurnId turn;
  std::vector<Unit> units;
  std::map<std::string, Power> sc_ownership;
  std::vector<Dislodgement> dislodged;

  const Unit* unit_at(const std::string& province) const;
  const Unit* unit_of(Power p, const std::string& province) const;
  std::vector<Unit> units_of(Power p) const;
};

// Standard 1901 opening: start units placed, home centers owned.
GameState initial_state(const Map& map);

int supply_center_count(const GameState& state, Power p);

// Resolve actor against occupancy when state is given.
Order parse_order(const Map& map, const std::string& text,
                  const GameState* state);

struct Validity {
  bool ok = true;
  std::string diagnostic;  // names the violated rule when !ok
  static Validity valid() { return {}; }
  static Validity invalid(std::string why) { return {false, std::move(why)}; }
};

// `as` checks actor ownership when provided.
Validity validate_order(const Map& map, const GameState& state, const Order& o,
                        std::optional<Power> as = std::nullopt);

// All validate_order-passing orders for a unit in the current phase.
std::vector<Order> legal_moves(const Map& map, const GameState& state,
                               const Unit& unit);

}  // namespace dip
