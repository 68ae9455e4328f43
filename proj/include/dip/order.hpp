#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "dip/map.hpp"

namespace dip {

enum class OrderKind {
  Hold,
  Move,
  SupportHold,
  SupportMove,
  Convoy,
  Retreat,
  Disband,
  Build,
};

// One unit's instruction in canonical form. Owner is contextual (orders are
// submitted per power); equality is unit + kind + endpoints, coast-normalized
// where coasts are absent.
struct Order {
  UnitKind unit{};
  Location at;            // actor location (Build: build site)
  OrderKind kind{};
  Location dest;          // Move/Retreat/SupportMove destination; Convoy dest
  UnitKind target_unit{};  // Support*/Convoy: the assisted unit's kind
  Location target_at;      // Support*/Convoy: the assisted unit's location

  bool operator==(const Order&) const = default;
  auto operator<=>(const Order&) const = default;
};

struct OrderError : std::runtime_error {
  enum class Code { UnknownProvince, MalformedOrder, NoSuchUnit };
  Code code;
  OrderError(Code c, const std::string& what)
      : std::runtime_error(what), code(c) {}
};

// Parse conventional shorthand ("F SKA - SWE", "A PAR H",
// "F NWY S F SKA - SWE", "F ENG C A LON - BRE", "A PAR R GAS", "A PAR D",
// "A PAR B"). Codes case-insensitive. When `state_map` is given the province
// codes are validated against it.
Order parse_order(const Map& map, const std::string& text);

// Canonical text rendering; parse(render(o)) == o.
std::string render_order(const Order& o);

// Drop coast qualifiers for membership comparison (Eq. 1/2 equality).
Order coast_normalized(const Order& o);

}  // namespace dip
