#include "dip/state.hpp"

#include <algorithm>

#include "dip/adjudicator.hpp"

namespace dip {

std::string TurnId::key() const {
  std::string s;
  s += phase == Phase::Adjustment ? 'W' : (season == Season::Spring ? 'S' : 'F');
  s += std::to_string(year);
  s += phase == Phase::Movement ? 'M' : (phase == Phase::Retreat ? 'R' : 'A');
  return s;
}

std::optional<TurnId> TurnId::from_key(const std::string& key) {
  if (key.size() < 6) return std::nullopt;
  TurnId t;
  char season = key[0];
  char phase = key.back();
  try {
    t.year = std::stoi(key.substr(1, key.size() - 2));
  } catch (...) {
    return std::nullopt;
  }
  if (phase == 'M')
    t.phase = Phase::Movement;
  else if (phase == 'R')
    t.phase = Phase::Retreat;
  else if (phase == 'A')
    t.phase = Phase::Adjustment;
  else
    return std::nullopt;
  if (season == 'S')
    t.season = Season::Spring;
  else if (season == 'F' || season == 'W')
    t.season = Season::Fall;
  else
    return std::nullopt;
  return t;
}

const Unit* GameState::unit_at(const std::string& province) const {
  for (const auto& u : units)
    if (u.loc.province == province) return &u;
  return nullptr;
}

const Unit* GameState::unit_of(Power p, const std::string& province) const {
  const Unit* u = unit_at(province);
  return u && u->owner == p ? u : nullptr;
}

std::vector<Unit> GameState::units_of(Power p) const {
  std::vector<Unit> out;
  for (const auto& u : units)
    if (u.owner == p) out.push_back(u);
  return out;
}

GameState initial_state(const Map& map) {
  GameState s;
  s.turn = {1901, Season::Spring, Phase::Movement};
  s.units = map.start_units();
  for (const auto& code : map.codes()) {
    const auto& p = map.province(code);
    if (p.supply_center && p.home_of) s.sc_ownership[code] = *p.home_of;
  }
  return s;
}

int supply_center_count(const GameState& state, Power p) {
  int n = 0;
  for (const auto& [prov, owner] : state.sc_ownership)
    if (owner == p) ++n;
  return n;
}

namespace {

// Can `unit` move (unconvoyed) into `province`, on any coast?
bool can_reach(const Map& map, const Unit& u, const std::string& province) {
  for (const auto& n : map.neighbors(u.kind, u.loc))
    if (n.province == province) return true;
  return false;
}

bool unit_move_legal(const Map& map, const GameState& state, const Unit& u,
                     const Location& dest) {
  if (!map.can_occupy(u.kind, dest.province)) return false;
  if (map.adjacent(u.kind, u.loc, dest)) return true;
  if (u.kind == UnitKind::Army &&
      map.province(u.loc.province).kind == ProvinceKind::Coastal &&
      map.province(dest.province).kind == ProvinceKind::Coastal)
    return convoy_path_exists(map, state, u.loc.province, dest.province);
  return false;
}

}  // namespace

Validity validate_order(const Map& map, const GameState& state, const Order& o,
                        std::optional<Power> as) {
  const Phase phase = state.turn.phase;
  auto phase_ok = [&](std::initializer_list<OrderKind> kinds) {
    return std::find(kinds.begin(), kinds.end(), o.kind) != kinds.end();
  };
  switch (phase) {
    case Phase::Movement:
      if (!phase_ok({OrderKind::Hold, OrderKind::Move, OrderKind::SupportHold,
                     OrderKind::SupportMove, OrderKind::Convoy}))
        return Validity::invalid("order kind not allowed in movement phase");
      break;
    case Phase::Retreat:
      if (!phase_ok({OrderKind::Retreat, OrderKind::Disband}))
        return Validity::invalid("order kind not allowed in retreat phase");
      break;
    case Phase::Adjustment:
      if (!phase_ok({OrderKind::Build, OrderKind::Disband}))
        return Validity::invalid("order kind not allowed in adjustment phase");
      break;
  }

  if (o.kind == OrderKind::Build) {
    const Province& p = map.province(o.at.province);
    if (!p.supply_center || !p.home_of)
      return Validity::invalid("build rule: not a home supply center");
    Power builder = as.value_or(*p.home_of);
    if (p.home_of != builder)
      return Validity::invalid("build rule: not this power's home center");
    auto own = state.sc_ownership.find(o.at.province);
    if (own == state.sc_ownership.end() || own->second != builder)
      return Validity::invalid("build rule: home center not currently owned");
    if (state.unit_at(o.at.province))
      return Validity::invalid("build rule: province occupied");
    if (!map.can_occupy(o.unit, o.at.province))
      return Validity::invalid("build rule: unit kind cannot occupy province");
    if (o.unit == UnitKind::Fleet && !p.coasts.empty() && o.at.coast.empty())
      return Validity::invalid("build rule: coast required");
    return Validity::valid();
  }

  if (phase == Phase::Retreat) {
    const Dislodgement* d = nullptr;
    for (const auto& dl : state.dislodged)
      if (dl.unit.loc.province == o.at.province) d = &dl;
    if (!d) return Validity::invalid("no dislodged unit at " + o.at.province);
    if (d->unit.kind != o.unit)
      return Validity::invalid("unit kind mismatch");
    if (as && d->unit.owner != *as)
      return Validity::invalid("ownership: unit belongs to another power");
    if (o.kind == OrderKind::Disband) return Validity::valid();
    if (o.dest.province == d->attacker_from)
      return Validity::invalid("retreat rule: cannot retreat toward attacker");
    if (!map.adjacent(d->unit.kind, d->unit.loc, o.dest))
      return Validity::invalid("adjacency: retreat destination unreachable");
    if (!map.can_occupy(d->unit.kind, o.dest.province))
      return Validity::invalid("kind: unit cannot occupy destination");
    if (state.unit_at(o.dest.province))
      return Validity::invalid("retreat rule: destination occupied");
    return Validity::valid();
  }

  const Unit* u = state.unit_at(o.at.province);
  if (!u) return Validity::invalid("no such unit at " + o.at.province);
  if (u->kind != o.unit)
    return Validity::invalid("kind: ordered unit kind does not match occupant");
  if (as && u->owner != *as)
    return Validity::invalid("ownership: unit belongs to another power");

  switch (o.kind) {
    case OrderKind::Hold:
      return Validity::valid();
    case OrderKind::Disband:
      return Validity::valid();
    case OrderKind::Move: {
      if (o.dest.province == o.at.province)
        return Validity::invalid("adjacency: move to own province");
      if (!map.can_occupy(u->kind, o.dest.province))
        return Validity::invalid(u->kind == UnitKind::Army
                                     ? "kind: army cannot enter sea province"
                                     : "kind: fleet cannot enter land province");
      if (map.adjacent(u->kind, u->loc, o.dest)) {
        const Province& dp = map.province(o.dest.province);
        if (u->kind == UnitKind::Fleet && !dp.coasts.empty() &&
            o.dest.coast.empty()) {
          // Coast inferrable only if exactly one coast is reachable.
          int reachable = 0;
          for (const auto& c : dp.coasts)
            if (map.adjacent(u->kind, u->loc, {o.dest.province, c}))
              ++reachable;
          if (reachable != 1)
            return Validity::invalid("coast: ambiguous destination coast");
        }
        return Validity::valid();
      }
      if (u->kind == UnitKind::Army &&
          map.province(o.dest.province).kind == ProvinceKind::Coastal &&
          map.province(u->loc.province).kind == ProvinceKind::Coastal &&
          convoy_path_exists(map, state, u->loc.province, o.dest.province))
        return Validity::valid();
      return Validity::invalid("adjacency: destination unreachable");
    }
    case OrderKind::SupportHold: {
      const Unit* t = state.unit_at(o.target_at.province);
      if (!t) return Validity::invalid("no unit to support at " +
                                       o.target_at.province);
      if (t == u) return Validity::invalid("support rule: cannot support self");
      if (!can_reach(map, *u, o.target_at.province))
        return Validity::invalid("adjacency: cannot support into " +
                                 o.target_at.province);
      return Validity::valid();
    }
    case OrderKind::SupportMove: {
      const Unit* t = state.unit_at(o.target_at.province);
      if (!t) return Validity::invalid("no unit to support at " +
                                       o.target_at.province);
      if (t == u) return Validity::invalid("support rule: cannot support self");
      if (!can_reach(map, *u, o.dest.province))
        return Validity::invalid("adjacency: cannot support into " +
                                 o.dest.province);
      if (!unit_move_legal(map, state, *t, {o.dest.province, ""}))
        return Validity::invalid("support rule: supported move is illegal");
      return Validity::valid();
    }
    case OrderKind::Convoy: {
      if (u->kind != UnitKind::Fleet)
        return Validity::invalid("kind: only fleets convoy");
      if (map.province(u->loc.province).kind != ProvinceKind::Sea)
        return Validity::invalid("convoy rule: convoying fleet must be at sea");
      const Unit* t = state.unit_at(o.target_at.province);
      if (!t || t->kind != UnitKind::Army)
        return Validity::invalid("convoy rule: no army to convoy at " +
                                 o.target_at.province);
      if (map.province(o.dest.province).kind != ProvinceKind::Coastal)
        return Validity::invalid("convoy rule: destination not coastal");
      if (!convoy_path_exists(map, state, o.target_at.province,
                              o.dest.province, {u->loc.province}))
        return Validity::invalid("convoy rule: no path through this fleet");
      return Validity::valid();
    }
    default:
      return Validity::invalid("order kind not allowed here");
  }
}

std::vector<Order> legal_moves(const Map& map, const GameState& state,
                               const Unit& unit) {
  std::vector<Order> out;
  auto add = [&](Order o) {
    if (validate_order(map, state, o, unit.owner).ok) out.push_back(std::move(o));
  };

  if (state.turn.phase != Phase::Movement) return out;

  Order hold{unit.kind, unit.loc, OrderKind::Hold, {}, {}, {}};
  add(hold);

  // Direct moves (coast-expanded).
  std::set<Location> dests;
  for (const auto& n : map.neighbors(unit.kind, unit.loc)) dests.insert(n);
  // Convoyed destinations for coastal armies.
  if (unit.kind == UnitKind::Army &&
      map.province(unit.loc.province).kind == ProvinceKind::Coastal) {
    for (const auto& code : map.codes()) {
      if (code == unit.loc.province) continue;
      if (map.province(code).kind != ProvinceKind::Coastal) continue;
      if (convoy_path_exists(map, state, unit.loc.province, code))
        dests.insert({code, ""});
    }
  }
  for (const auto& d : dests)
    add({unit.kind, unit.loc, OrderKind::Move, d, {}, {}});

  // Supports.
  for (const auto& other : state.units) {
    if (other.loc == unit.loc) continue;
    if (can_reach(map, unit, other.loc.province))
      add({unit.kind, unit.loc, OrderKind::SupportHold, {}, other.kind,
           other.loc});
    for (const auto& n : map.neighbors(unit.kind, unit.loc)) {
      if (n.province == other.loc.province) continue;
      add({unit.kind, unit.loc, OrderKind::SupportMove, {n.province, ""},
           other.kind, other.loc});
    }
  }

  // Convoys for sea fleets.
  if (unit.kind == UnitKind::Fleet &&
      map.province(unit.loc.province).kind == ProvinceKind::Sea) {
    for (const auto& army : state.units) {
      if (army.kind != UnitKind::Army) continue;
      if (map.province(army.loc.province).kind != ProvinceKind::Coastal)
        continue;
      for (const auto& code : map.codes()) {
        if (map.province(code).kind != ProvinceKind::Coastal) continue;
        if (code == army.loc.province) continue;
        add({unit.kind, unit.loc, OrderKind::Convoy, {code, ""}, army.kind,
             army.loc});
      }
    }
  }

  // De-duplicate (coast expansion can repeat support targets).
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace dip
