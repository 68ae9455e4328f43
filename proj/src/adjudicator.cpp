#include "dip/adjudicator.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace dip {

namespace {

enum class MoveStatus { Unresolved, Success, Fail };

struct Entry {
  Power power{};
  Order order;
  Unit unit;
  bool valid = true;
  bool convoyed = false;         // move travels by convoy
  bool convoy_disrupted = false;
  bool support_cut = false;
  MoveStatus move = MoveStatus::Unresolved;
  bool dislodged = false;
  std::string dislodged_by;  // attacker origin
};

bool is_support(const Order& o) {
  return o.kind == OrderKind::SupportHold || o.kind == OrderKind::SupportMove;
}

}  // namespace

static void finish_movement(const Map& map, GameState& s);

const OrderResult* ResolutionReport::for_unit(
    const std::string& province) const {
  for (const auto& r : results)
    if (r.order.at.province == province) return &r;
  return nullptr;
}

bool convoy_path_exists(const Map& map, const GameState& state,
                        const std::string& from, const std::string& to,
                        const std::set<std::string>& via_only) {
  // Occupied sea provinces form the graph.
  std::set<std::string> seas;
  for (const auto& u : state.units)
    if (u.kind == UnitKind::Fleet &&
        map.province(u.loc.province).kind == ProvinceKind::Sea)
      seas.insert(u.loc.province);
  if (seas.empty()) return false;

  auto fleet_touches = [&](const std::string& sea, const std::string& coastal) {
    return map.adjacent_any_coast(UnitKind::Fleet, sea, coastal);
  };
  auto reaches = [&](const std::string& start,
                     const std::string& goal_coastal,
                     bool start_is_sea) -> std::set<std::string> {
    // BFS over occupied seas; returns seas reachable (incl. start if sea).
    std::deque<std::string> q;
    std::set<std::string> seen;
    if (start_is_sea) {
      if (!seas.count(start)) return {};
      q.push_back(start);
      seen.insert(start);
    } else {
      for (const auto& s : seas)
        if (fleet_touches(s, start)) {
          q.push_back(s);
          seen.insert(s);
        }
    }
    while (!q.empty()) {
      std::string s = q.front();
      q.pop_front();
      for (const auto& n : map.neighbors(UnitKind::Fleet, {s, ""})) {
        if (seas.count(n.province) && !seen.count(n.province)) {
          seen.insert(n.province);
          q.push_back(n.province);
        }
      }
    }
    (void)goal_coastal;
    return seen;
  };

  auto path_between = [&](const std::string& a, const std::string& b,
                          const std::set<std::string>& via) {
    auto from_a = reaches(a, b, false);
    for (const auto& s : from_a) {
      if (!fleet_touches(s, b)) continue;
      if (via.empty()) return true;
      // All via seas must lie on some chain; approximate with reachability
      // through the via sea (exact for the single-fleet use in validation).
      bool ok = true;
      for (const auto& v : via) {
        if (!from_a.count(v)) { ok = false; break; }
        auto from_v = reaches(v, b, true);
        bool touch = false;
        for (const auto& s2 : from_v)
          if (fleet_touches(s2, b)) { touch = true; break; }
        if (!touch) { ok = false; break; }
      }
      if (ok) return true;
    }
    return false;
  };

  return path_between(from, to, via_only);
}

namespace {

// Convoy path restricted to fleets that issued a matching convoy order and
// are not (currently believed) dislodged.
bool convoy_route_up(const Map& map, const std::vector<Entry>& entries,
                     const Entry& mover) {
  std::set<std::string> seas;
  for (const auto& e : entries) {
    if (e.order.kind != OrderKind::Convoy || !e.valid || e.dislodged) continue;
    if (e.order.target_at.province != mover.unit.loc.province) continue;
    if (e.order.dest.province != mover.order.dest.province) continue;
    seas.insert(e.unit.loc.province);
  }
  if (seas.empty()) return false;
  const std::string& from = mover.unit.loc.province;
  const std::string& to = mover.order.dest.province;
  std::deque<std::string> q;
  std::set<std::string> seen;
  for (const auto& s : seas)
    if (map.adjacent_any_coast(UnitKind::Fleet, s, from)) {
      q.push_back(s);
      seen.insert(s);
    }
  while (!q.empty()) {
    std::string s = q.front();
    q.pop_front();
    if (map.adjacent_any_coast(UnitKind::Fleet, s, to)) return true;
    for (const auto& n : map.neighbors(UnitKind::Fleet, {s, ""}))
      if (seas.count(n.province) && !seen.count(n.province)) {
        seen.insert(n.province);
        q.push_back(n.province);
      }
  }
  return false;
}

struct Resolver {
  const Map& map;
  const GameState& state;
  std::vector<Entry> entries;
  std::map<std::string, size_t> by_province;  // actor province -> entry

  Entry* at(const std::string& prov) {
    auto it = by_province.find(prov);
    return it == by_province.end() ? nullptr : &entries[it->second];
  }

  bool is_valid_move(const Entry& e) const {
    return e.valid && e.order.kind == OrderKind::Move &&
           e.move != MoveStatus::Fail && !e.convoy_disrupted;
  }

  void compute_convoys() {
    for (auto& e : entries) {
      if (!e.valid || e.order.kind != OrderKind::Move) continue;
      bool direct = map.adjacent(e.unit.kind, e.unit.loc,
                                 e.order.dest) ||
                    map.adjacent_any_coast(e.unit.kind, e.unit.loc.province,
                                           e.order.dest.province);
      if (e.unit.kind == UnitKind::Army && !direct) {
        e.convoyed = true;
        if (!convoy_route_up(map, entries, e)) e.convoy_disrupted = true;
      } else if (e.unit.kind == UnitKind::Army && direct) {
        // Direct route preferred; convoy only matters if no land adjacency.
        e.convoyed = false;
      }
    }
  }

  void compute_support_cuts() {
    for (auto& e : entries) {
      if (!e.valid || !is_support(e.order)) continue;
      bool cut = e.dislodged;  // dislodged supporter never gives support
      const std::string directed_at =
          e.order.kind == OrderKind::SupportMove ? e.order.dest.province
                                                 : e.order.target_at.province;
      for (const auto& a : entries) {
        if (cut) break;
        if (&a == &e) continue;
        if (!a.valid || a.order.kind != OrderKind::Move) continue;
        if (a.order.dest.province != e.unit.loc.province) continue;
        if (a.power == e.power) continue;
        if (a.unit.loc.province == directed_at) continue;
        if (a.convoyed) {
          if (a.convoy_disrupted) continue;
          // All-hold convention: a convoyed attack cannot cut support that
          // targets one of its own convoying fleets.
          bool targets_own_convoy = false;
          for (const auto& c : entries) {
            if (c.order.kind != OrderKind::Convoy || !c.valid) continue;
            if (c.order.target_at.province != a.unit.loc.province) continue;
            if (c.order.dest.province != a.order.dest.province) continue;
            if (e.order.kind == OrderKind::SupportHold &&
                e.order.target_at.province == c.unit.loc.province)
              targets_own_convoy = true;
            if (e.order.kind == OrderKind::SupportMove &&
                e.order.dest.province == c.unit.loc.province)
              targets_own_convoy = true;
          }
          if (targets_own_convoy) continue;
        }
        cut = true;
      }
      e.support_cut = cut;
    }
  }

  int move_strength(const Entry& m, std::optional<Power> excluding) const {
    int s = 1;
    for (const auto& e : entries) {
      if (!e.valid || e.support_cut) continue;
      if (e.order.kind != OrderKind::SupportMove) continue;
      if (e.order.target_at.province != m.unit.loc.province) continue;
      if (e.order.dest.province != m.order.dest.province) continue;
      if (excluding && e.power == *excluding) continue;
      ++s;
    }
    return s;
  }

  int hold_strength(const Entry& h) const {
    int s = 1;
    for (const auto& e : entries) {
      if (!e.valid || e.support_cut) continue;
      if (e.order.kind != OrderKind::SupportHold) continue;
      if (e.order.target_at.province != h.unit.loc.province) continue;
      ++s;
    }
    return s;
  }

  // One resolution pass; returns true if any status changed.
  bool pass() {
    bool changed = false;
    // Group moves by destination.
    std::map<std::string, std::vector<size_t>> by_dest;
    for (size_t i = 0; i < entries.size(); ++i) {
      const Entry& e = entries[i];
      if (e.valid && e.order.kind == OrderKind::Move && !e.convoy_disrupted)
        by_dest[e.order.dest.province].push_back(i);
    }
    for (auto& [dest, idxs] : by_dest) {
      // Strengths of all contenders still in play.
      std::vector<std::pair<size_t, int>> contenders;
      for (size_t i : idxs) {
        if (entries[i].move == MoveStatus::Fail) continue;
        contenders.push_back({i, move_strength(entries[i], std::nullopt)});
      }
      if (contenders.empty()) continue;
      int best = 0, second = 0;
      size_t best_i = contenders[0].first;
      for (auto& [i, s] : contenders) {
        if (s > best) {
          second = best;
          best = s;
          best_i = i;
        } else if (s >= second) {
          second = s;
        }
      }
      // Everything weaker than some rival bounces.
      for (auto& [i, s] : contenders) {
        if (i != best_i || best == second) {
          if (s < best || best == second) {
            if (entries[i].move != MoveStatus::Fail) {
              entries[i].move = MoveStatus::Fail;
              changed = true;
            }
          }
        }
      }
      if (best == second) continue;  // top tie: all bounced above
      Entry& w = entries[best_i];
      if (w.move != MoveStatus::Unresolved) continue;

      Entry* def = at(dest);
      if (def == nullptr) {
        w.move = MoveStatus::Success;
        changed = true;
        continue;
      }
      // Head-to-head battle (both direct moves swapping provinces).
      bool head_to_head = def->valid && def->order.kind == OrderKind::Move &&
                          def->order.dest.province == w.unit.loc.province &&
                          !def->convoyed && !w.convoyed &&
                          !def->convoy_disrupted;
      if (head_to_head) {
        int ws = move_strength(w, def->power);
        int ds = move_strength(*def, w.power);
        if (ws > ds && def->power != w.power) {
          w.move = MoveStatus::Success;
          def->move = MoveStatus::Fail;
          def->dislodged = true;
          def->dislodged_by = w.unit.loc.province;
          changed = true;
        } else {
          // Defender may still win its own battle; this mover fails unless
          // stronger. Equal strengths bounce both.
          if (ws <= ds) {
            w.move = MoveStatus::Fail;
            changed = true;
          }
          if (move_strength(*def, std::nullopt) <= move_strength(w, std::nullopt))
            if (def->move != MoveStatus::Fail) {
              def->move = MoveStatus::Fail;
              changed = true;
            }
        }
        continue;
      }
      bool def_moving = def->valid && def->order.kind == OrderKind::Move &&
                        !def->convoy_disrupted;
      if (def_moving && def->move == MoveStatus::Success) {
        w.move = MoveStatus::Success;
        changed = true;
        continue;
      }
      if (def_moving && def->move == MoveStatus::Unresolved) {
        continue;  // wait for the defender's move to resolve
      }
      // Defender stays: need strictly greater strength, not against own power,
      // and supports of the defender's power do not help dislodge it.
      int attack = move_strength(w, def->power);
      int hold = def_moving ? 1 : hold_strength(*def);
      if (w.power == def->power || attack <= hold) {
        w.move = MoveStatus::Fail;
        changed = true;
      } else {
        w.move = MoveStatus::Success;
        def->dislodged = true;
        def->dislodged_by = w.unit.loc.province;
        changed = true;
      }
    }
    return changed;
  }

  void resolve_cycles() {
    // Remaining unresolved moves form follow-the-leader chains/cycles; the
    // rulebook lets rotations proceed.
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto& e : entries) {
        if (e.order.kind != OrderKind::Move || !e.valid) continue;
        if (e.move != MoveStatus::Unresolved) continue;
        // Follow the chain; if it loops back, succeed everyone on it.
        std::vector<Entry*> chain;
        Entry* cur = &e;
        bool cycle = false;
        while (cur && cur->move == MoveStatus::Unresolved &&
               cur->order.kind == OrderKind::Move) {
          if (std::find(chain.begin(), chain.end(), cur) != chain.end()) {
            cycle = cur == &e;
            break;
          }
          chain.push_back(cur);
          cur = at(cur->order.dest.province);
        }
        if (cycle) {
          for (Entry* c : chain) c->move = MoveStatus::Success;
          changed = true;
        }
      }
      // Anything still unresolved fails (convoy paradox fallback: all hold).
      if (!changed) {
        for (auto& e : entries)
          if (e.order.kind == OrderKind::Move &&
              e.move == MoveStatus::Unresolved) {
            e.move = MoveStatus::Fail;
            changed = true;
            break;
          }
      }
      if (changed) continue;
    }
  }

  void run() {
    // Outer loop: dislodged fleets can break convoys and dislodged
    // supporters lose their support, so recompute until stable.
    for (int round = 0; round < 20; ++round) {
      compute_convoys();
      compute_support_cuts();
      int guard = 0;
      while (pass() && ++guard < 200) {
        compute_support_cuts();
      }
      resolve_cycles();
      // Re-derive convoy disruption from dislodgements.
      bool dirty = false;
      for (auto& e : entries) {
        if (!e.valid || e.order.kind != OrderKind::Move || !e.convoyed)
          continue;
        bool up = convoy_route_up(map, entries, e);
        if (!up && !e.convoy_disrupted) {
          e.convoy_disrupted = true;
          if (e.move == MoveStatus::Success) dirty = true;
          e.move = MoveStatus::Fail;
        }
      }
      if (!dirty) break;
      // Reset and re-run with disruption pinned.
      for (auto& e : entries) {
        if (e.order.kind == OrderKind::Move && !e.convoy_disrupted)
          e.move = MoveStatus::Unresolved;
        e.dislodged = false;
        e.dislodged_by.clear();
        e.support_cut = false;
      }
    }
    // Final dislodgement sweep: a staying unit is dislodged if a successful
    // move enters its province.
    for (auto& e : entries) {
      if (!(e.order.kind == OrderKind::Move && e.move == MoveStatus::Success))
        continue;
      Entry* def = at(e.order.dest.province);
      if (def && !(def->order.kind == OrderKind::Move &&
                   def->move == MoveStatus::Success)) {
        def->dislodged = true;
        def->dislodged_by = e.unit.loc.province;
      }
    }
  }
};

Location settle_dest_coast(const Map& map, const Unit& u, const Location& dest) {
  const Province& dp = map.province(dest.province);
  if (u.kind != UnitKind::Fleet || dp.coasts.empty()) return {dest.province, ""};
  if (!dest.coast.empty()) return dest;
  for (const auto& c : dp.coasts)
    if (map.adjacent(UnitKind::Fleet, u.loc, {dest.province, c}))
      return {dest.province, c};
  return dest;
}

}  // namespace

std::pair<GameState, ResolutionReport> adjudicate(
    const Map& map, const GameState& state,
    const std::map<Power, OrderSet>& orders) {
  if (state.turn.phase != Phase::Movement)
    throw PhaseMismatch("adjudicate: state is not in a movement phase");

  Resolver r{map, state, {}, {}};
  for (const auto& [power, set] : orders) {
    for (const auto& o : set) {
      Entry e;
      e.power = power;
      e.order = o;
      const Unit* u = state.unit_of(power, o.at.province);
      if (!u) {
        e.valid = false;
        e.unit = {power, o.unit, o.at};
      } else {
        e.unit = *u;
        e.valid = validate_order(map, state, o, power).ok;
      }
      // At most one order per unit: later duplicates are dropped.
      if (u && r.by_province.count(u->loc.province)) continue;
      if (u) r.by_province[u->loc.province] = r.entries.size();
      r.entries.push_back(std::move(e));
    }
  }
  // Implicit holds for unordered units.
  for (const auto& u : state.units) {
    if (r.by_province.count(u.loc.province)) continue;
    Entry e;
    e.power = u.owner;
    e.unit = u;
    e.order = {u.kind, u.loc, OrderKind::Hold, {}, {}, {}};
    e.valid = true;
    r.by_province[u.loc.province] = r.entries.size();
    r.entries.push_back(std::move(e));
  }

  r.run();

  // Build the next state.
  GameState next = state;
  next.dislodged.clear();
  std::vector<Unit> units;
  for (const auto& e : r.entries) {
    if (!r.by_province.count(e.unit.loc.province) ||
        &r.entries[r.by_province.at(e.unit.loc.province)] != &e)
      continue;  // skip entries for nonexistent units
    if (e.dislodged) {
      next.dislodged.push_back({e.unit, e.dislodged_by});
      continue;
    }
    Unit u = e.unit;
    if (e.valid && e.order.kind == OrderKind::Move &&
        e.move == MoveStatus::Success)
      u.loc = settle_dest_coast(map, u, e.order.dest);
    units.push_back(u);
  }
  next.units = std::move(units);

  ResolutionReport report;
  for (const auto& e : r.entries) {
    Outcome oc;
    if (!e.valid) {
      oc = Outcome::Invalid;
    } else if (e.dislodged) {
      oc = Outcome::Dislodged;
    } else {
      switch (e.order.kind) {
        case OrderKind::Move:
          oc = e.move == MoveStatus::Success ? Outcome::Succeeds
                                             : Outcome::Bounces;
          break;
        case OrderKind::SupportHold:
        case OrderKind::SupportMove:
          oc = e.support_cut ? Outcome::Cut : Outcome::Succeeds;
          break;
        case OrderKind::Hold:
          oc = Outcome::Holds;
          break;
        default:
          oc = Outcome::Succeeds;
          break;
      }
    }
    report.results.push_back({e.power, e.order, oc});
  }

  bool any_dislodged = !next.dislodged.empty();
  if (any_dislodged) {
    next.turn.phase = Phase::Retreat;
  } else {
    next = [&] {
      GameState s = std::move(next);
      finish_movement(map, s);
      return s;
    }();
  }
  return {std::move(next), std::move(report)};
}

// After movement + retreats of a season: SC flip in Fall, then season advance.
static void finish_movement(const Map& map, GameState& s) {
  if (s.turn.season == Season::Fall) {
    for (const auto& u : s.units) {
      const Province& p = map.province(u.loc.province);
      if (p.supply_center) s.sc_ownership[u.loc.province] = u.owner;
    }
    s.turn.phase = Phase::Adjustment;
  } else {
    s.turn = {s.turn.year, Season::Fall, Phase::Movement};
  }
  s.dislodged.clear();
}

std::pair<GameState, ResolutionReport> adjudicate_retreats(
    const Map& map, const GameState& state,
    const std::map<Power, OrderSet>& orders) {
  if (state.turn.phase != Phase::Retreat)
    throw PhaseMismatch("adjudicate_retreats: state is not in a retreat phase");

  ResolutionReport report;
  GameState next = state;
  std::map<std::string, std::vector<std::pair<Dislodgement, Order>>> retreats;
  std::set<std::string> handled;

  for (const auto& [power, set] : orders) {
    for (const auto& o : set) {
      auto v = validate_order(map, state, o, power);
      const Dislodgement* d = nullptr;
      for (const auto& dl : state.dislodged)
        if (dl.unit.loc.province == o.at.province && dl.unit.owner == power)
          d = &dl;
      if (!v.ok || !d) {
        report.results.push_back({power, o, Outcome::Invalid});
        continue;
      }
      handled.insert(o.at.province);
      if (o.kind == OrderKind::Disband) {
        report.results.push_back({power, o, Outcome::Succeeds});
      } else {
        retreats[o.dest.province].push_back({*d, o});
      }
    }
  }
  for (auto& [dest, rs] : retreats) {
    if (rs.size() == 1) {
      auto& [d, o] = rs[0];
      Unit u = d.unit;
      u.loc = settle_dest_coast(map, u, o.dest);
      next.units.push_back(u);
      report.results.push_back({d.unit.owner, o, Outcome::Succeeds});
    } else {
      for (auto& [d, o] : rs)  // colliding retreats all disband
        report.results.push_back({d.unit.owner, o, Outcome::Bounces});
    }
  }
  // Unordered dislodged units auto-disband.
  next.dislodged.clear();
  finish_movement(map, next);
  return {std::move(next), std::move(report)};
}

std::pair<GameState, ResolutionReport> adjudicate_adjustments(
    const Map& map, const GameState& state,
    const std::map<Power, OrderSet>& orders) {
  if (state.turn.phase != Phase::Adjustment)
    throw PhaseMismatch(
        "adjudicate_adjustments: state is not in an adjustment phase");

  ResolutionReport report;
  GameState next = state;

  std::map<Power, int> delta;
  for (Power p : kAllPowers)
    delta[p] = supply_center_count(state, p) -
               static_cast<int>(state.units_of(p).size());

  for (const auto& [power, set] : orders) {
    for (const auto& o : set) {
      if (o.kind == OrderKind::Build) {
        auto v = validate_order(map, next, o, power);
        if (!v.ok || delta[power] <= 0) {
          report.results.push_back({power, o, Outcome::Invalid});
          continue;
        }
        next.units.push_back({power, o.unit, o.at});
        --delta[power];
        report.results.push_back({power, o, Outcome::Succeeds});
      } else if (o.kind == OrderKind::Disband) {
        const Unit* u = next.unit_of(power, o.at.province);
        if (!u || delta[power] >= 0) {
          report.results.push_back({power, o, Outcome::Invalid});
          continue;
        }
        next.units.erase(std::remove(next.units.begin(), next.units.end(), *u),
                         next.units.end());
        ++delta[power];
        report.results.push_back({power, o, Outcome::Succeeds});
      } else {
        report.results.push_back({power, o, Outcome::Invalid});
      }
    }
  }

  // Forced disbands: farthest from home, lexicographic tie-break.
  for (Power p : kAllPowers) {
    while (delta[p] < 0) {
      auto mine = next.units_of(p);
      if (mine.empty()) break;
      auto homes = map.home_centers(p);
      auto distance = [&](const Unit& u) {
        // BFS over combined adjacency.
        std::deque<std::pair<std::string, int>> q{{u.loc.province, 0}};
        std::set<std::string> seen{u.loc.province};
        while (!q.empty()) {
          auto [prov, d] = q.front();
          q.pop_front();
          if (std::find(homes.begin(), homes.end(), prov) != homes.end())
            return d;
          const Province& pr = map.province(prov);
          std::set<std::string> nbrs(pr.army_adj.begin(), pr.army_adj.end());
          for (const auto& [c, adj] : pr.fleet_adj)
            for (const auto& l : adj) nbrs.insert(l.province);
          for (const auto& n : nbrs)
            if (!seen.count(n)) {
              seen.insert(n);
              q.push_back({n, d + 1});
            }
        }
        return 1000;
      };
      std::sort(mine.begin(), mine.end(), [&](const Unit& a, const Unit& b) {
        int da = distance(a), db = distance(b);
        if (da != db) return da > db;
        return a.loc.province < b.loc.province;
      });
      Unit victim = mine.front();
      next.units.erase(
          std::remove(next.units.begin(), next.units.end(), victim),
          next.units.end());
      Order o{victim.kind, victim.loc, OrderKind::Disband, {}, {}, {}};
      report.results.push_back({p, o, Outcome::Succeeds});
      ++delta[p];
    }
  }

  next.turn = {state.turn.year + 1, Season::Spring, Phase::Movement};
  next.dislodged.clear();
  return {std::move(next), std::move(report)};
}

TurnId next_turn(const TurnId& t, bool any_dislodged, bool adjustment_needed) {
  TurnId n = t;
  if (t.phase == Phase::Movement && any_dislodged) {
    n.phase = Phase::Retreat;
  } else if (t.season == Season::Fall && adjustment_needed) {
    n.phase = Phase::Adjustment;
  } else if (t.season == Season::Spring) {
    n = {t.year, Season::Fall, Phase::Movement};
  } else {
    n = {t.year + 1, Season::Spring, Phase::Movement};
  }
  return n;
}

}  // namespace dip
