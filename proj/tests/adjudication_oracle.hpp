// Test-only adjudication oracle, independent of dip::adjudicate.
//
// Enumerates every success/fail assignment over the submitted move orders and
// keeps the assignments consistent with rulebook strength comparison (support
// cutting, head-to-head, no self-dislodgement, convoy disruption). Among the
// consistent assignments the one with the most successful moves is the
// rulebook outcome (this is what lets rotation cycles move). Intractable past
// a dozen moves; fine for hand-built cases.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dip/adjudicator.hpp"
#include "dip/state.hpp"

namespace oracle {

struct Ordered {
  dip::Power power;
  dip::Order order;
};

struct Verdict {
  std::set<std::string> succeeded_moves;  // actor provinces of winning moves
  std::set<std::string> dislodged;        // provinces whose occupant was dislodged
};

inline std::vector<Ordered> flatten(
    const std::map<dip::Power, dip::OrderSet>& orders) {
  std::vector<Ordered> out;
  for (const auto& [p, set] : orders)
    for (const auto& o : set) out.push_back({p, o});
  return out;
}

inline std::optional<Verdict> adjudicate(
    const dip::Map& map, const dip::GameState& state,
    const std::map<dip::Power, dip::OrderSet>& orders) {
  using namespace dip;
  auto all = flatten(orders);

  // Only consider orders for units that exist and validate; others hold.
  std::vector<Ordered> active;
  for (const auto& od : all) {
    const Unit* u = state.unit_of(od.power, od.order.at.province);
    if (u && validate_order(map, state, od.order, od.power).ok)
      active.push_back(od);
  }
  auto owner_at = [&](const std::string& prov) -> const Unit* {
    return state.unit_at(prov);
  };
  auto order_of = [&](const std::string& prov) -> const Ordered* {
    for (const auto& od : active)
      if (od.order.at.province == prov) return &od;
    return nullptr;
  };

  std::vector<const Ordered*> moves;
  for (const auto& od : active)
    if (od.order.kind == OrderKind::Move) moves.push_back(&od);
  const size_t n = moves.size();

  auto direct = [&](const Ordered& m) {
    const Unit* u = owner_at(m.order.at.province);
    return map.adjacent(u->kind, u->loc, m.order.dest) ||
           map.adjacent_any_coast(u->kind, u->loc.province,
                                  m.order.dest.province);
  };

  std::optional<Verdict> best;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    auto succ = [&](const Ordered* m) {
      for (size_t i = 0; i < n; ++i)
        if (moves[i] == m) return (mask >> i & 1u) != 0;
      return false;
    };
    // Dislodged: stays and a successful move enters.
    auto stays = [&](const std::string& prov) {
      const Ordered* od = order_of(prov);
      if (od && od->order.kind == OrderKind::Move && succ(od)) return false;
      return owner_at(prov) != nullptr;
    };
    std::set<std::string> dislodged;
    for (size_t i = 0; i < n; ++i) {
      if (!(mask >> i & 1u)) continue;
      const std::string& dest = moves[i]->order.dest.province;
      if (stays(dest)) dislodged.insert(dest);
    }
    // Convoy viability under this assignment.
    auto convoy_ok = [&](const Ordered& m) {
      if (direct(m)) return true;
      std::set<std::string> seas;
      for (const auto& od : active) {
        if (od.order.kind != OrderKind::Convoy) continue;
        if (od.order.target_at.province != m.order.at.province) continue;
        if (od.order.dest.province != m.order.dest.province) continue;
        if (dislodged.count(od.order.at.province)) continue;
        seas.insert(od.order.at.province);
      }
      if (seas.empty()) return false;
      // BFS over those seas.
      std::vector<std::string> q;
      std::set<std::string> seen;
      for (const auto& s : seas)
        if (map.adjacent_any_coast(UnitKind::Fleet, s, m.order.at.province)) {
          q.push_back(s);
          seen.insert(s);
        }
      while (!q.empty()) {
        std::string s = q.back();
        q.pop_back();
        if (map.adjacent_any_coast(UnitKind::Fleet, s, m.order.dest.province))
          return true;
        for (const auto& nb : map.neighbors(UnitKind::Fleet, {s, ""}))
          if (seas.count(nb.province) && !seen.count(nb.province)) {
            seen.insert(nb.province);
            q.push_back(nb.province);
          }
      }
      return false;
    };
    // Support cut under this assignment.
    auto support_cut = [&](const Ordered& s) {
      if (dislodged.count(s.order.at.province)) return true;
      const std::string directed =
          s.order.kind == OrderKind::SupportMove ? s.order.dest.province
                                                 : s.order.target_at.province;
      for (const auto& a : active) {
        if (a.order.kind != OrderKind::Move) continue;
        if (a.order.dest.province != s.order.at.province) continue;
        if (a.power == s.power) continue;
        if (a.order.at.province == directed) continue;
        if (!direct(a) && !convoy_ok(a)) continue;
        return true;
      }
      return false;
    };
    auto strength = [&](const Ordered& m, std::optional<Power> excl) {
      int v = 1;
      for (const auto& s : active) {
        if (s.order.kind != OrderKind::SupportMove || support_cut(s)) continue;
        if (s.order.target_at.province != m.order.at.province) continue;
        if (s.order.dest.province != m.order.dest.province) continue;
        if (excl && s.power == *excl) continue;
        ++v;
      }
      return v;
    };
    auto hold_strength = [&](const std::string& prov) {
      int v = 1;
      for (const auto& s : active) {
        if (s.order.kind != OrderKind::SupportHold || support_cut(s)) continue;
        if (s.order.target_at.province != prov) continue;
        ++v;
      }
      return v;
    };

    bool consistent = true;
    for (size_t i = 0; i < n && consistent; ++i) {
      const Ordered& m = *moves[i];
      bool s_i = (mask >> i & 1u) != 0;
      bool should = true;
      if (!direct(m) && !convoy_ok(m)) {
        should = false;
      } else {
        int my = strength(m, std::nullopt);
        for (size_t j = 0; j < n; ++j) {
          if (j == i) continue;
          const Ordered& r = *moves[j];
          if (r.order.dest.province != m.order.dest.province) continue;
          if (!direct(r) && !convoy_ok(r)) continue;
          if (strength(r, std::nullopt) >= my) should = false;
        }
        const Unit* def = owner_at(m.order.dest.province);
        if (should && def) {
          const Ordered* dor = order_of(m.order.dest.province);
          bool def_moves = dor && dor->order.kind == OrderKind::Move;
          bool h2h = def_moves &&
                     dor->order.dest.province == m.order.at.province &&
                     direct(m) && direct(*dor);
          if (h2h) {
            if (def->owner == m.power ||
                strength(m, def->owner) <= strength(*dor, m.power))
              should = false;
          } else if (def_moves && succ(dor)) {
            // vacated
          } else {
            int hold = def_moves ? 1 : hold_strength(m.order.dest.province);
            if (def->owner == m.power || strength(m, def->owner) <= hold)
              should = false;
          }
        }
      }
      if (should != s_i) consistent = false;
    }
    if (!consistent) continue;
    Verdict v;
    for (size_t i = 0; i < n; ++i)
      if (mask >> i & 1u) v.succeeded_moves.insert(moves[i]->order.at.province);
    v.dislodged = dislodged;
    if (!best || v.succeeded_moves.size() > best->succeeded_moves.size())
      best = v;
  }
  return best;
}

}  // namespace oracle
