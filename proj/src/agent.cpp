#include <algorithm>
#include <set>

#include "dip/sim.hpp"

namespace dip::sim {

namespace {

// One-ply heuristic value of an order; no search by design — the harness
// exercises communication plumbing, not playing strength.
double order_value(const Map& map, const GameState& state, Power power,
                   const Order& o, Policy policy,
                   const std::set<std::string>& claimed) {
  switch (o.kind) {
    case OrderKind::Move: {
      if (claimed.count(o.dest.province)) return -100.0;
      double v = 1.0;
      const Province& dest = map.province(o.dest.province);
      const Unit* occ = state.unit_at(o.dest.province);
      if (dest.supply_center) {
        auto owner = state.sc_ownership.find(o.dest.province);
        bool mine = owner != state.sc_ownership.end() &&
                    owner->second == power;
        v = mine ? 2.0 : (occ ? 4.0 : 8.0);
      } else {
        v = occ ? 0.5 : 3.0;
      }
      if (occ && occ->owner == power) v = 0.2;  // don't shove our own units
      if (policy == Policy::Defensive) v *= 0.5;
      return v;
    }
    case OrderKind::Hold:
      return policy == Policy::Defensive ? 4.0 : 2.0;
    case OrderKind::SupportHold: {
      const Unit* t = state.unit_at(o.target_at.province);
      if (!t || t->owner != power) return 0.1;
      return policy == Policy::Defensive ? 5.0 : 1.5;
    }
    case OrderKind::SupportMove:
    case OrderKind::Convoy:
      return 1.0;
    default:
      return 0.0;
  }
}

}  // namespace

std::vector<Order> plan_orders(const Map& map, const GameState& state,
                               Power power, Policy policy,
                               std::mt19937_64& rng) {
  std::vector<Order> plan;
  std::set<std::string> claimed;  // destinations already taken by our units
  std::uniform_real_distribution<double> noise(0.0, 1.0);
  for (const Unit& u : state.units) {
    if (u.owner != power) continue;
    auto options = legal_moves(map, state, u);
    const Order* best = nullptr;
    double best_v = -1e9;
    for (const Order& o : options) {
      double v = order_value(map, state, power, o, policy, claimed) +
                 noise(rng);
      if (v > best_v) {
        best_v = v;
        best = &o;
      }
    }
    if (!best) continue;
    plan.push_back(*best);
    if (best->kind == OrderKind::Move) claimed.insert(best->dest.province);
  }
  return plan;
}

}  // namespace dip::sim
