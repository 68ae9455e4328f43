#include <algorithm>
#include <optional>

#include "dip/message.hpp"

namespace dip::msg {

namespace {

using amr::GraphEdge;
using amr::IntentGraph;

struct UnitConstraint {
  std::optional<UnitKind> kind;
  std::optional<Power> country;
  std::optional<std::string> province;  // map code
};

std::optional<std::string> unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return std::nullopt;
}

// Follow :name (n / name :op1 "X") to the constant.
std::optional<std::string> named(const IntentGraph& g, const std::string& var) {
  const GraphEdge* nm = g.first_edge(var, ":name");
  if (!nm || nm->target_is_constant) return std::nullopt;
  const GraphEdge* op = g.first_edge(nm->target, ":op1");
  if (!op || !op->target_is_constant) return std::nullopt;
  return unquote(op->target);
}

std::optional<UnitConstraint> unit_constraint(const Map& map,
                                              const IntentGraph& g,
                                              const std::string& var) {
  const std::string& c = *g.concept_of(var);
  UnitConstraint u;
  if (c == "fleet")
    u.kind = UnitKind::Fleet;
  else if (c == "army")
    u.kind = UnitKind::Army;
  else if (c != "unit")
    return std::nullopt;
  const GraphEdge* mod = g.first_edge(var, ":mod");
  if (mod && !mod->target_is_constant &&
      *g.concept_of(mod->target) == "country") {
    auto name = named(g, mod->target);
    if (!name) return std::nullopt;
    auto p = power_from_name(*name);
    if (!p) return std::nullopt;
    u.country = p;
  }
  const GraphEdge* loc = g.first_edge(var, ":location");
  if (loc && !loc->target_is_constant) {
    auto name = named(g, loc->target);
    if (!name) return std::nullopt;
    auto code = map.resolve_name(*name);
    if (!code) return std::nullopt;
    u.province = code;
  }
  return u;
}

std::optional<std::string> destination(const Map& map, const IntentGraph& g,
                                       const std::string& var) {
  const GraphEdge* d = g.first_edge(var, ":ARG2");
  if (!d) d = g.first_edge(var, ":destination");
  if (!d || d->target_is_constant) return std::nullopt;
  auto name = named(g, d->target);
  if (!name) return std::nullopt;
  return map.resolve_name(*name);
}

std::vector<Unit> candidates(const GameState& state, const UnitConstraint& u) {
  std::vector<Unit> out;
  for (const Unit& unit : state.units) {
    if (u.kind && unit.kind != *u.kind) continue;
    if (u.country && unit.owner != *u.country) continue;
    if (u.province && unit.loc.province != *u.province) continue;
    out.push_back(unit);
  }
  return out;
}

// Throws NoActorUnit when the act names a power and that power has no unit
// matching the structural constraints at all.
std::vector<Unit> acting_candidates(const GameState& state,
                                    const UnitConstraint& u) {
  auto out = candidates(state, u);
  if (out.empty() && u.country)
    throw NoActorUnit("no unit of " + power_name(*u.country) +
                      " satisfies the act's constraints");
  return out;
}

void keep_unique_sorted(std::vector<Order>& orders) {
  std::sort(orders.begin(), orders.end());
  orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
}

}  // namespace

std::vector<Order> ground(const Map& map, const CommunicativeAct& act,
                          const MessageContext& ctx) {
  const IntentGraph& g = act.action_graph;
  std::vector<Order> out;
  if (g.empty()) return out;
  const std::string& root_concept = *g.concept_of(g.root);

  auto legal_matching = [&](const Unit& u, auto&& pred) {
    for (const Order& o : legal_moves(map, ctx.state, u))
      if (pred(o)) out.push_back(o);
  };

  if (root_concept == "move-01") {
    const GraphEdge* ue = g.first_edge(g.root, ":ARG1");
    if (!ue || ue->target_is_constant) return out;
    auto uc = unit_constraint(map, g, ue->target);
    auto dest = destination(map, g, g.root);
    if (!uc || !dest) return out;
    for (const Unit& u : acting_candidates(ctx.state, *uc))
      legal_matching(u, [&](const Order& o) {
        return o.kind == OrderKind::Move && o.dest.province == *dest;
      });
  } else if (root_concept == "hold-03") {
    const GraphEdge* ue = g.first_edge(g.root, ":ARG1");
    if (!ue || ue->target_is_constant) return out;
    auto uc = unit_constraint(map, g, ue->target);
    if (!uc) return out;
    for (const Unit& u : acting_candidates(ctx.state, *uc))
      out.push_back({u.kind, u.loc, OrderKind::Hold, {}, {}, {}});
  } else if (root_concept == "support-01") {
    const GraphEdge* se = g.first_edge(g.root, ":ARG0");
    const GraphEdge* ae = g.first_edge(g.root, ":ARG1");
    if (!se || se->target_is_constant || !ae || ae->target_is_constant)
      return out;
    auto sc = unit_constraint(map, g, se->target);
    if (!sc) return out;
    const std::string& sub = *g.concept_of(ae->target);
    const GraphEdge* te = g.first_edge(ae->target, ":ARG1");
    if (!te || te->target_is_constant) return out;
    auto tc = unit_constraint(map, g, te->target);
    if (!tc) return out;
    auto targets = candidates(ctx.state, *tc);
    if (sub == "move-01") {
      auto dest = destination(map, g, ae->target);
      if (!dest) return out;
      for (const Unit& s : acting_candidates(ctx.state, *sc))
        for (const Unit& t : targets)
          legal_matching(s, [&](const Order& o) {
            return o.kind == OrderKind::SupportMove &&
                   o.target_at.province == t.loc.province &&
                   o.dest.province == *dest;
          });
    } else if (sub == "hold-03") {
      for (const Unit& s : acting_candidates(ctx.state, *sc))
        for (const Unit& t : targets)
          legal_matching(s, [&](const Order& o) {
            return o.kind == OrderKind::SupportHold &&
                   o.target_at.province == t.loc.province;
          });
    }
  } else if (root_concept == "transport-01") {
    const GraphEdge* se = g.first_edge(g.root, ":ARG0");
    const GraphEdge* ae = g.first_edge(g.root, ":ARG1");
    if (!se || se->target_is_constant || !ae || ae->target_is_constant)
      return out;
    auto sc = unit_constraint(map, g, se->target);
    if (!sc || *g.concept_of(ae->target) != "move-01") return out;
    const GraphEdge* te = g.first_edge(ae->target, ":ARG1");
    if (!te || te->target_is_constant) return out;
    auto tc = unit_constraint(map, g, te->target);
    auto dest = destination(map, g, ae->target);
    if (!tc || !dest) return out;
    auto cargos = candidates(ctx.state, *tc);
    for (const Unit& s : acting_candidates(ctx.state, *sc))
      for (const Unit& t : cargos)
        legal_matching(s, [&](const Order& o) {
          return o.kind == OrderKind::Convoy &&
                 o.target_at.province == t.loc.province &&
                 o.dest.province == *dest;
        });
  }
  keep_unique_sorted(out);
  return out;
}

}  // namespace dip::msg
