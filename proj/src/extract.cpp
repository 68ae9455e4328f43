#include <optional>
#include <regex>

#include "dip/message.hpp"

namespace dip::msg {

namespace {

using amr::IntentGraph;

const char* kCountry =
    "(Austria|England|France|Germany|Italy|Russia|Turkey)";
// One or more capitalized words ("Sweden", "St Petersburg", "North Sea").
// Capitalized word run; "of" and hyphenation are allowed inside
// ("Gulf of Bothnia", "Mid-Atlantic Ocean").
const char* kPlace =
    "((?:[A-Z][A-Za-z]+(?:-[A-Za-z]+)?)"
    "(?: (?:of|[A-Z][A-Za-z]+(?:-[A-Za-z]+)?))*)";

std::optional<UnitKind> unit_kind_word(const std::string& w) {
  if (w == "fleet") return UnitKind::Fleet;
  if (w == "army") return UnitKind::Army;
  return std::nullopt;
}

struct UnitSpec {
  std::optional<UnitKind> kind;
  std::optional<Power> country;
  std::optional<std::string> province;  // full name as written
};

// Attach a unit node under `parent` via `role`.
std::string add_unit(IntentGraph& g, const std::string& parent,
                     const std::string& role, const UnitSpec& u) {
  std::string label = "unit";
  if (u.kind == UnitKind::Fleet) label = "fleet";
  if (u.kind == UnitKind::Army) label = "army";
  std::string uv = g.add_node(label, "u");
  g.edges.push_back({parent, role, uv, false});
  if (u.country) {
    std::string cv = g.add_node("country", "c");
    g.edges.push_back({uv, ":mod", cv, false});
    std::string nv = g.add_node("name", "n");
    g.edges.push_back({cv, ":name", nv, false});
    g.edges.push_back({nv, ":op1", "\"" + power_name(*u.country) + "\"", true});
  }
  if (u.province) {
    std::string pv = g.add_node("province", "p");
    g.edges.push_back({uv, ":location", pv, false});
    std::string nv = g.add_node("name", "n");
    g.edges.push_back({pv, ":name", nv, false});
    g.edges.push_back({nv, ":op1", "\"" + *u.province + "\"", true});
  }
  return uv;
}

void add_destination(IntentGraph& g, const std::string& parent,
                     const std::string& province) {
  std::string pv = g.add_node("province", "p");
  g.edges.push_back({parent, ":ARG2", pv, false});
  std::string nv = g.add_node("name", "n");
  g.edges.push_back({pv, ":name", nv, false});
  g.edges.push_back({nv, ":op1", "\"" + province + "\"", true});
}

IntentGraph move_graph(const UnitSpec& u, const std::string& dest) {
  IntentGraph g;
  std::string m = g.add_node("move-01", "m");
  add_unit(g, m, ":ARG1", u);
  add_destination(g, m, dest);
  return g;
}

IntentGraph hold_graph(const UnitSpec& u) {
  IntentGraph g;
  std::string h = g.add_node("hold-03", "h");
  add_unit(g, h, ":ARG1", u);
  return g;
}

IntentGraph support_graph(const UnitSpec& supporter, const UnitSpec& target,
                          const std::optional<std::string>& dest) {
  IntentGraph g;
  std::string s = g.add_node("support-01", "s");
  add_unit(g, s, ":ARG0", supporter);
  if (dest) {
    std::string m = g.add_node("move-01", "m");
    g.edges.push_back({s, ":ARG1", m, false});
    add_unit(g, m, ":ARG1", target);
    add_destination(g, m, dest.value());
  } else {
    std::string h = g.add_node("hold-03", "h");
    g.edges.push_back({s, ":ARG1", h, false});
    add_unit(g, h, ":ARG1", target);
  }
  return g;
}

IntentGraph convoy_graph(const UnitSpec& convoyer, const UnitSpec& cargo,
                         const std::string& dest) {
  IntentGraph g;
  std::string t = g.add_node("transport-01", "t");
  add_unit(g, t, ":ARG0", convoyer);
  std::string m = g.add_node("move-01", "m");
  g.edges.push_back({t, ":ARG1", m, false});
  add_unit(g, m, ":ARG1", cargo);
  add_destination(g, m, dest);
  return g;
}

void mark_conditional(IntentGraph& g) {
  std::string cv = g.add_node("possible-01", "cond");
  g.edges.push_back({g.root, ":condition", cv, false});
}

Power country(const std::string& name) {
  return *power_from_name(name);
}

// A place capture is only accepted if the map can resolve it.
std::optional<std::string> place(const Map& map, const std::string& name) {
  if (power_from_name(name)) return std::nullopt;
  if (!map.resolve_name(name)) return std::nullopt;
  return name;
}

std::vector<std::string> split_sentences(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '.' || c == '!' || c == '?' || c == '\n') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  for (auto& s : out) {
    size_t b = s.find_first_not_of(" \t\r");
    size_t e = s.find_last_not_of(" \t\r");
    s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
  }
  return out;
}

const std::regex kInterjection(
    R"(^(Sure|Yes|Yeah|OK|Okay|Absolutely|Of course|Alright|Deal|Agreed|Nice)\b[,!]? ?)");

ActKind kind_for(Power actor, const MessageContext& ctx) {
  if (actor == ctx.sender) return ActKind::Commitment;
  if (actor == ctx.recipient) return ActKind::Proposal;
  return ActKind::ThirdPartyReport;
}

}  // namespace

bool classify_attempt(const CommunicativeAct& act) {
  return act.kind == ActKind::Proposal;
}

amr::IntentGraph order_graph(const Map& map, const GameState& state,
                             Power owner, const Order& o) {
  auto full = [&](const Location& l) { return map.full_name(l.province); };
  auto target_owner = [&]() -> std::optional<Power> {
    const Unit* t = state.unit_at(o.target_at.province);
    return t ? std::optional<Power>(t->owner) : std::nullopt;
  };
  switch (o.kind) {
    case OrderKind::Move:
    case OrderKind::Retreat:
      return move_graph({o.unit, owner, full(o.at)}, full(o.dest));
    case OrderKind::Hold:
      return hold_graph({o.unit, owner, full(o.at)});
    case OrderKind::SupportMove:
      return support_graph({o.unit, owner, full(o.at)},
                           {o.target_unit, target_owner(), full(o.target_at)},
                           full(o.dest));
    case OrderKind::SupportHold:
      return support_graph({o.unit, owner, full(o.at)},
                           {o.target_unit, target_owner(), full(o.target_at)},
                           std::nullopt);
    case OrderKind::Convoy:
      return convoy_graph({UnitKind::Fleet, owner, full(o.at)},
                          {UnitKind::Army, target_owner(), full(o.target_at)},
                          full(o.dest));
    default:
      return {};
  }
}

std::string render_act_text(const Map& map, const GameState& state,
                            const CommunicativeAct& act, Power sender,
                            Power recipient) {
  if (act.grounded.empty()) return "";
  const Order& o = act.grounded.front();
  auto full = [&](const Location& l) { return map.full_name(l.province); };
  auto kindword = [](UnitKind k) {
    return std::string(k == UnitKind::Fleet ? "fleet" : "army");
  };
  auto poss = [&](Power p) {
    if (p == sender) return std::string("my");
    if (p == recipient) return std::string("your");
    return power_name(p) + "'s";
  };
  Power towner = act.actor;
  if (const Unit* t = state.unit_at(o.target_at.province)) towner = t->owner;
  bool proposal = act.kind == ActKind::Proposal;
  switch (o.kind) {
    case OrderKind::Move:
      if (proposal)
        return "You should move your " + kindword(o.unit) + " in " +
               full(o.at) + " to " + full(o.dest) + ".";
      return "I will move my " + kindword(o.unit) + " in " + full(o.at) +
             " to " + full(o.dest) + ".";
    case OrderKind::Hold:
      return "I will hold my " + kindword(o.unit) + " in " + full(o.at) + ".";
    case OrderKind::SupportMove:
      return (proposal ? "Your " : "My ") + kindword(o.unit) + " in " +
             full(o.at) + (proposal ? " should support " : " will support ") +
             poss(towner) + " " + kindword(o.target_unit) + " in " +
             full(o.target_at) + " to " + full(o.dest) + ".";
    case OrderKind::SupportHold:
      return (proposal ? "Your " : "My ") + kindword(o.unit) + " in " +
             full(o.at) + (proposal ? " should support " : " will support ") +
             poss(towner) + " " + kindword(o.target_unit) + " in " +
             full(o.target_at) + " to hold.";
    case OrderKind::Convoy:
      return (proposal ? "Your fleet in " : "My fleet in ") + full(o.at) +
             (proposal ? " should convoy " : " will convoy ") + poss(towner) +
             " army in " + full(o.target_at) + " to " + full(o.dest) + ".";
    default:
      return "";
  }
}

CommunicativeAct act_from_graph(const Map& map, const IntentGraph& g,
                                const MessageContext& ctx) {
  CommunicativeAct act;
  act.action_graph = g;
  act.actor = ctx.sender;
  if (g.empty()) return act;
  const std::string& root_concept = *g.concept_of(g.root);
  bool is_action = root_concept == "move-01" || root_concept == "hold-03" ||
                   root_concept == "support-01" ||
                   root_concept == "transport-01";
  if (!is_action) return act;
  std::string unit_role =
      (root_concept == "support-01" || root_concept == "transport-01")
          ? ":ARG0"
          : ":ARG1";
  const amr::GraphEdge* ue = g.first_edge(g.root, unit_role);
  if (ue && !ue->target_is_constant) {
    const amr::GraphEdge* mod = g.first_edge(ue->target, ":mod");
    if (mod && !mod->target_is_constant) {
      const amr::GraphEdge* nm = g.first_edge(mod->target, ":name");
      if (nm && !nm->target_is_constant) {
        const amr::GraphEdge* op = g.first_edge(nm->target, ":op1");
        if (op && op->target_is_constant && op->target.size() >= 2) {
          auto p = power_from_name(
              op->target.substr(1, op->target.size() - 2));
          if (p) act.actor = *p;
        }
      }
    }
  }
  act.kind = kind_for(act.actor, ctx);
  act.conditional = g.first_edge(g.root, ":condition") != nullptr;
  (void)map;
  return act;
}

std::vector<CommunicativeAct> extract_acts(const Map& map,
                                           const std::string& raw,
                                           const MessageContext& ctx) {
  std::string text = preprocess(map, raw, ctx);
  std::vector<CommunicativeAct> acts;
  // Destination of the most recent act in this message, for "support you
  // there" anaphora; seeded from the open proposal if one exists.
  std::optional<std::string> last_dest;
  std::optional<CommunicativeAct> open = ctx.open_proposal;
  if (open) {
    const amr::GraphEdge* d = open->action_graph.first_edge(
        open->action_graph.root, ":ARG2");
    if (d && !d->target_is_constant) {
      const amr::GraphEdge* nm =
          open->action_graph.first_edge(d->target, ":name");
      if (nm) {
        const amr::GraphEdge* op =
            open->action_graph.first_edge(nm->target, ":op1");
        if (op) last_dest = op->target.substr(1, op->target.size() - 2);
      }
    }
  }

  for (const std::string& full_sentence : split_sentences(text)) {
    std::smatch m;
    std::string sentence = full_sentence;
    bool interjected = std::regex_search(sentence, m, kInterjection);
    if (interjected) sentence = m.suffix().str();

    // Clause-level conditionals ("... if Serbia gets dislodged"); the
    // steal-pattern below consumes its own "if" first.
    bool conditional = false;
    std::string main_clause = sentence;
    static const std::regex kSteal(
        std::string(kCountry) + R"( can steal )" + kPlace + R"( from )" +
        kCountry + R"( if )" + kCountry + R"( (?:are|is) in )" + kPlace +
        R"( next turn)");
    if (std::regex_search(sentence, m, kSteal)) {
      auto dest = place(map, m[5]);
      if (dest) {
        CommunicativeAct act;
        act.actor = country(m[1]);
        act.kind = kind_for(act.actor, ctx);
        act.action_graph = move_graph({std::nullopt, act.actor, {}}, *dest);
        last_dest = dest;
        acts.push_back(std::move(act));
        continue;
      }
    }
    size_t ifpos = sentence.find(" if ");
    if (ifpos != std::string::npos) {
      conditional = true;
      main_clause = sentence.substr(0, ifpos);
    }

    auto finish = [&](CommunicativeAct act) {
      if (conditional) {
        mark_conditional(act.action_graph);
        act.conditional = true;
      }
      acts.push_back(std::move(act));
    };

    static const std::regex kFullMove(
        std::string(kCountry) + R"( (will|should)(?: probably)? move )" +
        kCountry + R"('s (fleet|army) in )" + kPlace + R"( to )" + kPlace);
    static const std::regex kSupportUnits(
        std::string(kCountry) + R"('s (fleet|army) in )" + kPlace +
        R"( (will|should) support )" + kCountry + R"('s (fleet|army) in )" +
        kPlace + R"((?: to )?(.*))");
    static const std::regex kConvoy(
        std::string(kCountry) + R"('s fleet in )" + kPlace +
        R"( (will|should) (?:convoy|transport) )" + kCountry +
        R"('s army in )" + kPlace + R"( to )" + kPlace);
    static const std::regex kBareMove(
        std::string(kCountry) + R"( should(?: probably)? move )" + kPlace +
        R"( (?:to|->) )" + kPlace);
    static const std::regex kMovingXtoY(
        std::string(kCountry) + R"( (?:am|is|are) moving )" + kPlace +
        R"( to )" + kPlace);
    static const std::regex kMovingTo(
        std::string(kCountry) +
        R"( (?:am|is|are) (?:going to try to move|moving|going) to )" +
        kPlace);
    static const std::regex kWillHold(
        std::string(kCountry) + R"( will hold )" + kCountry +
        R"('s (fleet|army) in )" + kPlace);
    static const std::regex kHolding(
        std::string(kCountry) + R"( (?:am|is|are) holding )" + kPlace);
    static const std::regex kBumping(R"((?:just )?bumping )" +
                                     std::string(kPlace) + R"( from )" +
                                     kPlace);
    static const std::regex kSupportThere(
        std::string(kCountry) + R"( will support )" + kCountry + R"( there)");
    static const std::regex kRetreatInto(
        std::string(kCountry) + R"( retreats? from )" + kPlace +
        R"( into )" + kPlace);
    static const std::regex kDoThat(std::string(kCountry) +
                                    R"( will do that)");

    if (std::regex_search(main_clause, m, kFullMove)) {
      auto from = place(map, m[5]);
      auto to = place(map, m[6]);
      auto kind = unit_kind_word(m[4]);
      if (from && to && kind) {
        CommunicativeAct act;
        act.actor = country(m[3]);
        act.kind = m[2] == "should" && act.actor == ctx.recipient
                       ? ActKind::Proposal
                       : kind_for(act.actor, ctx);
        act.action_graph = move_graph({kind, act.actor, from}, *to);
        last_dest = to;
        finish(std::move(act));
        continue;
      }
    }
    if (std::regex_search(main_clause, m, kConvoy)) {
      auto at = place(map, m[2]);
      auto cargo_at = place(map, m[5]);
      auto to = place(map, m[6]);
      if (at && cargo_at && to) {
        CommunicativeAct act;
        act.actor = country(m[1]);
        act.kind = kind_for(act.actor, ctx);
        act.action_graph =
            convoy_graph({UnitKind::Fleet, act.actor, at},
                         {UnitKind::Army, country(m[4]), cargo_at}, *to);
        last_dest = to;
        finish(std::move(act));
        continue;
      }
    }
    if (std::regex_search(main_clause, m, kSupportUnits)) {
      auto at = place(map, m[3]);
      auto target_at = place(map, m[7]);
      auto skind = unit_kind_word(m[2]);
      auto tkind = unit_kind_word(m[6]);
      std::string tail = m[8];
      if (at && target_at && skind && tkind) {
        std::optional<std::string> dest;
        bool holds = tail.rfind("hold", 0) == 0;
        if (!holds) dest = place(map, tail);
        if (holds || dest) {
          CommunicativeAct act;
          act.actor = country(m[1]);
          act.kind = kind_for(act.actor, ctx);
          act.action_graph =
              support_graph({skind, act.actor, at},
                            {tkind, country(m[5]), target_at}, dest);
          if (dest) last_dest = dest;
          finish(std::move(act));
          continue;
        }
      }
    }
    if (std::regex_search(main_clause, m, kSupportThere)) {
      if (last_dest) {
        CommunicativeAct act;
        act.actor = country(m[1]);
        act.kind = kind_for(act.actor, ctx);
        act.action_graph =
            support_graph({std::nullopt, act.actor, {}},
                          {std::nullopt, country(m[2]), {}}, last_dest);
        finish(std::move(act));
      }
      continue;
    }
    if (std::regex_search(main_clause, m, kBareMove)) {
      auto from = place(map, m[2]);
      auto to = place(map, m[3]);
      if (from && to) {
        CommunicativeAct act;
        act.actor = country(m[1]);
        act.kind = kind_for(act.actor, ctx);
        act.action_graph = move_graph({std::nullopt, act.actor, from}, *to);
        last_dest = to;
        finish(std::move(act));
        continue;
      }
    }
    if (std::regex_search(main_clause, m, kMovingXtoY)) {
      auto from = place(map, m[2]);
      auto to = place(map, m[3]);
      if (from && to) {
        CommunicativeAct act;
        act.actor = country(m[1]);
        act.kind = kind_for(act.actor, ctx);
        act.action_graph = move_graph({std::nullopt, act.actor, from}, *to);
        last_dest = to;
        finish(std::move(act));
        continue;
      }
    }
    if (std::regex_search(main_clause, m, kMovingTo)) {
      auto to = place(map, m[2]);
      if (to) {
        CommunicativeAct act;
        act.actor = country(m[1]);
        act.kind = kind_for(act.actor, ctx);
        act.action_graph = move_graph({std::nullopt, act.actor, {}}, *to);
        last_dest = to;
        finish(std::move(act));
        continue;
      }
    }
    if (std::regex_search(main_clause, m, kWillHold)) {
      auto at = place(map, m[4]);
      auto kind = unit_kind_word(m[3]);
      if (at && kind) {
        CommunicativeAct act;
        act.actor = country(m[2]);
        act.kind = kind_for(act.actor, ctx);
        act.action_graph = hold_graph({kind, act.actor, at});
        finish(std::move(act));
        continue;
      }
    }
    if (std::regex_search(main_clause, m, kHolding)) {
      auto at = place(map, m[2]);
      if (at) {
        CommunicativeAct act;
        act.actor = country(m[1]);
        act.kind = kind_for(act.actor, ctx);
        act.action_graph = hold_graph({std::nullopt, act.actor, at});
        finish(std::move(act));
        continue;
      }
    }
    if (std::regex_search(main_clause, m, kBumping)) {
      auto to = place(map, m[1]);
      auto from = place(map, m[2]);
      if (from && to) {
        CommunicativeAct act;
        act.actor = ctx.sender;
        act.kind = ActKind::Commitment;
        act.action_graph = move_graph({std::nullopt, std::nullopt, from}, *to);
        last_dest = to;
        finish(std::move(act));
        continue;
      }
    }
    if (std::regex_search(main_clause, m, kRetreatInto)) {
      auto from = place(map, m[2]);
      auto to = place(map, m[3]);
      if (from && to) {
        CommunicativeAct act;
        act.actor = country(m[1]);
        act.kind = kind_for(act.actor, ctx);
        act.action_graph = move_graph({std::nullopt, act.actor, from}, *to);
        last_dest = to;
        finish(std::move(act));
        continue;
      }
    }
    if (std::regex_search(main_clause, m, kDoThat) && open) {
      // "I will do that …": accept the open proposal.
      CommunicativeAct act;
      act.kind = ActKind::Agreement;
      act.actor = ctx.sender;
      act.action_graph = open->action_graph;
      finish(std::move(act));
      continue;
    }
    if (interjected && acts.empty() && sentence.size() <= 24 && open) {
      // Short-answer agreement ("Sure", "Yes, I agree") binding to the most
      // recent proposal from the interlocutor this turn.
      CommunicativeAct act;
      act.kind = ActKind::Agreement;
      act.actor = ctx.sender;
      act.action_graph = open->action_graph;
      acts.push_back(std::move(act));
      continue;
    }
  }
  return acts;
}

}  // namespace dip::msg
