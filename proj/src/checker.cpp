#include "dip/graph.hpp"

namespace dip::amr {

const DiplomacyVocabulary& DiplomacyVocabulary::standard() {
  static const DiplomacyVocabulary v = [] {
    DiplomacyVocabulary d;
    d.action_concepts = {
        "agree-01",   "ally-01",     "attack-01",  "betray-01",
        "build-01",   "defend-01",   "demilitarize",
        "expect-01",  "fear-01",     "gain-02",    "have-03",
        "hold-03",    "lie-08",      "lose-02",    "move-01",
        "possible-01", "prevent-01", "propose-01", "support-01",
        "tell-01",    "threaten-01", "transport-01", "warn-01",
    };
    d.entity_concepts = {
        "unit", "army", "fleet", "country", "province", "sea", "name",
        "supply-center", "and", "or", "season", "year",
    };
    d.roles = {
        ":ARG0", ":ARG1",     ":ARG2",    ":ARG3",      ":ARG4",
        ":mod",  ":location", ":source",  ":destination", ":purpose",
        ":condition", ":time", ":polarity", ":op1",     ":op2",
        ":op3",  ":op4",      ":op5",     ":name",      ":poss",
        ":manner",
    };
    d.daide_equivalents = {
        {"move-01", "MTO"},     {"hold-03", "HLD"},  {"support-01", "SUP"},
        {"transport-01", "CVY"}, {"build-01", "BLD"}, {"ally-01", "ALY"},
        {"propose-01", "PRP"},  {"agree-01", "YES"}, {"demilitarize", "DMZ"},
        {"attack-01", "MTO"},
    };
    return d;
  }();
  return v;
}

bool DiplomacyVocabulary::known_concept(const std::string& c) const {
  return action_concepts.count(c) || entity_concepts.count(c);
}

namespace {

bool is_unit_concept(const std::string& c) {
  return c == "unit" || c == "army" || c == "fleet";
}

// Variables reachable as a unit participant of some action node.
void check_unit_node(const IntentGraph& g, const std::string& var,
                     std::vector<Diagnostic>& out) {
  const std::string& c = *g.concept_of(var);
  if (c == "unit") {
    // Generic "unit" fixes the kind via context, so only location and
    // nationality can go missing on the node itself.
  }
  if (!g.first_edge(var, ":location"))
    out.push_back({DiagnosticKind::Underspecified,
                   "unit has no :location", "unit-location"});
  bool has_nationality = false;
  for (const GraphEdge* e : g.out_edges(var)) {
    if (e->role != ":mod" && e->role != ":poss") continue;
    if (e->target_is_constant) {
      has_nationality = true;
    } else if (*g.concept_of(e->target) == "country" ||
               *g.concept_of(e->target) == "name") {
      has_nationality = true;
    }
  }
  if (!has_nationality)
    out.push_back({DiagnosticKind::Underspecified,
                   "unit has no nationality modifier", "unit-nationality"});
}

}  // namespace

std::vector<Diagnostic> check_diplomacy_graph(const IntentGraph& g) {
  std::vector<Diagnostic> out;
  if (g.empty()) return out;
  g.validate();
  const DiplomacyVocabulary& v = DiplomacyVocabulary::standard();

  for (const auto& n : g.nodes)
    if (!v.known_concept(n.concept_label))
      out.push_back({DiagnosticKind::Error,
                     "unknown concept " + n.concept_label, ""});
  for (const auto& e : g.edges)
    if (!v.roles.count(e.role))
      out.push_back({DiagnosticKind::Error, "unknown role " + e.role, ""});

  for (const auto& n : g.nodes) {
    if (!v.action_concepts.count(n.concept_label)) continue;

    if (n.concept_label == "build-01") {
      // The build site attaches to the action, not to the unit being built.
      const GraphEdge* arg1 = g.first_edge(n.var, ":ARG1");
      if (arg1 && !arg1->target_is_constant &&
          g.first_edge(arg1->target, ":location"))
        out.push_back({DiagnosticKind::Error,
                       "location must attach to build-01", ""});
      if (!g.first_edge(n.var, ":location"))
        out.push_back({DiagnosticKind::Underspecified,
                       "build-01 has no :location", "unit-location"});
      continue;
    }

    if (n.concept_label == "agree-01" || n.concept_label == "propose-01") {
      const GraphEdge* obj = g.first_edge(n.var, ":ARG1");
      if (!obj)
        out.push_back({DiagnosticKind::Underspecified,
                       n.concept_label + " has no agreed-on object",
                       "agreement-object"});
      continue;
    }

    // Movement-family actions carry a unit participant in :ARG1.
    bool moves_unit = n.concept_label == "move-01" ||
                      n.concept_label == "hold-03" ||
                      n.concept_label == "transport-01" ||
                      n.concept_label == "attack-01";
    if (!moves_unit) continue;

    const GraphEdge* unit_edge = nullptr;
    for (const GraphEdge* e : g.out_edges(n.var))
      if (e->role == ":ARG1" && !e->target_is_constant &&
          is_unit_concept(*g.concept_of(e->target)))
        unit_edge = e;
    if (!unit_edge) {
      out.push_back({DiagnosticKind::Underspecified,
                     n.concept_label + " names no unit", "unit-kind"});
      out.push_back({DiagnosticKind::Underspecified,
                     n.concept_label + " names no unit", "unit-location"});
      out.push_back({DiagnosticKind::Underspecified,
                     n.concept_label + " names no unit", "unit-nationality"});
      continue;
    }
    check_unit_node(g, unit_edge->target, out);
    if (n.concept_label == "move-01" && !g.first_edge(n.var, ":ARG2") &&
        !g.first_edge(n.var, ":destination"))
      out.push_back({DiagnosticKind::Underspecified,
                     "move-01 has no destination", ""});
  }
  return out;
}

std::set<std::string> underspecified_slots(const IntentGraph& g) {
  std::set<std::string> out;
  for (const auto& d : check_diplomacy_graph(g))
    if (d.kind == DiagnosticKind::Underspecified && !d.slot.empty())
      out.insert(d.slot);
  return out;
}

}  // namespace dip::amr
