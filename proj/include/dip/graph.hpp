#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace dip::amr {

struct GraphNode {
  std::string var;
  std::string concept_label;
  bool operator==(const GraphNode&) const = default;
};

struct GraphEdge {
  std::string source;  // variable
  std::string role;    // ":ARG0", ":location", ...
  std::string target;  // variable or constant
  bool target_is_constant = false;
  bool operator==(const GraphEdge&) const = default;
};

struct GraphError : std::runtime_error {
  enum class Code {
    UnbalancedText,
    DuplicateVariable,
    DanglingReference,
    Malformed,
  };
  Code code;
  GraphError(Code c, const std::string& what)
      : std::runtime_error(what), code(c) {}
};

// Rooted labeled directed graph in Diplomacy-AMR vocabulary. The empty graph
// ("()") is a distinct sentinel used for non-strategic chat.
struct IntentGraph {
  std::vector<GraphNode> nodes;  // introduction order
  std::vector<GraphEdge> edges;
  std::string root;  // empty iff empty graph

  bool operator==(const IntentGraph&) const = default;
  bool empty() const { return nodes.empty(); }
  const GraphNode* node(const std::string& var) const;
  const std::string* concept_of(const std::string& var) const;
  std::vector<const GraphEdge*> out_edges(const std::string& var) const;
  const GraphEdge* first_edge(const std::string& var,
                              const std::string& role) const;
  // Enforce the structural invariants; throws GraphError.
  void validate() const;
  // Fresh-variable helper for graph builders.
  std::string add_node(const std::string& concept_label,
                       const std::string& hint);
};

IntentGraph parse_graph_text(const std::string& text);
std::string serialize_graph(const IntentGraph& g);

// Blank-line separated graph blocks, one graph each.
std::vector<IntentGraph> parse_graph_blocks(const std::string& text);

struct Triple {
  std::string source;
  std::string role;  // "instance", "TOP", or an edge role without ':'
  std::string target;
  auto operator<=>(const Triple&) const = default;
};

// Instance, attribute (incl. TOP), and relation triples; cardinality is
// |nodes| + |edges| + 1 for nonempty graphs.
std::vector<Triple> to_triples(const IntentGraph& g);

// Variable renaming that preserves structure; used by tests.
bool isomorphic(const IntentGraph& a, const IntentGraph& b);

struct DiplomacyVocabulary {
  std::set<std::string> action_concepts;
  std::set<std::string> entity_concepts;
  std::set<std::string> roles;
  std::map<std::string, std::string> daide_equivalents;
  static const DiplomacyVocabulary& standard();
  bool known_concept(const std::string& c) const;
};

enum class DiagnosticKind { Error, Underspecified };

struct Diagnostic {
  DiagnosticKind kind{};
  std::string message;
  std::string slot;  // one of unit-kind/unit-location/unit-nationality/
                     // agreement-object when kind == Underspecified
  bool operator==(const Diagnostic&) const = default;
};

// Vocabulary and well-formedness checks from the Diplomacy annotation
// dictionary; underspecified slots are reported, not rejected.
std::vector<Diagnostic> check_diplomacy_graph(const IntentGraph& g);

// Just the underspecified slots.
std::set<std::string> underspecified_slots(const IntentGraph& g);

}  // namespace dip::amr
