#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "dip/graph.hpp"

using namespace dip::amr;

namespace {

const char* kFigMissingLocation = R"((m / move-01
  :ARG1 (u / unit
    :mod (c2 / country
      :name (n2 / name :op1 "Austria")))
  :ARG2 (p2 / province
    :name (n3 / name :op1 "Brest"))))";

const char* kFigMissingCountry = R"((m / move-01
  :ARG1 (u / unit
    :location (p2 / province
      :name (n / name :op1 "Romania")))
  :ARG2 (p3 / province
    :name (n3 / name :op1 "Bulgaria"))))";

// Random valid graph: tree of known concepts plus occasional re-entrancy and
// string constants.
IntentGraph random_graph(std::mt19937& rng) {
  static const std::vector<std::string> concepts = {
      "move-01", "unit",   "country", "province", "name",
      "ally-01", "fleet",  "army",    "attack-01"};
  static const std::vector<std::string> roles = {
      ":ARG0", ":ARG1", ":ARG2", ":mod", ":location", ":purpose", ":op1"};
  std::uniform_int_distribution<size_t> cpick(0, concepts.size() - 1);
  std::uniform_int_distribution<size_t> rpick(0, roles.size() - 1);
  std::uniform_int_distribution<int> nnodes(1, 8);
  IntentGraph g;
  int n = nnodes(rng);
  for (int i = 0; i < n; ++i) {
    std::string var = "v" + std::to_string(i);
    g.nodes.push_back({var, concepts[cpick(rng)]});
    if (i == 0) {
      g.root = var;
    } else {
      // Attach under an earlier node so the tree stays root-reachable.
      std::uniform_int_distribution<int> parent(0, i - 1);
      g.edges.push_back(
          {"v" + std::to_string(parent(rng)), roles[rpick(rng)], var, false});
    }
  }
  std::uniform_int_distribution<int> coin(0, 3);
  if (n > 2 && coin(rng) == 0)  // re-entrant edge
    g.edges.push_back({g.root, ":ARG3", "v" + std::to_string(n - 1), false});
  if (coin(rng) == 0)
    g.edges.push_back({g.root, ":name", "\"Brest\"", true});
  g.validate();
  return g;
}

}  // namespace

TEST_CASE("figure fixture parses to the expected shape") {
  IntentGraph g = parse_graph_text(kFigMissingLocation);
  CHECK(g.root == "m");
  CHECK(*g.concept_of("m") == "move-01");
  const GraphEdge* a1 = g.first_edge("m", ":ARG1");
  REQUIRE(a1 != nullptr);
  CHECK(*g.concept_of(a1->target) == "unit");
  const GraphEdge* mod = g.first_edge(a1->target, ":mod");
  REQUIRE(mod != nullptr);
  CHECK(*g.concept_of(mod->target) == "country");
  const GraphEdge* a2 = g.first_edge("m", ":ARG2");
  REQUIRE(a2 != nullptr);
  CHECK(*g.concept_of(a2->target) == "province");
  // The name leaves hold the quoted constants.
  const GraphEdge* nm = g.first_edge(mod->target, ":name");
  REQUIRE(nm != nullptr);
  const GraphEdge* op1 = g.first_edge(nm->target, ":op1");
  REQUIRE(op1 != nullptr);
  CHECK(op1->target == "\"Austria\"");
  CHECK(op1->target_is_constant);
}

TEST_CASE("single node and empty sentinel") {
  IntentGraph h = parse_graph_text("(h / hold-03)");
  CHECK(h.root == "h");
  CHECK(h.nodes.size() == 1);
  CHECK(h.edges.empty());
  auto t = to_triples(h);
  REQUIRE(t.size() == 2);
  CHECK(t[0] == Triple{"h", "instance", "hold-03"});
  CHECK(t[1] == Triple{"h", "TOP", "hold-03"});

  IntentGraph e = parse_graph_text("()");
  CHECK(e.empty());
  CHECK(to_triples(e).empty());
  CHECK(serialize_graph(e) == "()");
  CHECK(!isomorphic(e, h));
  CHECK(isomorphic(e, parse_graph_text("( )")));
}

TEST_CASE("parse errors carry the right codes") {
  auto code = [](const std::string& text) {
    try {
      parse_graph_text(text);
    } catch (const GraphError& err) {
      return err.code;
    }
    FAIL("expected GraphError for: " << text);
    return GraphError::Code::Malformed;
  };
  CHECK(code("(m / move-01") == GraphError::Code::UnbalancedText);
  CHECK(code("(m / move-01 :ARG1 (m / unit))") ==
        GraphError::Code::DuplicateVariable);
  CHECK(code("(m move-01)") == GraphError::Code::Malformed);
  CHECK(code("(m / move-01) extra") == GraphError::Code::UnbalancedText);
}

TEST_CASE("triple cardinality follows the node and edge counts") {
  IntentGraph g = parse_graph_text(kFigMissingLocation);
  CHECK(g.nodes.size() == 6);
  CHECK(g.edges.size() == 7);
  CHECK(to_triples(g).size() == g.nodes.size() + g.edges.size() + 1);
  CHECK(to_triples(g).size() == 14);

  std::mt19937 rng(7);
  for (int i = 0; i < 100; ++i) {
    IntentGraph r = random_graph(rng);
    CHECK(to_triples(r).size() == r.nodes.size() + r.edges.size() + 1);
  }
}

TEST_CASE("serialize then parse is isomorphic for 200 random graphs") {
  std::mt19937 rng(20240818);
  for (int i = 0; i < 200; ++i) {
    IntentGraph g = random_graph(rng);
    std::string text = serialize_graph(g);
    CHECK(text == serialize_graph(g));  // deterministic
    IntentGraph back = parse_graph_text(text);
    CHECK(isomorphic(g, back));
    CHECK(to_triples(back).size() == to_triples(g).size());
  }
}

TEST_CASE("serializer orders ARG roles first") {
  IntentGraph g = parse_graph_text(kFigMissingCountry);
  std::string text = serialize_graph(g);
  CHECK(text.find(":location") < text.find(":ARG2"));
  CHECK(text.find(":ARG1") < text.find(":location"));
  // Parse back and confirm nothing moved semantically.
  CHECK(isomorphic(g, parse_graph_text(text)));
}

TEST_CASE("re-entrant variables survive a round trip") {
  IntentGraph g = parse_graph_text(
      "(a / ally-01 :ARG1 (c / country :name (n / name :op1 \"Italy\")) "
      ":ARG2 c)");
  const GraphEdge* a2 = g.first_edge("a", ":ARG2");
  REQUIRE(a2 != nullptr);
  CHECK(!a2->target_is_constant);
  CHECK(a2->target == "c");
  IntentGraph back = parse_graph_text(serialize_graph(g));
  CHECK(isomorphic(g, back));
  CHECK(back.nodes.size() == 3);
}

TEST_CASE("isomorphism is invariant under variable renaming") {
  IntentGraph g = parse_graph_text(kFigMissingLocation);
  IntentGraph renamed = parse_graph_text(R"((x0 / move-01
    :ARG1 (x1 / unit :mod (x2 / country :name (x3 / name :op1 "Austria")))
    :ARG2 (x4 / province :name (x5 / name :op1 "Brest"))))");
  CHECK(isomorphic(g, renamed));
  CHECK(to_triples(g).size() == to_triples(renamed).size());
  CHECK(check_diplomacy_graph(g) == check_diplomacy_graph(renamed));

  IntentGraph other = parse_graph_text(kFigMissingCountry);
  CHECK(!isomorphic(g, other));
}

TEST_CASE("checker flags the figure underspecifications") {
  IntentGraph loc = parse_graph_text(kFigMissingLocation);
  CHECK(underspecified_slots(loc) == std::set<std::string>{"unit-location"});
  for (const auto& d : check_diplomacy_graph(loc))
    CHECK(d.kind == DiagnosticKind::Underspecified);

  IntentGraph nat = parse_graph_text(kFigMissingCountry);
  CHECK(underspecified_slots(nat) == std::set<std::string>{"unit-nationality"});
  for (const auto& d : check_diplomacy_graph(nat))
    CHECK(d.kind == DiagnosticKind::Underspecified);

  CHECK(check_diplomacy_graph(parse_graph_text("()")).empty());
}

TEST_CASE("checker rejects misplaced build location and unknown concepts") {
  IntentGraph bad = parse_graph_text(
      "(b / build-01 :ARG1 (f / fleet :location (p / province :name "
      "(n / name :op1 \"London\"))))");
  bool found = false;
  for (const auto& d : check_diplomacy_graph(bad))
    if (d.kind == DiagnosticKind::Error &&
        d.message == "location must attach to build-01")
      found = true;
  CHECK(found);

  IntentGraph ok = parse_graph_text(
      "(b / build-01 :ARG1 (f / fleet) :location (p / province :name "
      "(n / name :op1 \"London\")))");
  for (const auto& d : check_diplomacy_graph(ok))
    CHECK(d.kind != DiagnosticKind::Error);

  IntentGraph unk = parse_graph_text("(z / frobnicate-01)");
  REQUIRE(check_diplomacy_graph(unk).size() == 1);
  CHECK(check_diplomacy_graph(unk)[0].kind == DiagnosticKind::Error);
}

TEST_CASE("agreement without an object is underspecified, not an error") {
  IntentGraph g = parse_graph_text("(a / agree-01 :ARG0 (c / country))");
  CHECK(underspecified_slots(g) == std::set<std::string>{"agreement-object"});
  for (const auto& d : check_diplomacy_graph(g))
    CHECK(d.kind == DiagnosticKind::Underspecified);
}

TEST_CASE("underspecification detection is monotone") {
  // Adding the missing slot removes (never adds) its diagnostic.
  IntentGraph partial = parse_graph_text(kFigMissingCountry);
  IntentGraph full = parse_graph_text(R"((m / move-01
    :ARG1 (u / unit
      :mod (c / country :name (n2 / name :op1 "Russia"))
      :location (p2 / province :name (n / name :op1 "Romania")))
    :ARG2 (p3 / province :name (n3 / name :op1 "Bulgaria"))))");
  auto before = underspecified_slots(partial);
  auto after = underspecified_slots(full);
  for (const auto& slot : after) CHECK(before.count(slot));
  CHECK(after.empty());
}

TEST_CASE("blank-line separated blocks parse individually") {
  std::string text = std::string(kFigMissingLocation) + "\n\n" +
                     "(h / hold-03)\n\n" + kFigMissingCountry + "\n";
  auto graphs = parse_graph_blocks(text);
  REQUIRE(graphs.size() == 3);
  CHECK(*graphs[0].concept_of(graphs[0].root) == "move-01");
  CHECK(graphs[1].nodes.size() == 1);
  CHECK(*graphs[2].concept_of(graphs[2].root) == "move-01");
}
