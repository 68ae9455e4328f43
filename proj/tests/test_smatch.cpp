#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "dip/smatch.hpp"

using namespace dip;
using namespace dip::smatch;

namespace {

amr::IntentGraph parse(const std::string& t) {
  return amr::parse_graph_text(t);
}

// Random graph over a tiny concept pool so alignments are genuinely ambiguous.
amr::IntentGraph random_graph(std::mt19937& rng, int max_nodes) {
  static const std::vector<std::string> concepts = {"move-01", "unit",
                                                    "province", "country"};
  static const std::vector<std::string> roles = {":ARG1", ":ARG2", ":mod",
                                                 ":location"};
  std::uniform_int_distribution<size_t> cpick(0, concepts.size() - 1);
  std::uniform_int_distribution<size_t> rpick(0, roles.size() - 1);
  std::uniform_int_distribution<int> nnodes(1, max_nodes);
  amr::IntentGraph g;
  int n = nnodes(rng);
  for (int i = 0; i < n; ++i) {
    std::string var = "v" + std::to_string(i);
    g.nodes.push_back({var, concepts[cpick(rng)]});
    if (i == 0) {
      g.root = var;
    } else {
      std::uniform_int_distribution<int> parent(0, i - 1);
      g.edges.push_back(
          {"v" + std::to_string(parent(rng)), roles[rpick(rng)], var, false});
    }
  }
  g.validate();
  return g;
}

}  // namespace

TEST_CASE("identical graphs score 1.0") {
  auto g = parse(R"((m / move-01
    :ARG1 (u / unit :mod (c / country :name (n / name :op1 "Austria")))
    :ARG2 (p / province :name (n2 / name :op1 "Brest"))))");
  Score s = smatch_score(g, g);
  CHECK(s.precision == doctest::Approx(1.0));
  CHECK(s.recall == doctest::Approx(1.0));
  CHECK(s.f1 == doctest::Approx(1.0));
}

TEST_CASE("disjoint concept sets score 0") {
  auto a = parse("(m / move-01 :ARG1 (u / unit))");
  auto b = parse("(x / ally-01 :ARG0 (c / country))");
  Score s = smatch_score(a, b);
  CHECK(s.f1 == doctest::Approx(0.0));
}

TEST_CASE("empty-graph conventions") {
  auto e = parse("()");
  auto g = parse("(h / hold-03)");
  CHECK(smatch_score(e, e).f1 == doctest::Approx(1.0));
  CHECK(smatch_score(e, g).f1 == doctest::Approx(0.0));
  CHECK(smatch_score(g, e).f1 == doctest::Approx(0.0));
}

TEST_CASE("precision and recall follow the triple-count asymmetry") {
  auto big = parse(R"((m / move-01
    :ARG1 (u / unit :location (p / province))
    :ARG2 (p2 / province)))");  // 4 nodes + 3 edges + 1 = 8 triples
  auto small = parse("(m / move-01 :ARG2 (p / province))");  // 2+1+1 = 4
  Score s = smatch_score(small, big);
  // All 4 of the small graph's triples appear in the big one.
  CHECK(s.best.score == 4);
  CHECK(s.precision == doctest::Approx(1.0));
  CHECK(s.recall == doctest::Approx(0.5));
}

TEST_CASE("hill climbing matches the exact oracle on random pairs") {
  std::mt19937 rng(20240819);
  int equal = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto a = random_graph(rng, 5);
    auto b = random_graph(rng, 5);
    Alignment exact = exact_alignment(a, b);
    Score s = smatch_score(a, b, 4, 1000 + trial);
    CHECK(s.best.score <= exact.score);  // never exceeds the optimum
    if (s.best.score == exact.score) ++equal;
  }
  CHECK(equal >= 95);
}

TEST_CASE("exact oracle is symmetric and monotone") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    auto a = random_graph(rng, 4);
    auto b = random_graph(rng, 4);
    CHECK(exact_alignment(a, b).score == exact_alignment(b, a).score);

    // Adding the same fresh matching structure to both graphs never lowers
    // the matched count.
    auto a2 = a;
    auto b2 = b;
    a2.nodes.push_back({"zz", "season"});
    a2.edges.push_back({a2.root, ":time", "zz", false});
    b2.nodes.push_back({"zz", "season"});
    b2.edges.push_back({b2.root, ":time", "zz", false});
    CHECK(exact_alignment(a2, b2).score >= exact_alignment(a, b).score);
  }
}

TEST_CASE("alignment is injective and bounded") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    auto a = random_graph(rng, 6);
    auto b = random_graph(rng, 6);
    Score s = smatch_score(a, b, 4, trial);
    std::set<std::string> targets;
    for (const auto& [k, v] : s.best.mapping)
      CHECK(targets.insert(v).second);  // injective
    int bound = static_cast<int>(std::min(amr::to_triples(a).size(),
                                          amr::to_triples(b).size()));
    CHECK(s.best.score <= bound);
  }
}

TEST_CASE("smatch is deterministic for a fixed seed") {
  std::mt19937 rng(123);
  auto a = random_graph(rng, 6);
  auto b = random_graph(rng, 6);
  Score s1 = smatch_score(a, b, 4, 42);
  Score s2 = smatch_score(a, b, 4, 42);
  CHECK(s1.best.score == s2.best.score);
  CHECK(s1.best.mapping == s2.best.mapping);
}

TEST_CASE("corpus micro-averaging") {
  auto g = parse("(m / move-01 :ARG1 (u / unit))");  // 5 triples
  auto z = parse("(x / ally-01 :ARG0 (c / country))");

  SUBCASE("all identical corpus scores 1.0") {
    std::vector<amr::IntentGraph> pred{g, g, g}, gold{g, g, g};
    CHECK(corpus_smatch(pred, gold).f1 == doctest::Approx(1.0));
  }
  SUBCASE("one perfect and one zero pair of equal size halves the score") {
    std::vector<amr::IntentGraph> pred{g, z}, gold{g, g};
    CorpusScore c = corpus_smatch(pred, gold);
    CHECK(c.f1 == doctest::Approx(0.5));
  }
  SUBCASE("micro average differs from mean of pair F1s") {
    // 2-triple pair scores 0, 8-triple pair scores 1: mean F1 = 0.5 but
    // micro = 8/10 = 0.8.
    auto small_pred = parse("(h / hold-03)");                       // 2 triples
    auto small_gold = parse("(w / warn-01)");                       // 2 triples
    auto big = parse(
        "(m / move-01 :ARG1 (u / unit :location (p / province)) "
        ":ARG2 (p2 / province))");  // 8 triples
    std::vector<amr::IntentGraph> pred{small_pred, big}, gold{small_gold, big};
    CorpusScore c = corpus_smatch(pred, gold);
    double mean_f1 = (0.0 + 1.0) / 2;
    CHECK(c.matched == 8);
    CHECK(c.f1 == doctest::Approx(8.0 / 10.0));
    CHECK(c.f1 != doctest::Approx(mean_f1));
  }
  SUBCASE("length mismatch throws") {
    std::vector<amr::IntentGraph> pred{g}, gold{g, g};
    CHECK_THROWS_AS(corpus_smatch(pred, gold), LengthMismatch);
  }
}
