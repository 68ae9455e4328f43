#include "dip/smatch.hpp"

#include <algorithm>
#include <random>

namespace dip::smatch {

namespace {

using amr::IntentGraph;
using amr::Triple;

// Triples of `g` with variables rewritten through `mapping`; triples touching
// an unmapped variable are dropped (they cannot match anything).
std::vector<Triple> mapped_triples(
    const IntentGraph& g, const std::map<std::string, std::string>& mapping) {
  std::vector<Triple> out;
  auto mapped = [&](const std::string& v) -> const std::string* {
    auto it = mapping.find(v);
    return it == mapping.end() ? nullptr : &it->second;
  };
  for (const Triple& t : amr::to_triples(g)) {
    const std::string* s = mapped(t.source);
    if (!s) continue;
    if (t.role == "instance" || t.role == "TOP") {
      out.push_back({*s, t.role, t.target});
      continue;
    }
    // Relation targets are variables; attribute targets are constants.
    if (g.node(t.target)) {
      const std::string* tv = mapped(t.target);
      if (!tv) continue;
      out.push_back({*s, t.role, *tv});
    } else {
      out.push_back({*s, t.role, t.target});
    }
  }
  return out;
}

int multiset_overlap(std::vector<Triple> a, std::vector<Triple> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  int n = 0;
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j])
      ++i;
    else if (b[j] < a[i])
      ++j;
    else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

std::vector<std::string> variables(const IntentGraph& g) {
  std::vector<std::string> out;
  for (const auto& n : g.nodes) out.push_back(n.var);
  return out;
}

int score_mapping(const IntentGraph& a, const IntentGraph& b,
                  const std::map<std::string, std::string>& m) {
  return multiset_overlap(mapped_triples(a, m), amr::to_triples(b));
}

// One hill-climbing run from a given start; single-variable remap moves with
// occupant swap, repeated to a fixpoint.
Alignment climb(const IntentGraph& a, const IntentGraph& b,
                std::map<std::string, std::string> m) {
  const auto avars = variables(a);
  const auto bvars = variables(b);
  int best = score_mapping(a, b, m);
  bool improved = true;
  while (improved) {
    improved = false;
    for (const auto& av : avars) {
      for (const auto& bv : bvars) {
        auto cur = m.find(av);
        if (cur != m.end() && cur->second == bv) continue;
        std::map<std::string, std::string> trial = m;
        // Evict or swap with the occupant of bv.
        std::string occupant;
        for (const auto& [k, v] : trial)
          if (v == bv) occupant = k;
        if (!occupant.empty()) {
          if (cur != m.end())
            trial[occupant] = cur->second;
          else
            trial.erase(occupant);
        }
        trial[av] = bv;
        int s = score_mapping(a, b, trial);
        if (s > best) {
          best = s;
          m = std::move(trial);
          improved = true;
        }
      }
    }
  }
  return {std::move(m), best};
}

std::map<std::string, std::string> greedy_by_concept(const IntentGraph& a,
                                                     const IntentGraph& b) {
  std::map<std::string, std::string> m;
  std::set<std::string> used;
  for (const auto& na : a.nodes) {
    for (const auto& nb : b.nodes) {
      if (used.count(nb.var) || nb.concept_label != na.concept_label) continue;
      m[na.var] = nb.var;
      used.insert(nb.var);
      break;
    }
  }
  return m;
}

std::map<std::string, std::string> random_injection(const IntentGraph& a,
                                                    const IntentGraph& b,
                                                    std::mt19937_64& rng) {
  auto avars = variables(a);
  auto bvars = variables(b);
  std::shuffle(bvars.begin(), bvars.end(), rng);
  std::map<std::string, std::string> m;
  for (size_t i = 0; i < avars.size() && i < bvars.size(); ++i)
    m[avars[i]] = bvars[i];
  return m;
}

}  // namespace

int matched_triples(const IntentGraph& a, const IntentGraph& b,
                    const std::map<std::string, std::string>& mapping) {
  return score_mapping(a, b, mapping);
}

Score smatch_score(const IntentGraph& a, const IntentGraph& b, int restarts,
                   std::uint64_t seed) {
  Score out;
  if (a.empty() && b.empty()) {
    out.precision = out.recall = out.f1 = 1.0;
    return out;
  }
  if (a.empty() || b.empty()) return out;

  std::mt19937_64 rng(seed);
  Alignment best = climb(a, b, greedy_by_concept(a, b));
  for (int r = 0; r < restarts; ++r) {
    Alignment cand = climb(a, b, random_injection(a, b, rng));
    if (cand.score > best.score) best = std::move(cand);
  }
  out.best = std::move(best);
  double pa = static_cast<double>(amr::to_triples(a).size());
  double pb = static_cast<double>(amr::to_triples(b).size());
  out.precision = out.best.score / pa;
  out.recall = out.best.score / pb;
  out.f1 = out.precision + out.recall > 0
               ? 2 * out.precision * out.recall / (out.precision + out.recall)
               : 0.0;
  return out;
}

Alignment exact_alignment(const IntentGraph& a, const IntentGraph& b,
                          std::size_t max_vars) {
  if (a.nodes.size() > max_vars || b.nodes.size() > max_vars)
    throw std::invalid_argument("exact_alignment: too many variables");
  const auto avars = variables(a);
  const auto bvars = variables(b);
  Alignment best;
  std::map<std::string, std::string> m;
  std::set<std::string> used;
  auto rec = [&](auto&& self, size_t i) -> void {
    if (i == avars.size()) {
      int s = score_mapping(a, b, m);
      if (s > best.score || best.mapping.empty()) {
        best.mapping = m;
        best.score = s;
      }
      return;
    }
    for (const auto& bv : bvars) {
      if (used.count(bv)) continue;
      m[avars[i]] = bv;
      used.insert(bv);
      self(self, i + 1);
      m.erase(avars[i]);
      used.erase(bv);
    }
    // Mapping this variable can consume a target another variable needs, so
    // the unmapped branch is part of the search space too.
    self(self, i + 1);
  };
  rec(rec, 0);
  return best;
}

CorpusScore corpus_smatch(const std::vector<IntentGraph>& predicted,
                          const std::vector<IntentGraph>& gold, int restarts,
                          std::uint64_t seed) {
  if (predicted.size() != gold.size())
    throw LengthMismatch("corpus_smatch: " + std::to_string(predicted.size()) +
                         " predicted vs " + std::to_string(gold.size()) +
                         " gold graphs");
  CorpusScore out;
  for (size_t i = 0; i < predicted.size(); ++i) {
    std::uint64_t pair_seed = seed ^ (0x9e3779b97f4a7c15ull * (i + 1));
    Score s = smatch_score(predicted[i], gold[i], restarts, pair_seed);
    out.matched += s.best.score;
    out.pred_triples += static_cast<long long>(amr::to_triples(predicted[i]).size());
    out.gold_triples += static_cast<long long>(amr::to_triples(gold[i]).size());
  }
  out.precision = out.pred_triples ? static_cast<double>(out.matched) / out.pred_triples : 1.0;
  out.recall = out.gold_triples ? static_cast<double>(out.matched) / out.gold_triples : 1.0;
  out.f1 = out.precision + out.recall > 0
               ? 2 * out.precision * out.recall / (out.precision + out.recall)
               : 0.0;
  return out;
}

}  // namespace dip::smatch
