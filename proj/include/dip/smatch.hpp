#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dip/graph.hpp"

namespace dip::smatch {

struct Alignment {
  // Partial injective map from variables of the first graph to the second.
  std::map<std::string, std::string> mapping;
  int score = 0;  // matched-triple count
};

struct Score {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  Alignment best;
};

// Matched triples under a fixed alignment.
int matched_triples(const amr::IntentGraph& a, const amr::IntentGraph& b,
                    const std::map<std::string, std::string>& mapping);

// Hill-climbing Smatch with `restarts` random initializations plus one
// concept-match-greedy initialization. Deterministic for a fixed seed.
Score smatch_score(const amr::IntentGraph& a, const amr::IntentGraph& b,
                   int restarts = 4, std::uint64_t seed = 0);

// Exhaustive optimal alignment; guarded to graphs of at most `max_vars`
// variables each (factorial blow-up). Throws std::invalid_argument beyond.
Alignment exact_alignment(const amr::IntentGraph& a, const amr::IntentGraph& b,
                          std::size_t max_vars = 8);

struct LengthMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CorpusScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long long matched = 0;
  long long pred_triples = 0;
  long long gold_triples = 0;
};

// Micro-average over summed matched/total triples; per-pair seeds derive from
// `seed` so ordering and concurrency cannot change the result.
CorpusScore corpus_smatch(const std::vector<amr::IntentGraph>& predicted,
                          const std::vector<amr::IntentGraph>& gold,
                          int restarts = 4, std::uint64_t seed = 0);

}  // namespace dip::smatch
