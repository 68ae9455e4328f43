#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dip/detect.hpp"
#include "dip/sim.hpp"

namespace dip::corpus {

// Bumping the major part invalidates old readers; the minor part is additive.
inline constexpr const char* kSchemaVersion = "1.0";

struct SchemaError : std::runtime_error {
  SchemaError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line(line) {}
  int line;
};

struct MessageRecord {
  std::string id;
  std::string game_id;
  std::string turn;  // "S1901M" form
  Power sender{};
  Power recipient{};
  std::string text;
  std::optional<std::string> gold_graph;  // serialized intent graph
};

struct AnnotationRecord {
  std::string message_id;
  Power annotator{};
  std::optional<std::string> outgoing_label;  // truth | lie | neutral
  std::optional<std::string> incoming_label;  // truth | lie
};

struct IdentityGuessRecord {
  std::string annotator;  // player id
  Power about{};
  int turn = 0;
  std::string guess;  // human | agent
};

// Unit positions for a (game, turn), enough to ground movement-phase talk.
struct StateRecord {
  std::string game_id;
  std::string turn;
  std::vector<std::string> units;  // "GER F SKA" form
};

struct Corpus {
  std::vector<MessageRecord> messages;
  std::vector<AnnotationRecord> annotations;
  std::vector<IdentityGuessRecord> guesses;
  std::vector<StateRecord> states;
  std::map<std::string, detect::IntentLedger> ledgers;  // keyed by game id
  std::vector<std::string> diagnostics;  // non-fatal invariant violations
};

// JSON Lines reader; throws SchemaError (with line number) on malformed
// records, collects invariant violations as diagnostics.
Corpus ingest_corpus(std::istream& in, const Map& map);
Corpus ingest_corpus_file(const std::string& path, const Map& map);

// Reconstruct the game state recorded for (game_id, turn), if any.
std::optional<GameState> state_for(const Corpus& c, const Map& map,
                                   const std::string& game_id,
                                   const std::string& turn);

// Game-log serialization (one JSON object per line, header first).
void write_game_log(std::ostream& out, const Map& map,
                    const sim::GameLog& log);
sim::GameLog read_game_log(std::istream& in, const Map& map);

// Corpus serialization for fixtures and simulator output.
void write_corpus(std::ostream& out, const Corpus& c, const Map& map);

std::optional<Power> power_from_code(const std::string& code);

}  // namespace dip::corpus
