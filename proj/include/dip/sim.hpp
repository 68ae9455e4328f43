#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "dip/adjudicator.hpp"
#include "dip/detect.hpp"
#include "dip/message.hpp"
#include "dip/state.hpp"

namespace dip::sim {

enum class CommLevel { NaturalLanguage, AmrOnly, RandomCorpus, Gunboat };

const std::string& comm_level_name(CommLevel level);
std::optional<CommLevel> comm_level_from_name(const std::string& name);

enum class Policy { Greedy, Defensive, Negotiator };

struct AgentConfig {
  Policy policy = Policy::Negotiator;
  double honesty = 1.0;        // probability of keeping a sent commitment
  double persuadability = 0.5; // probability of adopting a legal proposal
  std::uint64_t seed = 0;
};

struct ConfigInvalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyCorpus : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CorpusMessage {
  Power sender{};
  Power recipient{};
  int year = 1901;
  std::string text;
};

// (sender, receiver, year) match; fallback widens to (sender, receiver),
// then to any record, recording the widening.
std::string sample_random_message(const std::vector<CorpusMessage>& corpus,
                                  Power sender, Power receiver, int year,
                                  std::mt19937_64& rng,
                                  bool* widened = nullptr);

// natural_language → template English; amr_only → serialized graph text.
std::string render_message(const Map& map, const GameState& state,
                           const msg::CommunicativeAct& act, CommLevel level,
                           Power sender, Power recipient);

struct LoggedMessage {
  std::string id;
  int round = 0;
  Power sender{};
  Power recipient{};
  std::string text;
  bool widened = false;  // random-corpus fallback widened the match set
  std::vector<msg::CommunicativeAct> acts;  // receiver-parsed, grounded
};

struct TurnLog {
  std::string turn_key;
  std::map<Power, std::vector<Order>> intents;
  std::vector<LoggedMessage> messages;
  std::map<Power, std::vector<Order>> finals;
  std::map<Power, int> sc_counts;  // after resolution
};

struct GameConfig {
  std::map<Power, AgentConfig> agents;   // all seven powers
  std::map<Power, CommLevel> levels;     // all seven powers
  int movement_turns = 14;
  int negotiation_rounds = 3;
};

// Three communicative powers sharing `level`, four gunboat.
GameConfig standard_config(CommLevel level,
                           const std::vector<Power>& communicators);

struct GameLog {
  std::string game_id;
  GameConfig config;
  std::vector<TurnLog> turns;
  detect::IntentLedger ledger;
  GameState final_state;
  std::string summary;  // "AUS 0, ENG 0, ... TUR 9. (FRA GER TUR)"
};

std::string summary_line(const Map& map, const GameState& state,
                         const std::vector<Power>& communicators);

GameLog run_game(const Map& map, const GameConfig& config,
                 std::uint64_t root_seed, const std::string& game_id = "g0",
                 const std::vector<CorpusMessage>* corpus = nullptr);

// Balanced power assignment across the batch; per-game seeds derive from
// root_seed.
std::vector<GameLog> run_batch(const Map& map, int games_per_level,
                               const std::vector<CommLevel>& levels,
                               std::uint64_t root_seed,
                               const GameConfig* base = nullptr,
                               const std::vector<CorpusMessage>* corpus =
                                   nullptr);

// Small built-in chat corpus for the random-corpus level.
const std::vector<CorpusMessage>& builtin_corpus();

// Policy order selection (one-ply heuristic); exposed for tests.
std::vector<Order> plan_orders(const Map& map, const GameState& state,
                               Power power, Policy policy,
                               std::mt19937_64& rng);

}  // namespace dip::sim
