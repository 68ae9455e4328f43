#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "dip/detect.hpp"
#include "dip/sim.hpp"

using namespace dip;
using namespace dip::sim;

namespace {

const Map& map() {
  static Map m = Map::standard();
  return m;
}

GameConfig quick_config(CommLevel level, int turns = 2) {
  GameConfig c = standard_config(level, {Power::ENG, Power::FRA, Power::GER});
  c.movement_turns = turns;
  return c;
}

std::vector<detect::TurnMessage> as_turn_messages(const TurnLog& t) {
  std::vector<detect::TurnMessage> out;
  for (const LoggedMessage& m : t.messages)
    out.push_back({m.id, m.sender, m.recipient, m.acts});
  return out;
}

bool same_order_set(std::vector<Order> a, std::vector<Order> b) {
  for (Order& o : a) o = coast_normalized(o);
  for (Order& o : b) o = coast_normalized(o);
  auto key = [](const Order& o) { return render_order(o); };
  std::multiset<std::string> ka, kb;
  for (const Order& o : a) ka.insert(key(o));
  for (const Order& o : b) kb.insert(key(o));
  return ka == kb;
}

}  // namespace

TEST_CASE("level names round-trip") {
  for (CommLevel l : {CommLevel::NaturalLanguage, CommLevel::AmrOnly,
                      CommLevel::RandomCorpus, CommLevel::Gunboat}) {
    auto back = comm_level_from_name(comm_level_name(l));
    REQUIRE(back.has_value());
    CHECK(*back == l);
  }
  CHECK_FALSE(comm_level_from_name("chatty").has_value());
}

TEST_CASE("config validation") {
  GameConfig c = quick_config(CommLevel::NaturalLanguage);
  c.agents[Power::ENG].honesty = 1.5;
  CHECK_THROWS_AS(run_game(map(), c, 1), ConfigInvalid);
  c = quick_config(CommLevel::NaturalLanguage);
  c.agents[Power::FRA].policy = Policy::Greedy;
  CHECK_THROWS_AS(run_game(map(), c, 1), ConfigInvalid);
  c = quick_config(CommLevel::Gunboat);
  c.agents[Power::FRA].policy = Policy::Greedy;  // fine for a gunboat power
  CHECK_NOTHROW(run_game(map(), c, 1));
  CHECK_THROWS_AS(standard_config(CommLevel::NaturalLanguage, {Power::ENG}),
                  ConfigInvalid);
}

TEST_CASE("same config and seed reproduce the game exactly") {
  GameConfig c = quick_config(CommLevel::NaturalLanguage, 3);
  GameLog a = run_game(map(), c, 42);
  GameLog b = run_game(map(), c, 42);
  REQUIRE(a.turns.size() == b.turns.size());
  CHECK(a.summary == b.summary);
  for (size_t i = 0; i < a.turns.size(); ++i) {
    const TurnLog& ta = a.turns[i];
    const TurnLog& tb = b.turns[i];
    CHECK(ta.turn_key == tb.turn_key);
    REQUIRE(ta.messages.size() == tb.messages.size());
    for (size_t j = 0; j < ta.messages.size(); ++j) {
      CHECK(ta.messages[j].text == tb.messages[j].text);
      CHECK(ta.messages[j].acts == tb.messages[j].acts);
    }
    CHECK(ta.finals == tb.finals);
  }
  GameLog d = run_game(map(), c, 43);
  bool identical = true;
  for (size_t i = 0; i < std::min(a.turns.size(), d.turns.size()); ++i)
    if (a.turns[i].messages.size() != d.turns[i].messages.size() ||
        a.turns[i].finals != d.turns[i].finals)
      identical = false;
  CHECK_FALSE(identical);
}

TEST_CASE("all-gunboat game: no messages, full horizon, supply cap") {
  GameConfig c;
  for (Power p : kAllPowers) {
    c.agents[p] = {Policy::Greedy, 1.0, 0.5, 0};
    c.levels[p] = CommLevel::Gunboat;
  }
  c.movement_turns = 14;
  GameLog log = run_game(map(), c, 7);
  CHECK(log.turns.size() == 14);
  int total = 0;
  for (const TurnLog& t : log.turns) {
    CHECK(t.messages.empty());
    total = 0;
    for (const auto& [p, n] : t.sc_counts) total += n;
  }
  CHECK(total <= 34);
  CHECK(log.final_state.turn.year >= 1907);
  // Every movement turn has ledger entries for all powers.
  for (const TurnLog& t : log.turns)
    for (Power p : kAllPowers) {
      auto turn = TurnId::from_key(t.turn_key);
      REQUIRE(turn.has_value());
      CHECK(log.ledger.find(p, *turn) != nullptr);
    }
}

TEST_CASE("honesty zero: every grounded commitment scores BC = 1") {
  GameConfig c = quick_config(CommLevel::NaturalLanguage, 4);
  for (Power p : {Power::ENG, Power::FRA, Power::GER})
    c.agents[p].honesty = 0.0;
  GameLog log = run_game(map(), c, 11);
  detect::IntentLedger ledger = log.ledger;
  int commitments_seen = 0;
  for (const TurnLog& t : log.turns) {
    auto turn = TurnId::from_key(t.turn_key);
    REQUIRE(turn.has_value());
    auto events = detect::scan_turn(as_turn_messages(t), ledger, *turn);
    for (const auto& e : events)
      if (e.kind == detect::EventKind::BrokenCommitment) {
        ++commitments_seen;
        CHECK(e.verdict);
      }
  }
  CHECK(commitments_seen > 0);
}

TEST_CASE("honesty one, persuadability zero: no broken commitments") {
  GameConfig c = quick_config(CommLevel::NaturalLanguage, 4);
  for (Power p : {Power::ENG, Power::FRA, Power::GER}) {
    c.agents[p].honesty = 1.0;
    c.agents[p].persuadability = 0.0;
  }
  GameLog log = run_game(map(), c, 19);
  int commitments_seen = 0;
  for (const TurnLog& t : log.turns) {
    auto turn = TurnId::from_key(t.turn_key);
    auto events = detect::scan_turn(as_turn_messages(t), log.ledger, *turn);
    for (const auto& e : events)
      if (e.kind == detect::EventKind::BrokenCommitment) {
        ++commitments_seen;
        CHECK_FALSE(e.verdict);
      }
  }
  CHECK(commitments_seen > 0);
}

TEST_CASE("batch assignment is balanced across powers") {
  GameConfig base = quick_config(CommLevel::NaturalLanguage, 1);
  base.negotiation_rounds = 1;
  auto logs = run_batch(map(), 7, {CommLevel::NaturalLanguage}, 5, &base);
  REQUIRE(logs.size() == 7);
  std::map<Power, int> communicative;
  for (const GameLog& log : logs)
    for (Power p : kAllPowers)
      if (log.config.levels.at(p) != CommLevel::Gunboat) ++communicative[p];
  for (Power p : kAllPowers) CHECK(communicative[p] == 3);
}

TEST_CASE("random-corpus sampling: exact match, widening, uniformity") {
  std::vector<CorpusMessage> corpus = {
      {Power::ENG, Power::FRA, 1901, "a"},
      {Power::ENG, Power::FRA, 1901, "b"},
      {Power::ENG, Power::FRA, 1902, "c"},
      {Power::GER, Power::ITA, 1905, "d"},
  };
  std::mt19937_64 rng(99);
  bool widened = true;
  std::string s =
      sample_random_message(corpus, Power::ENG, Power::FRA, 1902, rng,
                            &widened);
  CHECK(s == "c");
  CHECK_FALSE(widened);
  // No year match: widen to the dyad.
  s = sample_random_message(corpus, Power::ENG, Power::FRA, 1909, rng,
                            &widened);
  CHECK((s == "a" || s == "b" || s == "c"));
  CHECK(widened);
  // No dyad match at all: any record.
  s = sample_random_message(corpus, Power::TUR, Power::AUS, 1901, rng,
                            &widened);
  CHECK(widened);
  CHECK_THROWS_AS(sample_random_message({}, Power::ENG, Power::FRA, 1901, rng),
                  EmptyCorpus);

  // Uniform over the (ENG, FRA, 1901) pool: 10k draws, 3-sigma band.
  int count_a = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i)
    if (sample_random_message(corpus, Power::ENG, Power::FRA, 1901, rng) ==
        "a")
      ++count_a;
  double mean = n * 0.5, sigma = std::sqrt(n * 0.25);
  CHECK(count_a > mean - 3 * sigma);
  CHECK(count_a < mean + 3 * sigma);
}

TEST_CASE("random-corpus games parse chit-chat to no grounded acts") {
  GameConfig c = quick_config(CommLevel::RandomCorpus, 2);
  GameLog log = run_game(map(), c, 3);
  int messages = 0;
  for (const TurnLog& t : log.turns)
    for (const LoggedMessage& m : t.messages) {
      ++messages;
      for (const auto& a : m.acts) CHECK(a.grounded.empty());
    }
  CHECK(messages > 0);
}

TEST_CASE("amr level carries parseable graphs") {
  GameConfig c = quick_config(CommLevel::AmrOnly, 2);
  GameLog log = run_game(map(), c, 13);
  int grounded = 0;
  for (const TurnLog& t : log.turns)
    for (const LoggedMessage& m : t.messages) {
      CHECK(m.text.front() == '(');
      CHECK_NOTHROW(amr::parse_graph_text(m.text));
      for (const auto& a : m.acts) grounded += a.grounded.size();
    }
  CHECK(grounded > 0);
}

TEST_CASE("summary line format") {
  GameState s = initial_state(map());
  std::string line =
      summary_line(map(), s, {Power::FRA, Power::GER, Power::TUR});
  CHECK(line ==
        "AUS 3, ENG 3, FRA 3, GER 3, ITA 3, RUS 4, TUR 3. (FRA GER TUR)");
  GameLog log = run_game(map(), quick_config(CommLevel::Gunboat, 1), 2);
  CHECK(log.summary.find(". (") != std::string::npos);
}

TEST_CASE("rendered template messages round-trip to the same order set") {
  std::mt19937_64 rng(2024);
  GameState state = initial_state(map());
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    if (trial == 250) {
      // Re-check from a mid-game position as well.
      GameConfig c = quick_config(CommLevel::Gunboat, 4);
      for (Power p : kAllPowers) c.agents[p].policy = Policy::Greedy;
      state = run_game(map(), c, 77).final_state;
      if (state.turn.phase != Phase::Movement) state = initial_state(map());
    }
    std::uniform_int_distribution<size_t> pick_unit(0,
                                                    state.units.size() - 1);
    const Unit& u = state.units[pick_unit(rng)];
    auto options = legal_moves(map(), state, u);
    if (options.empty()) continue;
    std::uniform_int_distribution<size_t> pick(0, options.size() - 1);
    const Order& o = options[pick(rng)];

    msg::MessageContext ctx;
    ctx.sender = u.owner;
    ctx.recipient = u.owner == Power::ENG ? Power::FRA : Power::ENG;
    ctx.turn = state.turn;
    ctx.state = state;

    msg::CommunicativeAct act;
    act.kind = msg::ActKind::Commitment;
    act.actor = u.owner;
    act.action_graph = msg::order_graph(map(), state, u.owner, o);
    act.grounded = msg::ground(map(), act, ctx);
    REQUIRE_FALSE(act.grounded.empty());

    std::string text =
        msg::render_act_text(map(), state, act, ctx.sender, ctx.recipient);
    REQUIRE_FALSE(text.empty());
    auto acts = msg::extract_acts(map(), text, ctx);
    REQUIRE_MESSAGE(acts.size() == 1, text);
    auto regrounded = msg::ground(map(), acts.front(), ctx);
    CHECK_MESSAGE(same_order_set(act.grounded, regrounded), text);
    ++checked;
  }
  CHECK(checked >= 450);
}

TEST_CASE("ledger intents precede persuasion adoptions") {
  GameConfig c = quick_config(CommLevel::NaturalLanguage, 2);
  for (Power p : {Power::ENG, Power::FRA, Power::GER})
    c.agents[p].persuadability = 1.0;
  GameLog log = run_game(map(), c, 31);
  for (const TurnLog& t : log.turns) {
    auto turn = TurnId::from_key(t.turn_key);
    for (Power p : kAllPowers) {
      const detect::LedgerEntry* e = log.ledger.find(p, *turn);
      REQUIRE(e != nullptr);
      CHECK(e->initial == t.intents.at(p));
      CHECK(e->final_orders == t.finals.at(p));
    }
  }
}
