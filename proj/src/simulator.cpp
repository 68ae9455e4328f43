#include <algorithm>
#include <array>
#include <sstream>

#include "dip/sim.hpp"

namespace dip::sim {

namespace {

const std::array<std::pair<CommLevel, std::string>, 4> kLevelNames = {{
    {CommLevel::NaturalLanguage, "natural_language"},
    {CommLevel::AmrOnly, "amr_only"},
    {CommLevel::RandomCorpus, "random_corpus"},
    {CommLevel::Gunboat, "gunboat"},
}};

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  a ^= b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2);
  return a;
}

bool alive(const GameState& state, Power p) {
  for (const Unit& u : state.units)
    if (u.owner == p) return true;
  return false;
}

void validate_config(const GameConfig& config) {
  if (config.agents.size() != 7 || config.levels.size() != 7)
    throw ConfigInvalid("seven agents and seven levels required");
  if (config.movement_turns < 1 || config.negotiation_rounds < 1)
    throw ConfigInvalid("movement turns and negotiation rounds must be >= 1");
  for (Power p : kAllPowers) {
    const AgentConfig& a = config.agents.at(p);
    if (a.honesty < 0.0 || a.honesty > 1.0 || a.persuadability < 0.0 ||
        a.persuadability > 1.0)
      throw ConfigInvalid("probabilities must lie in [0, 1]");
    if (config.levels.at(p) != CommLevel::Gunboat &&
        a.policy != Policy::Negotiator)
      throw ConfigInvalid("communicative powers require the negotiator "
                          "policy");
  }
}

// Auto-retreat: first legal destination, else disband.
std::map<Power, OrderSet> auto_retreats(const Map& map,
                                        const GameState& state) {
  std::map<Power, OrderSet> orders;
  for (const Dislodgement& d : state.dislodged) {
    bool placed = false;
    for (const Location& n : map.neighbors(d.unit.kind, d.unit.loc)) {
      Order o{d.unit.kind, d.unit.loc, OrderKind::Retreat, n, {}, {}};
      if (validate_order(map, state, o, d.unit.owner).ok) {
        orders[d.unit.owner].push_back(o);
        placed = true;
        break;
      }
    }
    if (!placed)
      orders[d.unit.owner].push_back(
          {d.unit.kind, d.unit.loc, OrderKind::Disband, {}, {}, {}});
  }
  return orders;
}

std::map<Power, OrderSet> auto_builds(const Map& map,
                                      const GameState& state) {
  std::map<Power, OrderSet> orders;
  for (Power p : kAllPowers) {
    int surplus = supply_center_count(state, p);
    for (const Unit& u : state.units)
      if (u.owner == p) --surplus;
    if (surplus <= 0) continue;  // deficits auto-disband in the adjudicator
    for (const std::string& home : map.home_centers(p)) {
      if (surplus == 0) break;
      Order o{UnitKind::Army, {home, ""}, OrderKind::Build, {}, {}, {}};
      if (validate_order(map, state, o, p).ok) {
        orders[p].push_back(o);
        --surplus;
      }
    }
  }
  return orders;
}

struct Planner {
  const Map& map;
  const GameConfig& config;
  std::map<Power, std::mt19937_64> rngs;

  std::vector<Order> intents(const GameState& state, Power p) {
    return plan_orders(map, state, p, config.agents.at(p).policy, rngs.at(p));
  }
};

const Order* plan_entry(const std::vector<Order>& plan,
                        const std::string& province) {
  for (const Order& o : plan)
    if (o.at.province == province) return &o;
  return nullptr;
}

void replace_plan_entry(std::vector<Order>& plan, const Order& replacement) {
  for (Order& o : plan)
    if (o.at.province == replacement.at.province) {
      o = replacement;
      return;
    }
  plan.push_back(replacement);
}

}  // namespace

const std::string& comm_level_name(CommLevel level) {
  for (const auto& [l, n] : kLevelNames)
    if (l == level) return n;
  static const std::string unknown = "unknown";
  return unknown;
}

std::optional<CommLevel> comm_level_from_name(const std::string& name) {
  for (const auto& [l, n] : kLevelNames)
    if (n == name) return l;
  return std::nullopt;
}

std::string sample_random_message(const std::vector<CorpusMessage>& corpus,
                                  Power sender, Power receiver, int year,
                                  std::mt19937_64& rng, bool* widened) {
  if (corpus.empty()) throw EmptyCorpus("random-message corpus is empty");
  std::vector<const CorpusMessage*> pool;
  for (const CorpusMessage& m : corpus)
    if (m.sender == sender && m.recipient == receiver && m.year == year)
      pool.push_back(&m);
  bool wide = false;
  if (pool.empty()) {
    wide = true;
    for (const CorpusMessage& m : corpus)
      if (m.sender == sender && m.recipient == receiver) pool.push_back(&m);
  }
  if (pool.empty())
    for (const CorpusMessage& m : corpus) pool.push_back(&m);
  if (widened) *widened = wide;
  std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
  return pool[pick(rng)]->text;
}

std::string render_message(const Map& map, const GameState& state,
                           const msg::CommunicativeAct& act, CommLevel level,
                           Power sender, Power recipient) {
  switch (level) {
    case CommLevel::NaturalLanguage:
      return msg::render_act_text(map, state, act, sender, recipient);
    case CommLevel::AmrOnly:
      return amr::serialize_graph(act.action_graph);
    default:
      return "";
  }
}

const std::vector<CorpusMessage>& builtin_corpus() {
  static const std::vector<CorpusMessage> corpus = [] {
    std::vector<CorpusMessage> out;
    const char* lines[] = {
        "How are you today?",
        "Good luck this year!",
        "Interesting opening so far.",
        "Lemme think about your idea",
        "The weather on the front is dreadful.",
    };
    for (Power s : kAllPowers)
      for (Power r : kAllPowers) {
        if (s == r) continue;
        for (int i = 0; i < 5; ++i)
          out.push_back({s, r, 1901 + i % 3, lines[i]});
      }
    return out;
  }();
  return corpus;
}

GameConfig standard_config(CommLevel level,
                           const std::vector<Power>& communicators) {
  if (communicators.size() != 3)
    throw ConfigInvalid("exactly three communicative powers expected");
  GameConfig config;
  for (Power p : kAllPowers) {
    bool comm = std::find(communicators.begin(), communicators.end(), p) !=
                communicators.end();
    AgentConfig a;
    a.policy = comm ? Policy::Negotiator : Policy::Greedy;
    a.honesty = 0.8;
    a.persuadability = 0.5;
    config.agents[p] = a;
    config.levels[p] = comm ? level : CommLevel::Gunboat;
  }
  return config;
}

std::string summary_line(const Map& map, const GameState& state,
                         const std::vector<Power>& communicators) {
  (void)map;
  std::ostringstream os;
  bool first = true;
  for (Power p : kAllPowers) {
    if (!first) os << ", ";
    first = false;
    os << power_code(p) << " " << supply_center_count(state, p);
  }
  os << ". (";
  first = true;
  for (Power p : kAllPowers) {
    if (std::find(communicators.begin(), communicators.end(), p) ==
        communicators.end())
      continue;
    if (!first) os << " ";
    first = false;
    os << power_code(p);
  }
  os << ")";
  return os.str();
}

GameLog run_game(const Map& map, const GameConfig& config,
                 std::uint64_t root_seed, const std::string& game_id,
                 const std::vector<CorpusMessage>* corpus) {
  validate_config(config);
  const std::vector<CorpusMessage>& corp =
      corpus ? *corpus : builtin_corpus();

  GameLog log;
  log.game_id = game_id;
  log.config = config;

  std::vector<Power> communicators;
  for (Power p : kAllPowers)
    if (config.levels.at(p) != CommLevel::Gunboat)
      communicators.push_back(p);

  Planner planner{map, config, {}};
  for (Power p : kAllPowers)
    planner.rngs.emplace(
        p, mix(mix(root_seed, static_cast<std::uint64_t>(p) + 1),
               config.agents.at(p).seed));
  std::mt19937_64 game_rng(mix(root_seed, 0x5151u));
  std::uniform_real_distribution<double> roll(0.0, 1.0);

  GameState state = initial_state(map);
  int movement_done = 0;
  int message_seq = 0;

  while (movement_done < config.movement_turns) {
    if (state.turn.phase == Phase::Retreat) {
      auto [next, report] = adjudicate_retreats(map, state,
                                                auto_retreats(map, state));
      state = std::move(next);
      continue;
    }
    if (state.turn.phase == Phase::Adjustment) {
      auto [next, report] =
          adjudicate_adjustments(map, state, auto_builds(map, state));
      state = std::move(next);
      continue;
    }

    TurnLog turn_log;
    turn_log.turn_key = state.turn.key();

    // Initial intents before any message of the turn.
    std::map<Power, std::vector<Order>> plan;
    for (Power p : kAllPowers) {
      plan[p] = planner.intents(state, p);
      turn_log.intents[p] = plan[p];
      log.ledger.at(p, state.turn).initial = plan[p];
    }

    // Synchronous negotiation rounds over ordered communicative dyads.
    struct Commitment {
      Power by;
      Order order;
    };
    std::vector<Commitment> commitments;
    std::map<std::pair<Power, Power>, msg::CommunicativeAct> open_proposals;

    for (int round = 1; round <= config.negotiation_rounds; ++round) {
      for (Power s : communicators) {
        if (!alive(state, s)) continue;
        for (Power r : communicators) {
          if (s == r || !alive(state, r)) continue;
          CommLevel level = config.levels.at(s);
          LoggedMessage m;
          m.id = game_id + "-" + turn_log.turn_key + "-" +
                 std::to_string(++message_seq);
          m.round = round;
          m.sender = s;
          m.recipient = r;

          msg::CommunicativeAct sent;
          if (level == CommLevel::RandomCorpus) {
            m.text = sample_random_message(corp, s, r, state.turn.year,
                                           game_rng, &m.widened);
          } else {
            if (round % 2 == 1) {
              // Commitment about one of our own planned orders.
              const std::vector<Order>& mine = plan[s];
              if (mine.empty()) continue;
              std::uniform_int_distribution<size_t> pick(0, mine.size() - 1);
              sent.kind = msg::ActKind::Commitment;
              sent.actor = s;
              sent.grounded = {mine[pick(game_rng)]};
            } else {
              // Proposal: suggest a legal move for one of their units.
              std::vector<Order> options;
              for (const Unit& u : state.units) {
                if (u.owner != r) continue;
                for (const Order& o : legal_moves(map, state, u))
                  if (o.kind == OrderKind::Move) options.push_back(o);
              }
              if (options.empty()) continue;
              std::uniform_int_distribution<size_t> pick(0,
                                                         options.size() - 1);
              sent.kind = msg::ActKind::Proposal;
              sent.actor = r;
              sent.grounded = {options[pick(game_rng)]};
            }
            sent.action_graph =
                msg::order_graph(map, state, sent.actor,
                                 sent.grounded.front());
            m.text = render_message(map, state, sent, level, s, r);
          }
          if (m.text.empty()) continue;

          // Receiver parses and grounds.
          msg::MessageContext ctx;
          ctx.sender = s;
          ctx.recipient = r;
          ctx.turn = state.turn;
          ctx.state = state;
          auto open_it = open_proposals.find({r, s});
          if (open_it != open_proposals.end())
            ctx.open_proposal = open_it->second;

          std::vector<msg::CommunicativeAct> acts;
          if (level == CommLevel::AmrOnly) {
            acts.push_back(
                msg::act_from_graph(map, amr::parse_graph_text(m.text), ctx));
          } else {
            acts = msg::extract_acts(map, m.text, ctx);
          }
          for (msg::CommunicativeAct& a : acts) {
            try {
              a.grounded = msg::ground(map, a, ctx);
            } catch (const msg::NoActorUnit&) {
              a.grounded.clear();
            }
          }

          for (const msg::CommunicativeAct& a : acts) {
            if (a.conditional || a.grounded.empty()) continue;
            if (a.kind == msg::ActKind::Commitment && a.actor == s) {
              for (const Order& o : a.grounded) commitments.push_back({s, o});
            } else if (a.kind == msg::ActKind::Proposal && a.actor == r) {
              open_proposals[{s, r}] = a;
              double p = config.agents.at(r).persuadability;
              if (roll(game_rng) < p)
                replace_plan_entry(plan[r], a.grounded.front());
            } else if (a.kind == msg::ActKind::Agreement && a.actor == s) {
              for (const Order& o : a.grounded) commitments.push_back({s, o});
            }
          }
          m.acts = std::move(acts);
          turn_log.messages.push_back(std::move(m));
        }
      }
    }

    // Honesty rolls: one roll per committed unit; a defection picks a legal
    // order different from everything that unit was committed to this turn.
    std::map<std::pair<Power, std::string>, std::vector<Order>> committed;
    for (const Commitment& c : commitments)
      committed[{c.by, c.order.at.province}].push_back(c.order);
    for (const auto& [key, orders] : committed) {
      const auto& [p, province] = key;
      if (roll(game_rng) < config.agents.at(p).honesty) continue;
      const Unit* u = state.unit_of(p, province);
      if (!u) continue;
      auto promised = [&](const Order& o) {
        for (const Order& c : orders)
          if (coast_normalized(c) == coast_normalized(o)) return true;
        return false;
      };
      for (const Order& alt : legal_moves(map, state, *u)) {
        if (promised(alt)) continue;
        replace_plan_entry(plan[p], alt);
        break;
      }
    }

    std::map<Power, OrderSet> orders;
    for (Power p : kAllPowers) {
      orders[p] = plan[p];
      turn_log.finals[p] = plan[p];
      log.ledger.at(p, state.turn).final_orders = plan[p];
    }

    auto [next, report] = adjudicate(map, state, orders);
    state = std::move(next);
    ++movement_done;
    for (Power p : kAllPowers)
      turn_log.sc_counts[p] = supply_center_count(state, p);
    log.turns.push_back(std::move(turn_log));
  }

  log.final_state = state;
  log.summary = summary_line(map, state, communicators);
  return log;
}

std::vector<GameLog> run_batch(const Map& map, int games_per_level,
                               const std::vector<CommLevel>& levels,
                               std::uint64_t root_seed,
                               const GameConfig* base,
                               const std::vector<CorpusMessage>* corpus) {
  std::vector<GameLog> logs;
  int slot = 0;
  for (size_t li = 0; li < levels.size(); ++li) {
    for (int g = 0; g < games_per_level; ++g, ++slot) {
      // Rotating trio keeps the communicative-power distribution balanced.
      std::vector<Power> trio = {
          kAllPowers[(slot * 3) % 7],
          kAllPowers[(slot * 3 + 1) % 7],
          kAllPowers[(slot * 3 + 2) % 7],
      };
      GameConfig config = base ? *base : standard_config(levels[li], trio);
      if (base) {
        // Re-target the base config's agent knobs onto this game's trio.
        GameConfig fresh = standard_config(levels[li], trio);
        for (Power p : kAllPowers) {
          AgentConfig a = base->agents.count(p) ? base->agents.at(p)
                                                : fresh.agents.at(p);
          a.policy = fresh.agents.at(p).policy;
          fresh.agents[p] = a;
        }
        fresh.movement_turns = base->movement_turns;
        fresh.negotiation_rounds = base->negotiation_rounds;
        config = fresh;
      }
      std::string id = "game-" + comm_level_name(levels[li]) + "-" +
                       std::to_string(g);
      logs.push_back(run_game(map, config,
                              mix(root_seed, 1000 * (li + 1) + g), id,
                              corpus));
    }
  }
  return logs;
}

}  // namespace dip::sim
