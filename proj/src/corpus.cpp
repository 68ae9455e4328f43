#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "dip/corpus.hpp"

namespace dip::corpus {

namespace {

using nlohmann::json;

std::optional<Power> code_of(const json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_string()) return std::nullopt;
  return power_from_code(j[field].get<std::string>());
}

Power require_power(const json& j, const char* field, int line) {
  auto p = code_of(j, field);
  if (!p) throw SchemaError(line, std::string("bad power in '") + field + "'");
  return *p;
}

std::string require_string(const json& j, const char* field, int line) {
  if (!j.contains(field) || !j[field].is_string())
    throw SchemaError(line, std::string("missing string field '") + field +
                                "'");
  return j[field].get<std::string>();
}

void check_version(const json& j, int line) {
  std::string v = require_string(j, "schema_version", line);
  std::string major = v.substr(0, v.find('.'));
  std::string ours(kSchemaVersion);
  if (major != ours.substr(0, ours.find('.')))
    throw SchemaError(line, "unsupported schema major version " + v);
}

std::string unit_text(const Unit& u) {
  return power_code(u.owner) + " " +
         (u.kind == UnitKind::Fleet ? std::string("F") : std::string("A")) +
         " " + u.loc.str();
}

Unit parse_unit_text(const Map& map, const std::string& text, int line) {
  std::istringstream in(text);
  std::string code, kind, loc;
  if (!(in >> code >> kind >> loc) || (kind != "F" && kind != "A"))
    throw SchemaError(line, "bad unit record: " + text);
  auto p = power_from_code(code);
  if (!p) throw SchemaError(line, "bad power in unit record: " + text);
  Unit u;
  u.owner = *p;
  u.kind = kind == "F" ? UnitKind::Fleet : UnitKind::Army;
  auto slash = loc.find('/');
  u.loc.province = loc.substr(0, slash);
  if (slash != std::string::npos) u.loc.coast = loc.substr(slash + 1);
  if (!map.find(u.loc.province))
    throw SchemaError(line, "unknown province in unit record: " + text);
  return u;
}

json orders_json(const std::vector<Order>& orders) {
  json out = json::array();
  for (const Order& o : orders) out.push_back(render_order(o));
  return out;
}

std::vector<Order> orders_from_json(const Map& map, const json& arr,
                                    int line) {
  std::vector<Order> out;
  if (!arr.is_array()) throw SchemaError(line, "orders must be an array");
  for (const auto& item : arr) {
    try {
      out.push_back(parse_order(map, item.get<std::string>()));
    } catch (const OrderError& e) {
      throw SchemaError(line, std::string("bad order: ") + e.what());
    }
  }
  return out;
}

}  // namespace

std::optional<Power> power_from_code(const std::string& code) {
  for (Power p : kAllPowers)
    if (power_code(p) == code) return p;
  return std::nullopt;
}

Corpus ingest_corpus(std::istream& in, const Map& map) {
  Corpus c;
  std::string raw;
  int line = 0;
  bool saw_header = false;
  while (std::getline(in, raw)) {
    ++line;
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(raw);
    } catch (const json::parse_error& e) {
      throw SchemaError(line, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError(line, "record must be an object");
    std::string type = require_string(j, "type", line);

    if (type == "header") {
      check_version(j, line);
      saw_header = true;
    } else if (type == "message") {
      MessageRecord m;
      m.id = require_string(j, "id", line);
      m.game_id = require_string(j, "game_id", line);
      m.turn = require_string(j, "turn", line);
      if (!TurnId::from_key(m.turn))
        throw SchemaError(line, "bad turn key: " + m.turn);
      m.sender = require_power(j, "sender", line);
      m.recipient = require_power(j, "recipient", line);
      m.text = require_string(j, "text", line);
      if (j.contains("gold_graph"))
        m.gold_graph = require_string(j, "gold_graph", line);
      c.messages.push_back(std::move(m));
    } else if (type == "annotation") {
      AnnotationRecord a;
      a.message_id = require_string(j, "message_id", line);
      a.annotator = require_power(j, "annotator", line);
      if (j.contains("outgoing_label")) {
        a.outgoing_label = require_string(j, "outgoing_label", line);
        if (*a.outgoing_label != "truth" && *a.outgoing_label != "lie" &&
            *a.outgoing_label != "neutral")
          throw SchemaError(line, "outgoing_label must be truth|lie|neutral");
      }
      if (j.contains("incoming_label")) {
        a.incoming_label = require_string(j, "incoming_label", line);
        if (*a.incoming_label != "truth" && *a.incoming_label != "lie")
          throw SchemaError(line, "incoming_label must be truth|lie");
      }
      c.annotations.push_back(std::move(a));
    } else if (type == "guess") {
      IdentityGuessRecord g;
      g.annotator = require_string(j, "annotator", line);
      g.about = require_power(j, "about", line);
      if (!j.contains("turn") || !j["turn"].is_number_integer())
        throw SchemaError(line, "guess needs an integer turn");
      g.turn = j["turn"].get<int>();
      g.guess = require_string(j, "guess", line);
      if (g.guess != "human" && g.guess != "agent")
        throw SchemaError(line, "guess must be human|agent");
      for (const IdentityGuessRecord& prior : c.guesses)
        if (prior.annotator == g.annotator && prior.about == g.about &&
            prior.turn == g.turn)
          c.diagnostics.push_back("line " + std::to_string(line) +
                                  ": duplicate identity guess");
      c.guesses.push_back(std::move(g));
    } else if (type == "state") {
      StateRecord s;
      s.game_id = require_string(j, "game_id", line);
      s.turn = require_string(j, "turn", line);
      if (!j.contains("units") || !j["units"].is_array())
        throw SchemaError(line, "state needs a units array");
      for (const auto& u : j["units"]) {
        parse_unit_text(map, u.get<std::string>(), line);  // validates
        s.units.push_back(u.get<std::string>());
      }
      c.states.push_back(std::move(s));
    } else if (type == "ledger") {
      std::string game = require_string(j, "game_id", line);
      Power p = require_power(j, "power", line);
      std::string key = require_string(j, "turn", line);
      auto turn = TurnId::from_key(key);
      if (!turn) throw SchemaError(line, "bad turn key: " + key);
      detect::LedgerEntry& e = c.ledgers[game].at(p, *turn);
      if (j.contains("initial"))
        e.initial = orders_from_json(map, j["initial"], line);
      if (j.contains("final"))
        e.final_orders = orders_from_json(map, j["final"], line);
    } else {
      throw SchemaError(line, "unknown record type: " + type);
    }
  }
  (void)saw_header;  // empty files (no header) are an empty corpus

  // Invariant: outgoing labels only from the sender, incoming only from the
  // recipient.
  for (const AnnotationRecord& a : c.annotations) {
    const MessageRecord* m = nullptr;
    for (const MessageRecord& mr : c.messages)
      if (mr.id == a.message_id) m = &mr;
    if (!m) {
      c.diagnostics.push_back("annotation references unknown message " +
                              a.message_id);
      continue;
    }
    if (a.outgoing_label && a.annotator != m->sender)
      c.diagnostics.push_back("outgoing label on received message " +
                              a.message_id);
    if (a.incoming_label && a.annotator != m->recipient)
      c.diagnostics.push_back("incoming label on sent message " +
                              a.message_id);
  }
  return c;
}

Corpus ingest_corpus_file(const std::string& path, const Map& map) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  return ingest_corpus(in, map);
}

std::optional<GameState> state_for(const Corpus& c, const Map& map,
                                   const std::string& game_id,
                                   const std::string& turn) {
  for (const StateRecord& s : c.states) {
    if (s.game_id != game_id || s.turn != turn) continue;
    GameState state;
    state.turn = *TurnId::from_key(turn);
    for (const std::string& u : s.units)
      state.units.push_back(parse_unit_text(map, u, 0));
    return state;
  }
  return std::nullopt;
}

void write_corpus(std::ostream& out, const Corpus& c, const Map& map) {
  (void)map;
  out << json{{"type", "header"}, {"schema_version", kSchemaVersion}}.dump()
      << "\n";
  for (const StateRecord& s : c.states)
    out << json{{"type", "state"},
                {"game_id", s.game_id},
                {"turn", s.turn},
                {"units", s.units}}
               .dump()
        << "\n";
  for (const MessageRecord& m : c.messages) {
    json j{{"type", "message"},     {"id", m.id},
           {"game_id", m.game_id},  {"turn", m.turn},
           {"sender", power_code(m.sender)},
           {"recipient", power_code(m.recipient)},
           {"text", m.text}};
    if (m.gold_graph) j["gold_graph"] = *m.gold_graph;
    out << j.dump() << "\n";
  }
  for (const auto& [game, ledger] : c.ledgers)
    for (const auto& [key, entry] : ledger.entries)
      out << json{{"type", "ledger"},
                  {"game_id", game},
                  {"power", power_code(key.first)},
                  {"turn", key.second},
                  {"initial", orders_json(entry.initial)},
                  {"final", orders_json(entry.final_orders)}}
                 .dump()
          << "\n";
  for (const AnnotationRecord& a : c.annotations) {
    json j{{"type", "annotation"},
           {"message_id", a.message_id},
           {"annotator", power_code(a.annotator)}};
    if (a.outgoing_label) j["outgoing_label"] = *a.outgoing_label;
    if (a.incoming_label) j["incoming_label"] = *a.incoming_label;
    out << j.dump() << "\n";
  }
  for (const IdentityGuessRecord& g : c.guesses)
    out << json{{"type", "guess"},
                {"annotator", g.annotator},
                {"about", power_code(g.about)},
                {"turn", g.turn},
                {"guess", g.guess}}
               .dump()
        << "\n";
}

void write_game_log(std::ostream& out, const Map& map,
                    const sim::GameLog& log) {
  (void)map;
  out << json{{"type", "header"},
              {"schema_version", kSchemaVersion},
              {"kind", "game_log"},
              {"game_id", log.game_id}}
             .dump()
      << "\n";
  json agents = json::object();
  json levels = json::object();
  for (Power p : kAllPowers) {
    const sim::AgentConfig& a = log.config.agents.at(p);
    agents[power_code(p)] = {
        {"policy", a.policy == sim::Policy::Greedy      ? "greedy"
                   : a.policy == sim::Policy::Defensive ? "defensive"
                                                        : "negotiator"},
        {"honesty", a.honesty},
        {"persuadability", a.persuadability},
        {"seed", a.seed}};
    levels[power_code(p)] = sim::comm_level_name(log.config.levels.at(p));
  }
  out << json{{"type", "config"},
              {"agents", agents},
              {"levels", levels},
              {"movement_turns", log.config.movement_turns},
              {"negotiation_rounds", log.config.negotiation_rounds}}
             .dump()
      << "\n";
  for (const sim::TurnLog& t : log.turns) {
    json intents = json::object(), finals = json::object(),
         sc = json::object();
    for (Power p : kAllPowers) {
      intents[power_code(p)] = orders_json(t.intents.at(p));
      finals[power_code(p)] = orders_json(t.finals.at(p));
      sc[power_code(p)] = t.sc_counts.count(p) ? t.sc_counts.at(p) : 0;
    }
    out << json{{"type", "turn"},
                {"key", t.turn_key},
                {"intents", intents},
                {"finals", finals},
                {"sc_counts", sc}}
               .dump()
        << "\n";
    for (const sim::LoggedMessage& m : t.messages)
      out << json{{"type", "message"},
                  {"id", m.id},
                  {"turn", t.turn_key},
                  {"round", m.round},
                  {"sender", power_code(m.sender)},
                  {"recipient", power_code(m.recipient)},
                  {"text", m.text},
                  {"widened", m.widened}}
                 .dump()
          << "\n";
  }
  json units = json::array();
  for (const Unit& u : log.final_state.units) units.push_back(unit_text(u));
  json ownership = json::object();
  for (const auto& [prov, p] : log.final_state.sc_ownership)
    ownership[prov] = power_code(p);
  out << json{{"type", "final_state"},
              {"turn", log.final_state.turn.key()},
              {"units", units},
              {"sc_ownership", ownership}}
             .dump()
      << "\n";
  out << json{{"type", "summary"}, {"text", log.summary}}.dump() << "\n";
}

sim::GameLog read_game_log(std::istream& in, const Map& map) {
  sim::GameLog log;
  std::string raw;
  int line = 0;
  sim::TurnLog* current = nullptr;
  while (std::getline(in, raw)) {
    ++line;
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(raw);
    } catch (const json::parse_error& e) {
      throw SchemaError(line, std::string("invalid JSON: ") + e.what());
    }
    std::string type = require_string(j, "type", line);
    if (type == "header") {
      check_version(j, line);
      log.game_id = require_string(j, "game_id", line);
    } else if (type == "config") {
      for (Power p : kAllPowers) {
        const json& a = j["agents"][power_code(p)];
        sim::AgentConfig cfg;
        std::string policy = a["policy"].get<std::string>();
        cfg.policy = policy == "greedy"      ? sim::Policy::Greedy
                     : policy == "defensive" ? sim::Policy::Defensive
                                             : sim::Policy::Negotiator;
        cfg.honesty = a["honesty"].get<double>();
        cfg.persuadability = a["persuadability"].get<double>();
        cfg.seed = a["seed"].get<std::uint64_t>();
        log.config.agents[p] = cfg;
        auto level = sim::comm_level_from_name(
            j["levels"][power_code(p)].get<std::string>());
        if (!level) throw SchemaError(line, "bad comm level");
        log.config.levels[p] = *level;
      }
      log.config.movement_turns = j["movement_turns"].get<int>();
      log.config.negotiation_rounds = j["negotiation_rounds"].get<int>();
    } else if (type == "turn") {
      sim::TurnLog t;
      t.turn_key = require_string(j, "key", line);
      auto turn = TurnId::from_key(t.turn_key);
      if (!turn) throw SchemaError(line, "bad turn key");
      for (Power p : kAllPowers) {
        t.intents[p] = orders_from_json(map, j["intents"][power_code(p)],
                                        line);
        t.finals[p] = orders_from_json(map, j["finals"][power_code(p)], line);
        t.sc_counts[p] = j["sc_counts"][power_code(p)].get<int>();
        log.ledger.at(p, *turn).initial = t.intents[p];
        log.ledger.at(p, *turn).final_orders = t.finals[p];
      }
      log.turns.push_back(std::move(t));
      current = &log.turns.back();
    } else if (type == "message") {
      if (!current) throw SchemaError(line, "message before any turn");
      sim::LoggedMessage m;
      m.id = require_string(j, "id", line);
      m.round = j.value("round", 0);
      m.sender = require_power(j, "sender", line);
      m.recipient = require_power(j, "recipient", line);
      m.text = require_string(j, "text", line);
      m.widened = j.value("widened", false);
      current->messages.push_back(std::move(m));
    } else if (type == "final_state") {
      auto turn = TurnId::from_key(require_string(j, "turn", line));
      if (!turn) throw SchemaError(line, "bad turn key");
      log.final_state.turn = *turn;
      for (const auto& u : j["units"])
        log.final_state.units.push_back(
            parse_unit_text(map, u.get<std::string>(), line));
      for (const auto& [prov, code] : j["sc_ownership"].items()) {
        auto p = power_from_code(code.get<std::string>());
        if (!p) throw SchemaError(line, "bad power code in sc_ownership");
        log.final_state.sc_ownership[prov] = *p;
      }
    } else if (type == "summary") {
      log.summary = require_string(j, "text", line);
    } else {
      throw SchemaError(line, "unknown record type: " + type);
    }
  }
  return log;
}

}  // namespace dip::corpus
