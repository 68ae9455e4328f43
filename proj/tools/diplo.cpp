#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dip/corpus.hpp"
#include "dip/report.hpp"
#include "dip/smatch.hpp"
#include "dip/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dip;

namespace {

// --out paths are resolved under $DIPLO_OUT_ROOT when it is set and the path
// is relative.
fs::path resolve_out(const std::string& path) {
  fs::path p(path);
  const char* root = std::getenv("DIPLO_OUT_ROOT");
  if (root && *root && p.is_relative()) return fs::path(root) / p;
  return p;
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "."
                                                    : path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::vector<sim::CommLevel> parse_levels(const std::string& spec) {
  std::vector<sim::CommLevel> levels;
  std::istringstream in(spec);
  std::string name;
  while (std::getline(in, name, ',')) {
    auto l = sim::comm_level_from_name(name);
    if (!l) throw std::runtime_error("unknown comm level: " + name);
    levels.push_back(*l);
  }
  if (levels.empty()) throw std::runtime_error("no comm levels given");
  return levels;
}

json act_json(const msg::CommunicativeAct& a) {
  json orders = json::array();
  for (const Order& o : a.grounded) orders.push_back(render_order(o));
  const char* kind = a.kind == msg::ActKind::Commitment   ? "commitment"
                     : a.kind == msg::ActKind::Proposal   ? "proposal"
                     : a.kind == msg::ActKind::Agreement  ? "agreement"
                     : a.kind == msg::ActKind::ThirdPartyReport
                         ? "third_party_report"
                         : "none";
  return json{{"kind", kind},
              {"actor", power_code(a.actor)},
              {"conditional", a.conditional},
              {"graph", amr::serialize_graph(a.action_graph)},
              {"grounded", orders}};
}

// Parse + ground every message against its recorded turn state.
std::map<std::string, std::vector<msg::CommunicativeAct>> parse_corpus(
    const Map& map, const corpus::Corpus& c) {
  std::map<std::string, std::vector<msg::CommunicativeAct>> acts;
  // Open proposals chain within a (game, turn, dyad) conversation.
  std::map<std::tuple<std::string, std::string, Power, Power>,
           msg::CommunicativeAct>
      open;
  for (const corpus::MessageRecord& m : c.messages) {
    msg::MessageContext ctx;
    ctx.sender = m.sender;
    ctx.recipient = m.recipient;
    ctx.turn = *TurnId::from_key(m.turn);
    if (auto state = corpus::state_for(c, map, m.game_id, m.turn))
      ctx.state = *state;
    auto it = open.find({m.game_id, m.turn, m.recipient, m.sender});
    if (it != open.end()) ctx.open_proposal = it->second;

    std::vector<msg::CommunicativeAct> parsed;
    if (m.gold_graph) {
      parsed.push_back(
          msg::act_from_graph(map, amr::parse_graph_text(*m.gold_graph),
                              ctx));
    } else {
      parsed = msg::extract_acts(map, m.text, ctx);
    }
    for (msg::CommunicativeAct& a : parsed) {
      try {
        a.grounded = msg::ground(map, a, ctx);
      } catch (const msg::NoActorUnit&) {
        a.grounded.clear();
      }
      if (a.kind == msg::ActKind::Proposal)
        open[{m.game_id, m.turn, m.sender, m.recipient}] = a;
    }
    acts[m.id] = std::move(parsed);
  }
  return acts;
}

std::vector<stats::GameSummary> load_batch(const std::string& in) {
  fs::path path(in);
  if (fs::is_directory(path)) path /= "games.jsonl";
  std::ifstream file(path);
  if (!file)
    throw std::runtime_error("cannot open batch file: " + path.string());
  std::vector<stats::GameSummary> games;
  std::string line;
  int n = 0;
  while (std::getline(file, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line);
    if (j["type"] == "header") {
      std::string v = j["schema_version"].get<std::string>();
      if (v.substr(0, v.find('.')) != std::string("1"))
        throw corpus::SchemaError(n, "unsupported schema version " + v);
      continue;
    }
    if (j["type"] != "game") continue;
    stats::GameSummary s =
        stats::parse_summary_line(j["summary"].get<std::string>());
    s.game_id = j["game_id"].get<std::string>();
    s.level = j["level"].get<std::string>();
    games.push_back(std::move(s));
  }
  return games;
}

int cmd_simulate(const std::string& levels_spec, int games, int turns,
                 int rounds, std::uint64_t seed, const std::string& out_dir) {
  const Map& map = Map::standard();
  auto levels = parse_levels(levels_spec);
  sim::GameConfig base;
  // run_batch builds per-game configs; pass turn/round overrides through it.
  base = sim::standard_config(levels.front(),
                              {Power::ENG, Power::FRA, Power::GER});
  base.movement_turns = turns;
  base.negotiation_rounds = rounds;
  auto logs = sim::run_batch(map, games, levels, seed, &base);

  std::ostringstream games_out;
  games_out << json{{"type", "header"},
                    {"schema_version", corpus::kSchemaVersion}}
                   .dump()
            << "\n";
  for (const sim::GameLog& log : logs) {
    stats::GameSummary s = stats::summarize(log);
    std::string level = s.level.empty() ? "gunboat" : s.level;
    games_out << json{{"type", "game"},
                      {"game_id", log.game_id},
                      {"level", level},
                      {"summary", log.summary}}
                     .dump()
              << "\n";
    std::cout << log.game_id << ": " << log.summary << "\n";
    if (!out_dir.empty()) {
      std::ostringstream log_out;
      corpus::write_game_log(log_out, map, log);
      write_file(resolve_out(out_dir) / (log.game_id + ".jsonl"),
                 log_out.str());
    }
  }
  if (!out_dir.empty())
    write_file(resolve_out(out_dir) / "games.jsonl", games_out.str());
  return 0;
}

int cmd_parse(const std::string& in) {
  const Map& map = Map::standard();
  corpus::Corpus c = corpus::ingest_corpus_file(in, map);
  auto acts = parse_corpus(map, c);
  for (const corpus::MessageRecord& m : c.messages) {
    json arr = json::array();
    for (const msg::CommunicativeAct& a : acts[m.id]) arr.push_back(act_json(a));
    std::cout << json{{"message_id", m.id}, {"acts", arr}}.dump() << "\n";
  }
  for (const std::string& d : c.diagnostics)
    std::cerr << "diagnostic: " << d << "\n";
  return 0;
}

int cmd_ground(const std::string& in) {
  const Map& map = Map::standard();
  corpus::Corpus c = corpus::ingest_corpus_file(in, map);
  for (const corpus::MessageRecord& m : c.messages) {
    if (!m.gold_graph) continue;
    msg::MessageContext ctx;
    ctx.sender = m.sender;
    ctx.recipient = m.recipient;
    ctx.turn = *TurnId::from_key(m.turn);
    if (auto state = corpus::state_for(c, map, m.game_id, m.turn))
      ctx.state = *state;
    msg::CommunicativeAct act =
        msg::act_from_graph(map, amr::parse_graph_text(*m.gold_graph), ctx);
    json orders = json::array();
    try {
      for (const Order& o : msg::ground(map, act, ctx))
        orders.push_back(render_order(o));
      std::cout << json{{"message_id", m.id}, {"orders", orders}}.dump()
                << "\n";
    } catch (const msg::NoActorUnit& e) {
      std::cout << json{{"message_id", m.id},
                        {"error", std::string("no-actor-unit: ") + e.what()}}
                       .dump()
                << "\n";
    }
  }
  return 0;
}

int cmd_detect(const std::string& in, const std::string& out) {
  const Map& map = Map::standard();
  corpus::Corpus c = corpus::ingest_corpus_file(in, map);
  auto acts = parse_corpus(map, c);

  // Group messages by (game, turn), preserving corpus order.
  std::vector<std::pair<std::string, std::string>> groups;
  std::map<std::pair<std::string, std::string>,
           std::vector<detect::TurnMessage>>
      grouped;
  for (const corpus::MessageRecord& m : c.messages) {
    auto key = std::make_pair(m.game_id, m.turn);
    if (!grouped.count(key)) groups.push_back(key);
    grouped[key].push_back({m.id, m.sender, m.recipient, acts[m.id]});
  }

  std::ostringstream lines;
  int bc = 0, attempts = 0, successes = 0;
  for (const auto& key : groups) {
    auto ledger_it = c.ledgers.find(key.first);
    if (ledger_it == c.ledgers.end())
      throw detect::MissingLedgerEntry("no ledger for game " + key.first);
    auto events = detect::scan_turn(grouped[key], ledger_it->second,
                                    *TurnId::from_key(key.second));
    for (const detect::DetectionEvent& e : events) {
      const char* kind =
          e.kind == detect::EventKind::BrokenCommitment ? "broken_commitment"
          : e.kind == detect::EventKind::PersuasionAttempt
              ? "persuasion_attempt"
              : "persuasion_success";
      if (e.kind == detect::EventKind::BrokenCommitment && e.verdict) ++bc;
      if (e.kind == detect::EventKind::PersuasionAttempt) ++attempts;
      if (e.kind == detect::EventKind::PersuasionSuccess && e.verdict)
        ++successes;
      lines << json{{"type", "event"},
                    {"kind", kind},
                    {"message_id", e.message_id},
                    {"sender", power_code(e.sender)},
                    {"recipient", power_code(e.recipient)},
                    {"order", render_order(e.action)},
                    {"verdict", e.verdict}}
                   .dump()
            << "\n";
    }
  }
  std::string header =
      json{{"type", "header"}, {"schema_version", corpus::kSchemaVersion}}
          .dump() +
      "\n";
  if (out.empty())
    std::cout << header << lines.str();
  else
    write_file(resolve_out(out), header + lines.str());
  std::cerr << "broken_commitments=" << bc << " attempts=" << attempts
            << " successes=" << successes << "\n";
  return 0;
}

int cmd_smatch(const std::string& pred_path, const std::string& gold_path,
               int restarts, std::uint64_t seed) {
  auto load = [](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return amr::parse_graph_blocks(buf.str());
  };
  auto pred = load(pred_path);
  auto gold = load(gold_path);
  auto score = smatch::corpus_smatch(pred, gold, restarts, seed);
  std::cout << json{{"precision", score.precision},
                    {"recall", score.recall},
                    {"f1", score.f1},
                    {"pairs", static_cast<std::uint64_t>(pred.size())}}
                   .dump()
            << "\n";
  return 0;
}

int cmd_stats(const std::string& in, bool regression,
              const std::string& out) {
  auto games = load_batch(in);
  if (!regression) {
    std::cout << report::batch_summary_text(games);
    return 0;
  }
  stats::Fit fit = stats::sc_regression(games);
  std::string csv = report::regression_csv(fit);
  if (out.empty())
    std::cout << csv;
  else
    write_file(resolve_out(out), csv);
  return 0;
}

int cmd_report(const std::string& in, const std::string& events_path,
               const std::string& out_dir) {
  auto games = load_batch(in);
  fs::path dir = resolve_out(out_dir);

  std::string regression;
  if (games.empty()) {
    stats::Fit empty;
    regression = report::regression_csv(empty);
  } else {
    regression = report::regression_csv(stats::sc_regression(games));
  }
  write_file(dir / "regression.csv", regression);
  write_file(dir / "summary.txt", report::batch_summary_text(games));

  std::vector<stats::ClassifiedMessage> msgs;
  if (!events_path.empty()) {
    std::ifstream ev(events_path);
    if (!ev)
      throw std::runtime_error("cannot open events file: " + events_path);
    std::string line;
    std::map<std::string, stats::ClassifiedMessage> per_message;
    while (std::getline(ev, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      json j = json::parse(line);
      if (j["type"] != "event") continue;
      stats::ClassifiedMessage& m =
          per_message[j["message_id"].get<std::string>()];
      m.game_id = "batch";
      m.sender = stats::ActorClass::Agent;
      m.receiver = stats::ActorClass::Agent;
      std::string kind = j["kind"].get<std::string>();
      bool verdict = j["verdict"].get<bool>();
      if (kind == "broken_commitment" && verdict) m.event = true;
      if (kind == "persuasion_attempt") m.attempt = true;
      if (kind == "persuasion_success" && verdict) m.success = true;
    }
    for (auto& [id, m] : per_message) msgs.push_back(m);
  }
  write_file(dir / "rates.csv", report::rates_csv(stats::rate_table(msgs)));
  write_file(dir / "persuasion.csv",
             report::persuasion_csv(stats::persuasion_summary(msgs)));
  write_file(dir / "f_by_turn.csv", report::f_by_turn_csv({}, {}));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diplomacy intent toolkit"};
  app.require_subcommand(1);

  std::string levels = "natural_language";
  int games = 1, turns = 14, rounds = 3, restarts = 4;
  std::uint64_t seed = 0;
  bool regression = false;
  std::string in, out, pred, gold, events;

  auto* simulate = app.add_subcommand("simulate", "Run self-play games");
  simulate->add_option("--levels", levels, "Comma-separated comm levels");
  simulate->add_option("--games", games, "Games per level");
  simulate->add_option("--turns", turns, "Movement turns per game");
  simulate->add_option("--rounds", rounds, "Negotiation rounds per turn");
  simulate->add_option("--seed", seed, "Root RNG seed");
  simulate->add_option("--out", out, "Output directory for logs");

  auto* parse = app.add_subcommand("parse", "Extract acts from a corpus");
  parse->add_option("--in", in, "Corpus JSONL file")->required();

  auto* ground = app.add_subcommand("ground", "Ground gold graphs to orders");
  ground->add_option("--in", in, "Corpus JSONL file")->required();

  auto* detect = app.add_subcommand("detect", "Run deception detectors");
  detect->add_option("--in", in, "Corpus JSONL file")->required();
  detect->add_option("--out", out, "Events JSONL output file");

  auto* smatch = app.add_subcommand("smatch", "Score predicted graphs");
  smatch->add_option("--pred", pred, "Predicted graph file")->required();
  smatch->add_option("--gold", gold, "Gold graph file")->required();
  smatch->add_option("--restarts", restarts, "Hill-climbing restarts");
  smatch->add_option("--seed", seed, "RNG seed");

  auto* stats_cmd = app.add_subcommand("stats", "Batch statistics");
  stats_cmd->add_option("--in", in, "Batch directory or games.jsonl")
      ->required();
  stats_cmd->add_flag("--regression", regression, "Supply-center regression");
  stats_cmd->add_option("--out", out, "CSV output file");

  auto* report_cmd = app.add_subcommand("report", "Emit report CSVs");
  report_cmd->add_option("--in", in, "Batch directory or games.jsonl")
      ->required();
  report_cmd->add_option("--events", events, "Events JSONL from detect");
  report_cmd->add_option("--out", out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed())
      return cmd_simulate(levels, games, turns, rounds, seed, out);
    if (parse->parsed()) return cmd_parse(in);
    if (ground->parsed()) return cmd_ground(in);
    if (detect->parsed()) return cmd_detect(in, out);
    if (smatch->parsed()) return cmd_smatch(pred, gold, restarts, seed);
    if (stats_cmd->parsed()) return cmd_stats(in, regression, out);
    if (report_cmd->parsed()) return cmd_report(in, events, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
