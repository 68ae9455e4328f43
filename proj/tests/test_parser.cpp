#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "dip/message.hpp"

using namespace dip;
using namespace dip::msg;

namespace {

MessageContext ctx_with(const Map& map, Power sender, Power recipient,
                        std::vector<Unit> units) {
  MessageContext ctx;
  ctx.sender = sender;
  ctx.recipient = recipient;
  ctx.turn = {1901, Season::Spring, Phase::Movement};
  ctx.state.turn = ctx.turn;
  ctx.state.units = std::move(units);
  return ctx;
}

}  // namespace

TEST_CASE("preprocess replaces pronouns and abbreviations") {
  const Map& map = Map::standard();
  MessageContext ctx = ctx_with(map, Power::ENG, Power::GER, {});

  CHECK(preprocess(map, "I will support you there", ctx) ==
        "England will support Germany there");
  CHECK(preprocess(map, "SWE", ctx) == "Sweden");
  CHECK(preprocess(map, "Meet at StP", ctx) == "Meet at St Petersburg");
  CHECK(preprocess(map, "A quiet afternoon walk", ctx) ==
        "A quiet afternoon walk");

  // Idempotence.
  std::string once =
      preprocess(map, "I'm sending my fleet to SWE, you'll see", ctx);
  CHECK(preprocess(map, once, ctx) == once);
}

TEST_CASE("non-strategic chat extracts no acts") {
  const Map& map = Map::standard();
  MessageContext ctx = ctx_with(map, Power::ENG, Power::GER, {});
  CHECK(extract_acts(map, "How are you today?", ctx).empty());
  CHECK(extract_acts(map, "Lemme think about your idea", ctx).empty());
  CHECK(extract_acts(map, "That's an interesting opening.", ctx).empty());
}

TEST_CASE("the steal-and-support message yields a proposal and a commitment") {
  const Map& map = Map::standard();
  MessageContext ctx =
      ctx_with(map, Power::ENG, Power::GER,
               {{Power::ENG, UnitKind::Fleet, {"NWY", ""}},
                {Power::GER, UnitKind::Fleet, {"SKA", ""}},
                {Power::RUS, UnitKind::Fleet, {"SWE", ""}}});
  auto acts = extract_acts(
      map,
      "You can steal STP from Russia if you're in SWE next turn. "
      "I will support you there.",
      ctx);
  REQUIRE(acts.size() == 2);
  CHECK(acts[0].kind == ActKind::Proposal);
  CHECK(acts[0].actor == Power::GER);
  CHECK(classify_attempt(acts[0]));
  CHECK(acts[1].kind == ActKind::Commitment);
  CHECK(acts[1].actor == Power::ENG);
  CHECK(!classify_attempt(acts[1]));

  // The proposal grounds to Germany's Skagerrak fleet moving to Sweden.
  auto proposal_orders = ground(map, acts[0], ctx);
  REQUIRE(proposal_orders.size() == 1);
  CHECK(proposal_orders[0] ==
        Order{UnitKind::Fleet, {"SKA", ""}, OrderKind::Move, {"SWE", ""},
              {}, {}});

  // "I will support you there" resolves to F NWY S F SKA - SWE.
  auto support_orders = ground(map, acts[1], ctx);
  REQUIRE(support_orders.size() == 1);
  CHECK(support_orders[0] ==
        Order{UnitKind::Fleet, {"NWY", ""}, OrderKind::SupportMove,
              {"SWE", ""}, UnitKind::Fleet, {"SKA", ""}});
}

TEST_CASE("the bumping sentence leaves nationality underspecified") {
  const Map& map = Map::standard();
  MessageContext ctx =
      ctx_with(map, Power::AUS, Power::ITA,
               {{Power::RUS, UnitKind::Army, {"RUM", ""}}});
  auto acts = extract_acts(map, "just bumping Bulgaria from Romania", ctx);
  REQUIRE(acts.size() == 1);
  CHECK(*acts[0].action_graph.concept_of(acts[0].action_graph.root) ==
        "move-01");
  CHECK(amr::underspecified_slots(acts[0].action_graph) ==
        std::set<std::string>{"unit-nationality"});

  auto orders = ground(map, acts[0], ctx);
  REQUIRE(orders.size() == 1);
  CHECK(orders[0] ==
        Order{UnitKind::Army, {"RUM", ""}, OrderKind::Move, {"BUL", ""},
              {}, {}});
}

TEST_CASE("the printed underspecified-country graph grounds against state") {
  const Map& map = Map::standard();
  MessageContext ctx =
      ctx_with(map, Power::AUS, Power::ITA,
               {{Power::RUS, UnitKind::Army, {"RUM", ""}},
                {Power::TUR, UnitKind::Army, {"ANK", ""}}});
  CommunicativeAct act;
  act.kind = ActKind::Commitment;
  act.action_graph = amr::parse_graph_text(R"((m / move-01
    :ARG1 (u / unit
      :location (p2 / province :name (n / name :op1 "Rumania")))
    :ARG2 (p3 / province :name (n3 / name :op1 "Bulgaria"))))");
  auto orders = ground(map, act, ctx);
  REQUIRE(orders.size() == 1);
  CHECK(orders[0].at.province == "RUM");
  CHECK(orders[0].dest.province == "BUL");
}

TEST_CASE("NoActorUnit differs from empty-because-illegal") {
  const Map& map = Map::standard();
  MessageContext ctx =
      ctx_with(map, Power::ENG, Power::GER,
               {{Power::RUS, UnitKind::Army, {"RUM", ""}}});

  CommunicativeAct no_unit;
  no_unit.action_graph = amr::parse_graph_text(R"((m / move-01
    :ARG1 (u / unit :mod (c / country :name (n / name :op1 "England")))
    :ARG2 (p / province :name (n2 / name :op1 "Sweden"))))");
  CHECK_THROWS_AS(ground(map, no_unit, ctx), NoActorUnit);

  CommunicativeAct illegal;
  illegal.action_graph = amr::parse_graph_text(R"((m / move-01
    :ARG1 (u / unit :mod (c / country :name (n / name :op1 "Russia")))
    :ARG2 (p / province :name (n2 / name :op1 "Spain"))))");
  CHECK(ground(map, illegal, ctx).empty());
}

TEST_CASE("short answers bind to the open proposal") {
  const Map& map = Map::standard();
  MessageContext eng_to_ger =
      ctx_with(map, Power::ENG, Power::GER,
               {{Power::GER, UnitKind::Fleet, {"SKA", ""}}});
  auto proposals = extract_acts(
      map, "You should move your fleet in SKA to SWE.", eng_to_ger);
  REQUIRE(proposals.size() == 1);
  CHECK(proposals[0].kind == ActKind::Proposal);

  MessageContext reply = ctx_with(map, Power::GER, Power::ENG,
                                  eng_to_ger.state.units);
  reply.open_proposal = proposals[0];
  for (const char* text : {"Sure", "Yes, I agree.", "Sounds good, deal!"}) {
    CAPTURE(text);
    auto acts = extract_acts(map, text, reply);
    if (std::string(text) == "Sounds good, deal!") {
      CHECK(acts.empty());  // interjection must lead the message
      continue;
    }
    REQUIRE(acts.size() == 1);
    CHECK(acts[0].kind == ActKind::Agreement);
    CHECK(acts[0].actor == Power::GER);
    auto orders = ground(map, acts[0], reply);
    REQUIRE(orders.size() == 1);
    CHECK(orders[0].dest.province == "SWE");
  }

  MessageContext no_open = ctx_with(map, Power::GER, Power::ENG, {});
  CHECK(extract_acts(map, "Sure", no_open).empty());
}

TEST_CASE("conditional commitments carry a condition and are marked") {
  const Map& map = Map::standard();
  MessageContext tur_to_ita =
      ctx_with(map, Power::TUR, Power::ITA,
               {{Power::ITA, UnitKind::Army, {"SER", ""}}});
  auto proposals = extract_acts(
      map, "If you retreat from Serbia into Budapest, then I'm in",
      tur_to_ita);
  REQUIRE(proposals.size() == 1);
  CHECK(proposals[0].kind == ActKind::Proposal);
  CHECK(proposals[0].actor == Power::ITA);

  MessageContext reply =
      ctx_with(map, Power::ITA, Power::TUR, tur_to_ita.state.units);
  reply.open_proposal = proposals[0];
  auto acts =
      extract_acts(map, "I will do that if Serbia gets dislodged", reply);
  REQUIRE(acts.size() == 1);
  CHECK(acts[0].conditional);
  CHECK(acts[0].action_graph.first_edge(acts[0].action_graph.root,
                                        ":condition") != nullptr);
}

TEST_CASE("alliance talk produces no grounded acts") {
  const Map& map = Map::standard();
  MessageContext ctx = ctx_with(map, Power::TUR, Power::ITA, {});
  CHECK(extract_acts(map,
                     "Hey Italy! I think the I/T is the strongest alliance "
                     "in the game, would you be interested in working "
                     "together",
                     ctx)
            .empty());
  MessageContext back = ctx_with(map, Power::ITA, Power::TUR, {});
  CHECK(extract_acts(map,
                     "Of course! As long as you don't build too many "
                     "fleets, I'm open to working with you against austria!",
                     back)
            .empty());
}

TEST_CASE("extraction and grounding are deterministic") {
  const Map& map = Map::standard();
  MessageContext ctx =
      ctx_with(map, Power::ENG, Power::GER,
               {{Power::ENG, UnitKind::Fleet, {"NWY", ""}},
                {Power::GER, UnitKind::Fleet, {"SKA", ""}}});
  const std::string text = "I will move my fleet in NWY to SWE.";
  auto a1 = extract_acts(map, text, ctx);
  auto a2 = extract_acts(map, text, ctx);
  CHECK(a1 == a2);
  REQUIRE(a1.size() == 1);
  CHECK(ground(map, a1[0], ctx) == ground(map, a2[0], ctx));
}

TEST_CASE("grounded orders always validate, and forced cases are complete") {
  const Map& map = Map::standard();
  std::mt19937 rng(20240820);
  GameState s = initial_state(map);
  for (int trial = 0; trial < 50; ++trial) {
    // Random unit, random legal move; a fully specified act must ground to
    // exactly the legal moves into that destination province.
    std::uniform_int_distribution<size_t> upick(0, s.units.size() - 1);
    const Unit u = s.units[upick(rng)];
    auto lm = legal_moves(map, s, u);
    std::vector<Order> moves;
    for (const auto& o : lm)
      if (o.kind == OrderKind::Move) moves.push_back(o);
    if (moves.empty()) continue;
    std::uniform_int_distribution<size_t> mpick(0, moves.size() - 1);
    const Order chosen = moves[mpick(rng)];

    MessageContext ctx = ctx_with(map, u.owner,
                                  u.owner == Power::ENG ? Power::GER
                                                        : Power::ENG,
                                  s.units);
    std::string text = "I will move my " +
                       std::string(u.kind == UnitKind::Fleet ? "fleet"
                                                             : "army") +
                       " in " + map.full_name(u.loc.province) + " to " +
                       map.full_name(chosen.dest.province) + ".";
    auto acts = extract_acts(map, text, ctx);
    REQUIRE_MESSAGE(acts.size() == 1, text);
    auto grounded = ground(map, acts[0], ctx);

    // Independent brute-force expectation.
    std::vector<Order> expected;
    for (const auto& o : lm)
      if (o.kind == OrderKind::Move &&
          o.dest.province == chosen.dest.province)
        expected.push_back(o);
    std::sort(expected.begin(), expected.end());
    CHECK_MESSAGE(grounded == expected, text);
    for (const auto& o : grounded)
      CHECK(validate_order(map, s, o, u.owner).ok);
  }
}
