#include "dip/order.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <vector>

#include "dip/state.hpp"

namespace dip {

namespace {

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> toks;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      toks.push_back(cur);
      cur.clear();
    }
  };
  for (char ch : text) {
    if (std::isspace(static_cast<unsigned char>(ch))) {
      flush();
    } else if (ch == '-') {
      flush();
      if (!toks.empty() && toks.back() == "-") continue;  // "->" folds to "-"
      toks.push_back("-");
    } else if (ch == '>') {
      // part of "->"
    } else {
      cur += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    }
  }
  flush();
  return toks;
}

[[noreturn]] void malformed(const std::string& text) {
  throw OrderError(OrderError::Code::MalformedOrder,
                   "malformed order: " + text);
}

Location parse_location(const Map& map, const std::string& tok,
                        const std::string& text) {
  Location loc;
  auto slash = tok.find('/');
  if (slash == std::string::npos) {
    loc.province = tok;
  } else {
    loc.province = tok.substr(0, slash);
    loc.coast = tok.substr(slash + 1);
  }
  const Province* p = map.find(loc.province);
  if (!p)
    throw OrderError(OrderError::Code::UnknownProvince,
                     "unknown province '" + loc.province + "' in: " + text);
  if (!loc.coast.empty() &&
      std::find(p->coasts.begin(), p->coasts.end(), loc.coast) ==
          p->coasts.end())
    throw OrderError(OrderError::Code::UnknownProvince,
                     "unknown coast '" + loc.str() + "' in: " + text);
  return loc;
}

std::optional<UnitKind> unit_letter(const std::string& tok) {
  if (tok == "A") return UnitKind::Army;
  if (tok == "F") return UnitKind::Fleet;
  return std::nullopt;
}

}  // namespace

Order parse_order(const Map& map, const std::string& text) {
  return parse_order(map, text, nullptr);
}

Order parse_order(const Map& map, const std::string& text,
                  const GameState* state) {
  auto toks = tokenize(text);
  if (toks.size() < 2) malformed(text);
  size_t i = 0;
  Order o;
  auto uk = unit_letter(toks[i]);
  if (!uk) malformed(text);
  o.unit = *uk;
  ++i;
  o.at = parse_location(map, toks[i++], text);

  if (i == toks.size() || toks[i] == "H") {
    o.kind = OrderKind::Hold;
    if (i != toks.size() && i + 1 != toks.size()) malformed(text);
  } else if (toks[i] == "-") {
    ++i;
    if (i >= toks.size()) malformed(text);
    o.kind = OrderKind::Move;
    o.dest = parse_location(map, toks[i++], text);
    if (i < toks.size() && toks[i] == "VIA") ++i;  // explicit convoy marker
    if (i != toks.size()) malformed(text);
  } else if (toks[i] == "S" || toks[i] == "C") {
    bool convoy = toks[i] == "C";
    ++i;
    if (i >= toks.size()) malformed(text);
    auto tk = unit_letter(toks[i]);
    if (!tk) malformed(text);
    o.target_unit = *tk;
    ++i;
    if (i >= toks.size()) malformed(text);
    o.target_at = parse_location(map, toks[i++], text);
    if (i == toks.size()) {
      if (convoy) malformed(text);
      o.kind = OrderKind::SupportHold;
    } else if (toks[i] == "-") {
      ++i;
      if (i + 1 != toks.size()) malformed(text);
      o.kind = convoy ? OrderKind::Convoy : OrderKind::SupportMove;
      o.dest = parse_location(map, toks[i], text);
    } else {
      malformed(text);
    }
  } else if (toks[i] == "R") {
    ++i;
    if (i + 1 != toks.size()) malformed(text);
    o.kind = OrderKind::Retreat;
    o.dest = parse_location(map, toks[i], text);
  } else if (toks[i] == "D") {
    if (i + 1 != toks.size()) malformed(text);
    o.kind = OrderKind::Disband;
  } else if (toks[i] == "B") {
    if (i + 1 != toks.size()) malformed(text);
    o.kind = OrderKind::Build;
  } else {
    malformed(text);
  }

  if (state && o.kind != OrderKind::Build) {
    const Unit* u = state->unit_at(o.at.province);
    if (!u)
      throw OrderError(OrderError::Code::NoSuchUnit,
                       "no unit at " + o.at.province + " for: " + text);
    // Occupancy wins over the written letter/coast.
    o.unit = u->kind;
    o.at = u->loc;
    if (o.kind == OrderKind::SupportHold || o.kind == OrderKind::SupportMove ||
        o.kind == OrderKind::Convoy) {
      if (const Unit* t = state->unit_at(o.target_at.province)) {
        o.target_unit = t->kind;
        o.target_at = t->loc;
      }
    }
  }
  return o;
}

std::string render_order(const Order& o) {
  auto letter = [](UnitKind k) { return k == UnitKind::Army ? "A" : "F"; };
  std::ostringstream os;
  os << letter(o.unit) << ' ' << o.at.str();
  switch (o.kind) {
    case OrderKind::Hold:
      os << " H";
      break;
    case OrderKind::Move:
      os << " - " << o.dest.str();
      break;
    case OrderKind::SupportHold:
      os << " S " << letter(o.target_unit) << ' ' << o.target_at.str();
      break;
    case OrderKind::SupportMove:
      os << " S " << letter(o.target_unit) << ' ' << o.target_at.str() << " - "
         << o.dest.str();
      break;
    case OrderKind::Convoy:
      os << " C " << letter(o.target_unit) << ' ' << o.target_at.str() << " - "
         << o.dest.str();
      break;
    case OrderKind::Retreat:
      os << " R " << o.dest.str();
      break;
    case OrderKind::Disband:
      os << " D";
      break;
    case OrderKind::Build:
      os << " B";
      break;
  }
  return os.str();
}

Order coast_normalized(const Order& o) {
  Order n = o;
  n.at.coast.clear();
  n.dest.coast.clear();
  n.target_at.coast.clear();
  return n;
}

}  // namespace dip
