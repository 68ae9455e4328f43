#include "dip/map.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace dip {

namespace {

const std::array<std::string, 7> kPowerCodes = {"AUS", "ENG", "FRA", "GER",
                                                "ITA", "RUS", "TUR"};
const std::array<std::string, 7> kPowerNames = {
    "Austria", "England", "France", "Germany", "Italy", "Russia", "Turkey"};

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return s;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

Location parse_loc(const std::string& tok) {
  auto slash = tok.find('/');
  if (slash == std::string::npos) return {upper(tok), ""};
  return {upper(tok.substr(0, slash)), upper(tok.substr(slash + 1))};
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

}  // namespace

const std::string& power_code(Power p) {
  return kPowerCodes[static_cast<size_t>(p)];
}

const std::string& power_name(Power p) {
  return kPowerNames[static_cast<size_t>(p)];
}

std::optional<Power> power_from_code(const std::string& code) {
  std::string u = upper(code);
  for (size_t i = 0; i < kPowerCodes.size(); ++i)
    if (kPowerCodes[i] == u) return static_cast<Power>(i);
  return std::nullopt;
}

std::optional<Power> power_from_name(const std::string& name) {
  std::string l = lower(name);
  for (size_t i = 0; i < kPowerNames.size(); ++i)
    if (lower(kPowerNames[i]) == l) return static_cast<Power>(i);
  return power_from_code(name);
}

Map Map::load_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw MapError("cannot open map file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return load_text(ss.str());
}

Map Map::load_text(const std::string& text) {
  Map m;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    const std::string& kw = toks[0];
    auto bad = [&](const std::string& why) {
      throw MapError("map line " + std::to_string(lineno) + ": " + why);
    };
    if (kw == "map") {
      if (toks.size() >= 2) m.name_ = toks[1];
    } else if (kw == "province") {
      if (toks.size() < 3) bad("province needs code and kind");
      Province p;
      p.code = upper(toks[1]);
      p.full_name = p.code;
      if (toks[2] == "land")
        p.kind = ProvinceKind::Land;
      else if (toks[2] == "sea")
        p.kind = ProvinceKind::Sea;
      else if (toks[2] == "coastal")
        p.kind = ProvinceKind::Coastal;
      else
        bad("unknown province kind " + toks[2]);
      for (size_t i = 3; i < toks.size(); ++i) {
        if (toks[i] == "sc") {
          p.supply_center = true;
        } else if (toks[i].rfind("home:", 0) == 0) {
          auto pw = power_from_code(toks[i].substr(5));
          if (!pw) bad("unknown power in " + toks[i]);
          p.home_of = *pw;
        } else if (toks[i].rfind("coasts:", 0) == 0) {
          std::string list = toks[i].substr(7);
          std::istringstream cs(list);
          std::string c;
          while (std::getline(cs, c, ',')) p.coasts.push_back(upper(c));
        } else {
          bad("unknown attribute " + toks[i]);
        }
      }
      if (m.provinces_.count(p.code)) bad("duplicate province " + p.code);
      m.codes_.push_back(p.code);
      m.provinces_.emplace(p.code, std::move(p));
    } else if (kw == "army" || kw == "fleet") {
      if (toks.size() < 2) bad(kw + " needs a province");
      std::string spec = toks[1];
      if (!spec.empty() && spec.back() == ':') spec.pop_back();
      Location at = parse_loc(spec);
      auto it = m.provinces_.find(at.province);
      if (it == m.provinces_.end()) bad("adjacency before province " + spec);
      for (size_t i = 2; i < toks.size(); ++i) {
        Location to = parse_loc(toks[i]);
        if (kw == "army")
          it->second.army_adj.insert(to.province);
        else
          it->second.fleet_adj[at.coast].insert(to);
      }
    } else if (kw == "name") {
      if (toks.size() < 3) bad("name needs code and text");
      std::string code = toks[1];
      if (!code.empty() && code.back() == ':') code.pop_back();
      code = upper(code);
      auto it = m.provinces_.find(code);
      if (it == m.provinces_.end()) bad("name for unknown province " + code);
      std::string full;
      for (size_t i = 2; i < toks.size(); ++i) {
        if (i > 2) full += ' ';
        full += toks[i];
      }
      it->second.full_name = full;
    } else if (kw == "unit") {
      if (toks.size() != 4) bad("unit needs POWER KIND LOC");
      auto pw = power_from_code(toks[1]);
      if (!pw) bad("unknown power " + toks[1]);
      UnitKind uk;
      if (upper(toks[2]) == "A")
        uk = UnitKind::Army;
      else if (upper(toks[2]) == "F")
        uk = UnitKind::Fleet;
      else
        bad("unit kind must be A or F");
      m.start_units_.push_back({*pw, uk, parse_loc(toks[3])});
    } else {
      bad("unknown keyword " + kw);
    }
  }
  m.build_name_index();
  m.check_consistency();
  return m;
}

const Map& Map::standard() {
  static const Map m = load_file(std::string(DIP_DATA_DIR) +
                                 "/standard_map.txt");
  return m;
}

const Province& Map::province(const std::string& code) const {
  const Province* p = find(code);
  if (!p) throw MapError("unknown province: " + code);
  return *p;
}

const Province* Map::find(const std::string& code) const {
  auto it = provinces_.find(upper(code));
  return it == provinces_.end() ? nullptr : &it->second;
}

int Map::supply_center_total() const {
  int n = 0;
  for (auto& [c, p] : provinces_) n += p.supply_center ? 1 : 0;
  return n;
}

std::vector<std::string> Map::supply_centers() const {
  std::vector<std::string> out;
  for (const auto& c : codes_)
    if (provinces_.at(c).supply_center) out.push_back(c);
  return out;
}

std::vector<std::string> Map::home_centers(Power pw) const {
  std::vector<std::string> out;
  for (const auto& c : codes_) {
    const auto& p = provinces_.at(c);
    if (p.home_of == pw) out.push_back(c);
  }
  return out;
}

std::vector<Location> Map::neighbors(UnitKind kind, const Location& from) const {
  const Province& p = province(from.province);
  std::vector<Location> out;
  if (kind == UnitKind::Army) {
    for (const auto& c : p.army_adj) out.push_back({c, ""});
  } else {
    auto it = p.fleet_adj.find(from.coast);
    if (it != p.fleet_adj.end())
      out.assign(it->second.begin(), it->second.end());
  }
  return out;
}

bool Map::adjacent(UnitKind kind, const Location& from,
                   const Location& to) const {
  for (const auto& n : neighbors(kind, from)) {
    if (n.province != to.province) continue;
    if (to.coast.empty() || n.coast == to.coast) return true;
  }
  return false;
}

bool Map::adjacent_any_coast(UnitKind kind, const std::string& from,
                             const std::string& to) const {
  const Province& p = province(from);
  if (kind == UnitKind::Army) return p.army_adj.count(upper(to)) > 0;
  for (const auto& [coast, adj] : p.fleet_adj)
    for (const auto& n : adj)
      if (n.province == upper(to)) return true;
  return false;
}

bool Map::can_occupy(UnitKind kind, const std::string& code) const {
  const Province& p = province(code);
  if (kind == UnitKind::Army) return p.kind != ProvinceKind::Sea;
  if (p.kind == ProvinceKind::Land) return false;
  return true;
}

std::optional<std::string> Map::resolve_name(const std::string& name) const {
  std::string key = lower(name);
  // collapse punctuation ("St. Petersburg")
  std::string norm;
  for (char c : key)
    if (c != '.') norm += c;
  auto it = name_index_.find(norm);
  if (it != name_index_.end()) return it->second;
  if (auto* p = find(name)) return p->code;
  return std::nullopt;
}

const std::string& Map::full_name(const std::string& code) const {
  return province(code).full_name;
}

void Map::build_name_index() {
  for (auto& [code, p] : provinces_) {
    name_index_[lower(p.full_name)] = code;
    name_index_[lower(code)] = code;
  }
  // Common community aliases.
  if (provinces_.count("STP")) {
    name_index_["stp"] = "STP";
    name_index_["st petersburg"] = "STP";
    name_index_["saint petersburg"] = "STP";
  }
  if (provinces_.count("ECH")) {
    name_index_["eng"] = "ECH";
    name_index_["channel"] = "ECH";
  }
  if (provinces_.count("RUM")) name_index_["romania"] = "RUM";
  if (provinces_.count("LYO")) name_index_["gol"] = "LYO";
  if (provinces_.count("LVN")) name_index_["lvn"] = "LVN";
  if (provinces_.count("NTH")) name_index_["north sea"] = "NTH";
}

void Map::check_consistency() const {
  for (const auto& [code, p] : provinces_) {
    for (const auto& a : p.army_adj) {
      auto it = provinces_.find(a);
      if (it == provinces_.end())
        throw MapError("army adjacency " + code + "->" + a + " undeclared");
      if (!it->second.army_adj.count(code))
        throw MapError("army adjacency " + code + "<->" + a + " asymmetric");
      if (it->second.kind == ProvinceKind::Sea)
        throw MapError("army adjacency into sea: " + code + "->" + a);
    }
    for (const auto& [coast, adj] : p.fleet_adj) {
      for (const auto& to : adj) {
        auto it = provinces_.find(to.province);
        if (it == provinces_.end())
          throw MapError("fleet adjacency " + code + "->" + to.str() +
                         " undeclared");
        if (it->second.kind == ProvinceKind::Land)
          throw MapError("fleet adjacency into land: " + code + "->" +
                         to.str());
        auto back = it->second.fleet_adj.find(to.coast);
        bool ok = back != it->second.fleet_adj.end() &&
                  std::any_of(back->second.begin(), back->second.end(),
                              [&](const Location& l) {
                                return l.province == code && l.coast == coast;
                              });
        if (!ok)
          throw MapError("fleet adjacency " + code +
                         (coast.empty() ? "" : "/" + coast) + "<->" +
                         to.str() + " asymmetric");
      }
    }
  }
}

}  // namespace dip
