#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace dip {

enum class Power { AUS, ENG, FRA, GER, ITA, RUS, TUR };

constexpr std::array<Power, 7> kAllPowers = {
    Power::AUS, Power::ENG, Power::FRA, Power::GER,
    Power::ITA, Power::RUS, Power::TUR};

const std::string& power_code(Power p);
const std::string& power_name(Power p);  // "Austria", "England", ...
std::optional<Power> power_from_code(const std::string& code);
std::optional<Power> power_from_name(const std::string& name);

enum class ProvinceKind { Land, Sea, Coastal };
enum class UnitKind { Army, Fleet };

// Province location plus optional named coast ("NC", "SC", "EC").
struct Location {
  std::string province;
  std::string coast;

  bool operator==(const Location&) const = default;
  auto operator<=>(const Location&) const = default;
  std::string str() const {
    return coast.empty() ? province : province + "/" + coast;
  }
};

struct Unit {
  Power owner{};
  UnitKind kind{};
  Location loc;

  bool operator==(const Unit&) const = default;
  auto operator<=>(const Unit&) const = default;
};

struct Province {
  std::string code;
  std::string full_name;
  ProvinceKind kind{};
  bool supply_center = false;
  std::optional<Power> home_of;
  std::vector<std::string> coasts;  // empty for single-coast provinces
  std::set<std::string> army_adj;   // province codes
  // fleet adjacency keyed by coast ("" for the default coast); values are
  // Location endpoints so coastal qualifiers survive.
  std::map<std::string, std::set<Location>> fleet_adj;
};

class MapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Immutable after load; shared freely across threads.
class Map {
 public:
  static Map load_file(const std::string& path);
  static Map load_text(const std::string& text);
  static const Map& standard();  // bundled standard map

  const Province& province(const std::string& code) const;
  const Province* find(const std::string& code) const;
  bool has(const std::string& code) const { return find(code) != nullptr; }
  const std::vector<std::string>& codes() const { return codes_; }
  const std::vector<Unit>& start_units() const { return start_units_; }
  const std::string& name() const { return name_; }

  int supply_center_total() const;
  std::vector<std::string> supply_centers() const;
  std::vector<std::string> home_centers(Power p) const;

  // Movement adjacency for a unit kind. `from.coast` selects the coast for
  // fleets in multi-coast provinces. Results carry coasts where they matter.
  std::vector<Location> neighbors(UnitKind kind, const Location& from) const;
  bool adjacent(UnitKind kind, const Location& from, const Location& to) const;
  // Coast-insensitive adjacency: true if any coast pairing works.
  bool adjacent_any_coast(UnitKind kind, const std::string& from,
                          const std::string& to) const;

  bool can_occupy(UnitKind kind, const std::string& province_code) const;

  // Province-name lookup ("Sweden" -> SWE), case-insensitive; also accepts
  // common aliases ("StP", "St Petersburg").
  std::optional<std::string> resolve_name(const std::string& name) const;
  const std::string& full_name(const std::string& code) const;

 private:
  std::string name_ = "unnamed";
  std::map<std::string, Province> provinces_;
  std::vector<std::string> codes_;
  std::vector<Unit> start_units_;
  std::map<std::string, std::string> name_index_;  // lowercased name -> code
  void build_name_index();
  void check_consistency() const;
};

}  // namespace dip
