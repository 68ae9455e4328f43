#include <iomanip>
#include <sstream>

#include "dip/corpus.hpp"
#include "dip/report.hpp"

namespace dip::report {

namespace {

std::ostringstream with_header() {
  std::ostringstream out;
  out << "# diplo csv schema " << corpus::kSchemaVersion << "\n";
  out << std::fixed << std::setprecision(6);
  return out;
}

}  // namespace

std::string regression_csv(const stats::Fit& fit) {
  std::ostringstream out = with_header();
  out << "term,estimate,se,ci_low,ci_high\n";
  for (const stats::Coefficient& c : fit.coefficients)
    out << c.name << "," << c.estimate << "," << c.se << "," << c.ci_low
        << "," << c.ci_high << "\n";
  return out.str();
}

std::string rates_csv(const stats::RateTable& table) {
  std::ostringstream out = with_header();
  out << "sender_class,receiver_class,numerator,denominator,rate,std\n";
  for (const auto& [key, cell] : table.cells)
    out << stats::actor_class_name(key.first) << ","
        << stats::actor_class_name(key.second) << "," << cell.numerator << ","
        << cell.denominator << "," << cell.rate << "," << cell.std_dev
        << "\n";
  return out.str();
}

std::string persuasion_csv(
    const std::map<std::pair<stats::ActorClass, stats::ActorClass>,
                   stats::PersuasionCell>& cells) {
  std::ostringstream out = with_header();
  out << "sender_class,receiver_class,messages,attempts,successes,"
         "attempt_rate,success_rate\n";
  for (const auto& [key, c] : cells)
    out << stats::actor_class_name(key.first) << ","
        << stats::actor_class_name(key.second) << "," << c.messages << ","
        << c.attempts << "," << c.successes << "," << c.attempt_rate << ","
        << c.success_rate << "\n";
  return out.str();
}

std::string f_by_turn_csv(const std::vector<double>& raw,
                          const std::vector<double>& smoothed) {
  if (raw.size() != smoothed.size())
    throw SchemaMismatch("raw and smoothed series differ in length");
  std::ostringstream out = with_header();
  out << "turn,f,f_smoothed\n";
  for (size_t i = 0; i < raw.size(); ++i)
    out << i << "," << raw[i] << "," << smoothed[i] << "\n";
  return out.str();
}

std::string batch_summary_text(const std::vector<stats::GameSummary>& games) {
  std::ostringstream out;
  out << "# diplo batch summary schema " << corpus::kSchemaVersion << "\n";
  out << games.size() << " game(s)\n";
  std::map<std::string, int> by_level;
  for (const stats::GameSummary& g : games) ++by_level[g.level];
  for (const auto& [level, n] : by_level)
    out << "  " << (level.empty() ? "gunboat-only" : level) << ": " << n
        << " game(s)\n";
  for (const stats::GameSummary& g : games) {
    out << g.game_id << ": ";
    bool first = true;
    for (Power p : kAllPowers) {
      if (!first) out << ", ";
      first = false;
      out << power_code(p) << " " << g.centers.at(p);
    }
    out << ". (";
    first = true;
    for (Power p : g.communicators) {
      if (!first) out << " ";
      first = false;
      out << power_code(p);
    }
    out << ")\n";
  }
  return out.str();
}

}  // namespace dip::report
