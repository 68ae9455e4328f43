#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dip/stats.hpp"

namespace dip::report {

struct SchemaMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All emitters are deterministic: same inputs, byte-identical output. Every
// file starts with a schema-version comment line.

std::string regression_csv(const stats::Fit& fit);

std::string rates_csv(const stats::RateTable& table);

std::string persuasion_csv(
    const std::map<std::pair<stats::ActorClass, stats::ActorClass>,
                   stats::PersuasionCell>& cells);

// raw and smoothed must have equal length (throws SchemaMismatch).
std::string f_by_turn_csv(const std::vector<double>& raw,
                          const std::vector<double>& smoothed);

std::string batch_summary_text(const std::vector<stats::GameSummary>& games);

}  // namespace dip::report
