#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dip/sim.hpp"

namespace dip::stats {

struct RankDeficient : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Coefficient {
  std::string name;
  double estimate = 0.0;
  double se = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct Fit {
  std::vector<Coefficient> coefficients;
  int df = 0;
  double sigma2 = 0.0;  // residual variance estimate
  std::vector<double> residuals;
};

// Least squares via normal equations with pivoted Gaussian elimination.
// 95% CIs use the exact Student t quantile. `robust` switches the SEs to the
// heteroskedasticity-consistent (HC1) form.
Fit ols_fit(const std::vector<std::string>& names,
            const std::vector<std::vector<double>>& X,
            const std::vector<double>& y, bool robust = false);

// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

// Student t quantile at probability p, by numeric inversion of the
// regularized incomplete beta function to 1e-8.
double t_quantile(double p, int df);

// One record parsed from an Appendix-style batch summary line, e.g.
// "AUS 0, ENG 0, FRA 4, GER 10, ITA 5, RUS 6, TUR 9. (FRA GER TUR)".
struct GameSummary {
  std::string game_id;
  std::string level;  // comm level shared by the communicative powers
  std::map<Power, int> centers;
  std::vector<Power> communicators;
};

struct SummaryParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

GameSummary parse_summary_line(const std::string& line);

GameSummary summarize(const sim::GameLog& log);

// Supply-center regression over a batch: one row per (game, power); power
// dummies with RUS as baseline, per-power comm-level dummies with
// random_corpus as baseline (non-communicative powers count as gunboat).
Fit sc_regression(const std::vector<GameSummary>& games);

enum class ActorClass { Human, Agent };

const std::string& actor_class_name(ActorClass c);

// One message with its detector outcomes, classed by interlocutor type.
struct ClassifiedMessage {
  std::string game_id;
  ActorClass sender{};
  ActorClass receiver{};
  bool event = false;    // e.g. broken commitment or perceived lie
  bool attempt = false;  // persuasion attempt
  bool success = false;  // persuasion success
};

struct RateCell {
  long long numerator = 0;
  long long denominator = 0;
  double rate = 0.0;     // numerator / denominator; 0/0 -> 0
  double std_dev = 0.0;  // sample std over per-game rates
};

struct RateTable {
  std::map<std::pair<ActorClass, ActorClass>, RateCell> cells;
};

RateTable rate_table(const std::vector<ClassifiedMessage>& messages);

struct PersuasionCell {
  long long messages = 0;
  long long attempts = 0;
  long long successes = 0;
  double attempt_rate = 0.0;  // attempts / messages
  double success_rate = 0.0;  // successes / attempts; 0 attempts -> 0
};

std::map<std::pair<ActorClass, ActorClass>, PersuasionCell>
persuasion_summary(const std::vector<ClassifiedMessage>& messages);

// One per-turn humanity guess about an opposing power.
struct IdentityGuess {
  int turn = 0;  // 0-based movement-turn index
  bool guessed_agent = false;
  bool is_agent = false;
};

// Per-turn F over (guess = agent) vs truth; turns with no guesses score 0.
std::vector<double> f_by_turn(const std::vector<IdentityGuess>& guesses,
                              int turns);

// Tricube-weighted local linear fit evaluated at each x; span is the fraction
// of points in each local window.
std::vector<double> loess_smooth(const std::vector<double>& x,
                                 const std::vector<double>& y,
                                 double span = 0.75);

}  // namespace dip::stats
