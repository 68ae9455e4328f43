#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>

#include "dip/stats.hpp"

namespace dip::stats {

namespace {

// Solve the symmetric system A w = b with partial pivoting; throws
// RankDeficient when a pivot collapses.
std::vector<double> solve(std::vector<std::vector<double>> A,
                          std::vector<double> b) {
  const size_t n = A.size();
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    for (size_t r = col + 1; r < n; ++r)
      if (std::fabs(A[r][col]) > std::fabs(A[pivot][col])) pivot = r;
    if (std::fabs(A[pivot][col]) < 1e-10)
      throw RankDeficient("design matrix is rank deficient");
    std::swap(A[col], A[pivot]);
    std::swap(b[col], b[pivot]);
    for (size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = A[r][col] / A[col][col];
      for (size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (size_t i = 0; i < n; ++i) x[i] = b[i] / A[i][i];
  return x;
}

// Inverse of (X'X) by solving against unit vectors; reuses the pivoted solver.
std::vector<std::vector<double>> invert(
    const std::vector<std::vector<double>>& A) {
  const size_t n = A.size();
  std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
  for (size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    std::vector<double> col = solve(A, e);
    for (size_t i = 0; i < n; ++i) inv[i][j] = col[i];
  }
  return inv;
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Continued fraction for the regularized incomplete beta (Lentz's method).
double beta_cf(double a, double b, double x) {
  const double tiny = 1e-30;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-14) break;
  }
  return h;
}

double t_cdf(double t, int df) {
  double x = df / (df + t * t);
  double tail = 0.5 * incomplete_beta(df / 2.0, 0.5, x);
  return t >= 0.0 ? 1.0 - tail : tail;
}

Power power_at(const std::string& code) {
  for (Power p : kAllPowers)
    if (power_code(p) == code) return p;
  throw SummaryParseError("unknown power code: " + code);
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / v.size();
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double front =
      std::exp(a * std::log(x) + b * std::log(1.0 - x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - std::exp(b * std::log(1.0 - x) + a * std::log(x) -
                        log_beta(b, a)) *
                   beta_cf(b, a, 1.0 - x) / b;
}

double t_quantile(double p, int df) {
  if (p <= 0.0 || p >= 1.0)
    throw std::invalid_argument("t_quantile: p must lie in (0, 1)");
  double lo = -1e3, hi = 1e3;
  while (hi - lo > 1e-8) {
    double mid = 0.5 * (lo + hi);
    if (t_cdf(mid, df) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

Fit ols_fit(const std::vector<std::string>& names,
            const std::vector<std::vector<double>>& X,
            const std::vector<double>& y, bool robust) {
  const size_t n = X.size();
  const size_t p = names.size();
  if (n != y.size() || n == 0 || X[0].size() != p)
    throw std::invalid_argument("ols_fit: inconsistent dimensions");
  if (n < p + 2) throw RankDeficient("too few rows for the design");

  std::vector<std::vector<double>> xtx(p, std::vector<double>(p, 0.0));
  std::vector<double> xty(p, 0.0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t a = 0; a < p; ++a) {
      xty[a] += X[i][a] * y[i];
      for (size_t b = 0; b < p; ++b) xtx[a][b] += X[i][a] * X[i][b];
    }
  }

  std::vector<double> beta = solve(xtx, xty);
  auto inv = invert(xtx);

  Fit fit;
  fit.residuals.resize(n);
  double rss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double pred = 0.0;
    for (size_t a = 0; a < p; ++a) pred += X[i][a] * beta[a];
    fit.residuals[i] = y[i] - pred;
    rss += fit.residuals[i] * fit.residuals[i];
  }
  fit.df = static_cast<int>(n - p);
  fit.sigma2 = rss / fit.df;
  double tq = t_quantile(0.975, fit.df);

  std::vector<double> var(p);
  if (!robust) {
    for (size_t a = 0; a < p; ++a) var[a] = fit.sigma2 * inv[a][a];
  } else {
    // HC1 sandwich: (X'X)^-1 X' diag(e^2) X (X'X)^-1 scaled by n/(n-p).
    std::vector<std::vector<double>> meat(p, std::vector<double>(p, 0.0));
    for (size_t i = 0; i < n; ++i) {
      double e2 = fit.residuals[i] * fit.residuals[i];
      for (size_t a = 0; a < p; ++a)
        for (size_t b = 0; b < p; ++b)
          meat[a][b] += e2 * X[i][a] * X[i][b];
    }
    double scale = static_cast<double>(n) / fit.df;
    for (size_t a = 0; a < p; ++a) {
      double v = 0.0;
      for (size_t b = 0; b < p; ++b)
        for (size_t c = 0; c < p; ++c)
          v += inv[a][b] * meat[b][c] * inv[c][a];
      var[a] = scale * v;
    }
  }

  for (size_t a = 0; a < p; ++a) {
    Coefficient c;
    c.name = names[a];
    c.estimate = beta[a];
    c.se = std::sqrt(std::max(var[a], 0.0));
    c.ci_low = c.estimate - tq * c.se;
    c.ci_high = c.estimate + tq * c.se;
    fit.coefficients.push_back(c);
  }
  return fit;
}

GameSummary parse_summary_line(const std::string& line) {
  static const std::regex pattern(
      R"(^\s*([A-Z]{3} -?\d+(?:, [A-Z]{3} -?\d+){6})\. \(([A-Z]{3}(?: [A-Z]{3})*)\)\s*$)");
  std::smatch m;
  if (!std::regex_match(line, m, pattern))
    throw SummaryParseError("unrecognized summary line: " + line);
  GameSummary s;
  static const std::regex cell(R"(([A-Z]{3}) (-?\d+))");
  std::string scores = m[1];
  for (auto it = std::sregex_iterator(scores.begin(), scores.end(), cell);
       it != std::sregex_iterator(); ++it)
    s.centers[power_at((*it)[1])] = std::stoi((*it)[2]);
  if (s.centers.size() != 7)
    throw SummaryParseError("summary line must score all seven powers");
  std::istringstream comm(m[2]);
  std::string code;
  while (comm >> code) s.communicators.push_back(power_at(code));
  return s;
}

GameSummary summarize(const sim::GameLog& log) {
  GameSummary s;
  s.game_id = log.game_id;
  for (Power p : kAllPowers) {
    s.centers[p] = supply_center_count(log.final_state, p);
    if (log.config.levels.at(p) != sim::CommLevel::Gunboat) {
      s.communicators.push_back(p);
      s.level = sim::comm_level_name(log.config.levels.at(p));
    }
  }
  return s;
}

Fit sc_regression(const std::vector<GameSummary>& games) {
  // Which non-baseline levels appear anywhere in the batch. Non-communicative
  // (gunboat) rows share the baseline with random_corpus: neither carries
  // strategic content, and a separate gunboat dummy would be collinear with
  // the intercept in batches without random_corpus games.
  std::vector<std::string> levels;
  auto level_of = [](const GameSummary& g, Power p) {
    bool comm = std::find(g.communicators.begin(), g.communicators.end(),
                          p) != g.communicators.end();
    return comm ? g.level : std::string();
  };
  for (const GameSummary& g : games)
    for (Power p : kAllPowers) {
      std::string l = level_of(g, p);
      if (!l.empty() && l != "random_corpus" &&
          std::find(levels.begin(), levels.end(), l) == levels.end())
        levels.push_back(l);
    }
  std::sort(levels.begin(), levels.end());

  std::vector<std::string> names = {"intercept"};
  for (Power p : kAllPowers)
    if (p != Power::RUS) names.push_back(power_code(p));
  names.insert(names.end(), levels.begin(), levels.end());

  std::vector<std::vector<double>> X;
  std::vector<double> y;
  for (const GameSummary& g : games)
    for (Power p : kAllPowers) {
      std::vector<double> row = {1.0};
      for (Power q : kAllPowers)
        if (q != Power::RUS) row.push_back(p == q ? 1.0 : 0.0);
      std::string l = level_of(g, p);
      for (const std::string& lv : levels) row.push_back(l == lv ? 1.0 : 0.0);
      X.push_back(std::move(row));
      y.push_back(g.centers.at(p));
    }
  return ols_fit(names, X, y);
}

const std::string& actor_class_name(ActorClass c) {
  static const std::string human = "human", agent = "agent";
  return c == ActorClass::Human ? human : agent;
}

RateTable rate_table(const std::vector<ClassifiedMessage>& messages) {
  RateTable table;
  // Per-cell, per-game tallies for the std over per-game rates.
  std::map<std::pair<ActorClass, ActorClass>,
           std::map<std::string, std::pair<long long, long long>>>
      per_game;
  for (const ClassifiedMessage& m : messages) {
    auto key = std::make_pair(m.sender, m.receiver);
    RateCell& cell = table.cells[key];
    ++cell.denominator;
    if (m.event) ++cell.numerator;
    auto& g = per_game[key][m.game_id];
    ++g.second;
    if (m.event) ++g.first;
  }
  for (auto& [key, cell] : table.cells) {
    cell.rate = cell.denominator
                    ? static_cast<double>(cell.numerator) / cell.denominator
                    : 0.0;
    std::vector<double> rates;
    for (const auto& [game, tally] : per_game[key])
      if (tally.second)
        rates.push_back(static_cast<double>(tally.first) / tally.second);
    if (rates.size() > 1) {
      double m = mean(rates), ss = 0.0;
      for (double r : rates) ss += (r - m) * (r - m);
      cell.std_dev = std::sqrt(ss / (rates.size() - 1));
    }
  }
  return table;
}

std::map<std::pair<ActorClass, ActorClass>, PersuasionCell>
persuasion_summary(const std::vector<ClassifiedMessage>& messages) {
  std::map<std::pair<ActorClass, ActorClass>, PersuasionCell> out;
  for (const ClassifiedMessage& m : messages) {
    PersuasionCell& c = out[{m.sender, m.receiver}];
    ++c.messages;
    if (m.attempt) ++c.attempts;
    if (m.success) ++c.successes;
  }
  for (auto& [key, c] : out) {
    c.attempt_rate =
        c.messages ? static_cast<double>(c.attempts) / c.messages : 0.0;
    c.success_rate =
        c.attempts ? static_cast<double>(c.successes) / c.attempts : 0.0;
  }
  return out;
}

std::vector<double> f_by_turn(const std::vector<IdentityGuess>& guesses,
                              int turns) {
  std::vector<double> f(turns, 0.0);
  for (int t = 0; t < turns; ++t) {
    long long tp = 0, fp = 0, fn = 0;
    for (const IdentityGuess& g : guesses) {
      if (g.turn != t) continue;
      if (g.guessed_agent && g.is_agent) ++tp;
      else if (g.guessed_agent && !g.is_agent) ++fp;
      else if (!g.guessed_agent && g.is_agent) ++fn;
    }
    if (tp > 0)
      f[t] = 2.0 * tp / (2.0 * tp + fp + fn);
  }
  return f;
}

std::vector<double> loess_smooth(const std::vector<double>& x,
                                 const std::vector<double>& y,
                                 double span) {
  const size_t n = x.size();
  if (n != y.size()) throw std::invalid_argument("loess: length mismatch");
  std::vector<double> out(n, 0.0);
  size_t k = std::max<size_t>(
      2, static_cast<size_t>(std::ceil(span * static_cast<double>(n))));
  k = std::min(k, n);
  for (size_t i = 0; i < n; ++i) {
    // k nearest neighbors of x[i] by distance.
    std::vector<size_t> idx(n);
    for (size_t j = 0; j < n; ++j) idx[j] = j;
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
      return std::fabs(x[a] - x[i]) < std::fabs(x[b] - x[i]);
    });
    idx.resize(k);
    double dmax = 0.0;
    for (size_t j : idx) dmax = std::max(dmax, std::fabs(x[j] - x[i]));
    if (dmax == 0.0) dmax = 1.0;
    // Weighted linear fit in (x - x[i]).
    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    for (size_t j : idx) {
      double d = std::min(std::fabs(x[j] - x[i]) / dmax, 1.0);
      double w = std::pow(1.0 - d * d * d, 3.0);  // tricube
      double dx = x[j] - x[i];
      sw += w;
      swx += w * dx;
      swy += w * y[j];
      swxx += w * dx * dx;
      swxy += w * dx * y[j];
    }
    double det = sw * swxx - swx * swx;
    if (std::fabs(det) < 1e-12) {
      out[i] = sw > 0 ? swy / sw : y[i];
    } else {
      // Intercept of the local fit is the value at x[i].
      out[i] = (swxx * swy - swx * swxy) / det;
    }
  }
  return out;
}

}  // namespace dip::stats
