#include "bidopt/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bidopt/impact.hpp"

namespace bidopt {

void FeeSchedule::validate() const {
  for (double t : tau)
    if (!(t >= 0.0)) throw ValidationError("fees must be non-negative");
}

void RiskConfig::validate() const {
  if (!(gamma >= 0.0)) throw ValidationError("risk config: gamma must be >= 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("risk config: alpha must be in (0, 1)");
}

double transaction_cost(double b0, const Portfolio& v, const FeeSchedule& fees) {
  double cost = fees.tau[0] * std::abs(b0);
  for (int i = 0; i < kNumQuarters; ++i)
    cost += 0.25 * fees.tau[i + 1] * std::abs(v.v[i] - b0);
  return cost;
}

namespace {

// Kink locations of the transaction cost function: 0 and the four volumes.
std::vector<double> cost_corners(const Portfolio& v) {
  std::vector<double> c{0.0, v.v[0], v.v[1], v.v[2], v.v[3]};
  std::sort(c.begin(), c.end());
  return c;
}

}  // namespace

double tc_min(const Portfolio& v, const FeeSchedule& fees) {
  // Convex piecewise-linear cost attains its minimum at a kink; scanning the
  // sorted kinks with strict improvement yields the leftmost minimizer.
  double best = 0.0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (double c : cost_corners(v)) {
    const double cost = transaction_cost(c, v, fees);
    if (cost < best_cost) {
      best_cost = cost;
      best = c;
    }
  }
  return best;
}

BidVector expand(double b0, const Portfolio& v) {
  BidVector b;
  b.b[0] = b0;
  for (int i = 0; i < kNumQuarters; ++i) b.b[i + 1] = v.v[i] - b0;
  return b;
}

namespace {

// Maximizes slope*b0 - T(b0). The objective is concave piecewise linear, so
// any maximum sits at a kink; sentinels one unit beyond the extreme kinks
// reveal an unbounded ray.
CornerSolution maximize_linear_minus_cost(double slope, const Portfolio& v,
                                          const FeeSchedule& fees) {
  const auto corners = cost_corners(v);
  const auto value = [&](double b0) { return slope * b0 - transaction_cost(b0, v, fees); };

  double best = corners.front();
  double best_value = -std::numeric_limits<double>::infinity();
  for (double c : corners) {
    const double f = value(c);
    if (f > best_value) {
      best_value = f;
      best = c;
    }
  }
  CornerSolution sol{best, false};
  if (value(corners.back() + 1.0) > best_value) {
    sol = {corners.back(), true};
  } else if (value(corners.front() - 1.0) > best_value) {
    sol = {corners.front(), true};
  }
  return sol;
}

Vec5 scenario_mean(std::span<const Vec5> scenarios) {
  if (scenarios.empty()) throw ValidationError("scenario set is empty");
  Vec5 mean{};
  for (const auto& s : scenarios)
    for (int i = 0; i < kNumMarkets; ++i) mean[i] += s[i];
  for (int i = 0; i < kNumMarkets; ++i) mean[i] /= static_cast<double>(scenarios.size());
  return mean;
}

double quarter_average(const Vec5& p) { return (p[1] + p[2] + p[3] + p[4]) / 4.0; }

}  // namespace

CornerSolution solve_noimp(std::span<const Vec5> scenarios, const Portfolio& v,
                           const FeeSchedule& fees) {
  const Vec5 mean = scenario_mean(scenarios);
  const double arbitrage_slope = mean[0] - quarter_average(mean);
  return maximize_linear_minus_cost(arbitrage_slope, v, fees);
}

QuadraticObjective q_coefficients(std::span<const Vec5> scenarios, const LinearImpact& impact,
                                  const Portfolio& v) {
  const Vec5 mean = scenario_mean(scenarios);
  QuadraticObjective q;
  q.q2 = impact.a[0];
  for (int i = 1; i < kNumMarkets; ++i) {
    const double vi = v.v[i - 1];
    q.q0 += 0.25 * (mean[i] + impact.a[i] * vi) * vi;
    q.q1 -= 0.25 * (mean[i] + 2.0 * impact.a[i] * vi);
    q.q2 += 0.25 * impact.a[i];
  }
  q.q1 += mean[0];
  return q;
}

double solve_linimp(const QuadraticObjective& q, const Portfolio& v, const FeeSchedule& fees) {
  if (q.q2 > 0.0) throw ValidationError("linear-impact objective must have q2 <= 0");
  if (q.q2 == 0.0) {
    // No quadratic term: the corner search applies; clamp on an unbounded ray.
    return maximize_linear_minus_cost(q.q1, v, fees).b0;
  }

  auto corners = cost_corners(v);
  corners.erase(std::unique(corners.begin(), corners.end()), corners.end());
  const auto objective = [&](double b0) {
    return q.q0 + q.q1 * b0 + q.q2 * b0 * b0 - transaction_cost(b0, v, fees);
  };

  double best = 0.0;
  double best_value = -std::numeric_limits<double>::infinity();
  // Pieces of T between consecutive corners, plus the two unbounded tails.
  for (std::size_t piece = 0; piece <= corners.size(); ++piece) {
    const double lo = piece == 0 ? -std::numeric_limits<double>::infinity() : corners[piece - 1];
    const double hi =
        piece == corners.size() ? std::numeric_limits<double>::infinity() : corners[piece];
    // Cost slope inside the piece, read off a strictly interior point.
    const double probe = std::isinf(lo)   ? hi - 1.0
                         : std::isinf(hi) ? lo + 1.0
                                          : 0.5 * (lo + hi);
    double cost_slope = fees.tau[0] * (probe >= 0.0 ? 1.0 : -1.0);
    for (int i = 0; i < kNumQuarters; ++i)
      cost_slope -= 0.25 * fees.tau[i + 1] * (v.v[i] - probe >= 0.0 ? 1.0 : -1.0);
    const double vertex = -(q.q1 - cost_slope) / (2.0 * q.q2);
    const double candidate = std::clamp(vertex, lo, hi);
    const double f = objective(candidate);
    // Candidates are non-decreasing across pieces, so strict improvement
    // keeps the smallest b0 among exact ties.
    if (f > best_value) {
      best_value = f;
      best = candidate;
    }
  }
  return best;
}

double risk_functional(std::span<const double> gains, const RiskConfig& config) {
  if (gains.empty()) throw EmptyGains("risk functional needs at least one gain");
  config.validate();
  const auto count = static_cast<double>(gains.size());

  switch (config.kind) {
    case RiskConfig::Kind::Expectation: {
      return std::accumulate(gains.begin(), gains.end(), 0.0) / count;
    }
    case RiskConfig::Kind::MeanVariance: {
      const double mean = std::accumulate(gains.begin(), gains.end(), 0.0) / count;
      double var = 0.0;
      for (double g : gains) var += (g - mean) * (g - mean);
      var /= count;  // scenarios are the full predictive distribution
      return mean - config.gamma * var;
    }
    case RiskConfig::Kind::VaR:
    case RiskConfig::Kind::CVaR: {
      std::vector<double> sorted(gains.begin(), gains.end());
      std::sort(sorted.begin(), sorted.end());
      // ceil(alpha*M) as an order statistic; the epsilon guards against
      // alpha*M landing a hair above an integer.
      const auto k = static_cast<std::size_t>(
          std::clamp(std::ceil(config.alpha * count - 1e-9), 1.0, count));
      if (config.kind == RiskConfig::Kind::VaR) return sorted[k - 1];
      return std::accumulate(sorted.begin(), sorted.begin() + static_cast<long>(k), 0.0) /
             static_cast<double>(k);
    }
  }
  throw ValidationError("unknown risk functional");
}

double recenter_da(std::vector<Vec5>& scenarios) {
  const Vec5 mean = scenario_mean(scenarios);
  const double shift = quarter_average(mean) - mean[0];
  for (auto& s : scenarios) s[0] += shift;
  return shift;
}

namespace {

struct Objective1D {
  const std::vector<Vec5>& scenarios;
  const std::vector<Vec5>& offsets;
  const ScenarioEvaluator& evaluator;
  const RiskConfig& risk;
  mutable std::vector<double> gains;

  double operator()(double b0) const {
    gains.resize(scenarios.size());
    for (std::size_t m = 0; m < scenarios.size(); ++m)
      gains[m] = evaluator.gain(b0, scenarios[m], offsets[m]);
    return risk_functional(gains, risk);
  }
};

}  // namespace

double solve_numeric(const Portfolio& v, const FeeSchedule& fees, std::vector<Vec5> scenarios,
                     const ScenarioEvaluator& evaluator, const RiskConfig& risk,
                     bool market_efficiency, const NumericOptions& options) {
  fees.validate();  // fees themselves enter through the evaluator's gain function
  if (options.grid_points < 3) throw ValidationError("numeric solver needs >= 3 grid points");
  if (market_efficiency) recenter_da(scenarios);

  std::vector<Vec5> offsets(scenarios.size());
  for (std::size_t m = 0; m < scenarios.size(); ++m) offsets[m] = evaluator.shift(scenarios[m]);

  const Objective1D objective{scenarios, offsets, evaluator, risk, {}};

  double v_lo = 0.0, v_hi = 0.0, v_abs = 0.0;
  for (double x : v.v) {
    v_lo = std::min(v_lo, x);
    v_hi = std::max(v_hi, x);
    v_abs = std::max(v_abs, std::abs(x));
  }
  const double span = std::max(v_abs, 1.0) * options.span_factor;
  const double lo = v_lo - span;
  const double hi = v_hi + span;

  const int n = options.grid_points;
  const double step = (hi - lo) / static_cast<double>(n - 1);
  double best = lo;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const double b0 = lo + step * k;
    const double f = objective(b0);
    if (f > best_value) {
      best_value = f;
      best = b0;
    }
  }

  // Golden-section refinement inside the best bracket.
  constexpr double kInvPhi = 0.6180339887498949;
  double a = std::max(lo, best - step);
  double b = std::min(hi, best + step);
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (b - a > options.tolerance) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = objective(x2);
    }
  }
  const double refined = 0.5 * (a + b);
  return objective(refined) >= best_value ? refined : best;
}

MarketStructure MarketStructure::standard() {
  MarketStructure ms;
  ms.s1 = Eigen::MatrixXd::Ones(4, 1);
  ms.s2 = Eigen::MatrixXd::Identity(4, 4);
  return ms;
}

void MarketStructure::validate() const {
  if (s1.rows() != s2.rows() || s2.rows() != s2.cols())
    throw ValidationError("market structure: S1 and square S2 must share the period count");
  const auto zero_or_one = [](const Eigen::MatrixXd& m) {
    return ((m.array() == 0.0) || (m.array() == 1.0)).all();
  };
  if (!zero_or_one(s1) || !zero_or_one(s2))
    throw ValidationError("market structure: entries must be 0 or 1");
}

Eigen::MatrixXd MarketStructure::stacked() const {
  Eigen::MatrixXd s(s1.cols() + s2.cols(), s1.rows());
  s.topRows(s1.cols()) = s1.transpose();
  s.bottomRows(s2.cols()) = s2.transpose();
  return s;
}

Eigen::VectorXd MarketStructure::weights() const {
  const Eigen::MatrixXd s = stacked();
  return s.rowwise().sum() / static_cast<double>(s.cols());
}

Eigen::VectorXd generalized_expand(const MarketStructure& structure, const Eigen::VectorXd& v,
                                   const Eigen::VectorXd& b1) {
  structure.validate();
  if (v.size() != structure.s1.rows())
    throw ValidationError("generalized expand: volume vector has wrong length");
  if (b1.size() != structure.s1.cols())
    throw ValidationError("generalized expand: first-market bid vector has wrong length");

  Eigen::FullPivLU<Eigen::MatrixXd> lu(structure.s2);
  if (!lu.isInvertible()) throw SingularS2("generalized expand: S2 is singular");

  Eigen::VectorXd b(b1.size() + structure.s2.cols());
  b.head(b1.size()) = b1;
  b.tail(structure.s2.cols()) = lu.solve(v - structure.s1 * b1);
  return b;
}

const std::vector<std::pair<std::string, StrategyId>>& strategy_names() {
  static const std::vector<std::pair<std::string, StrategyId>> names = {
      {"ia_only", StrategyId::IaOnly},
      {"tc_min", StrategyId::TcMin},
      {"e_noimp", StrategyId::ENoImp},
      {"e_linimp", StrategyId::ELinImp},
      {"e_linimpmeff", StrategyId::ELinImpMeff},
      {"e_meff", StrategyId::EMeff},
      {"e", StrategyId::E},
      {"mv", StrategyId::MeanVariance},
      {"var", StrategyId::VaR},
      {"cvar", StrategyId::CVaR},
  };
  return names;
}

StrategyId parse_strategy(const std::string& name) {
  for (const auto& [id, value] : strategy_names())
    if (id == name) return value;
  std::string valid;
  for (const auto& [id, value] : strategy_names()) {
    if (!valid.empty()) valid += ", ";
    valid += id;
  }
  throw ValidationError("unknown strategy '" + name + "'; valid ids: " + valid);
}

std::string strategy_name(StrategyId id) {
  for (const auto& [name, value] : strategy_names())
    if (value == id) return name;
  return "?";
}

}  // namespace bidopt
