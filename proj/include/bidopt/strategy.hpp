#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bidopt/common.hpp"

namespace bidopt {

/// MW-to-MWh weights of the five auctions: the DA product covers the full
/// hour, each IA product a quarter of it.
inline constexpr Vec5 kHourWeights = {1.0, 0.25, 0.25, 0.25, 0.25};

struct FeeSchedule {
  Vec5 tau = {0.05, 0.10, 0.10, 0.10, 0.10};

  static FeeSchedule make(double tau_da, double tau_ia) {
    return {{tau_da, tau_ia, tau_ia, tau_ia, tau_ia}};
  }
  void validate() const;
};

/// Physical volume to cover, MW per quarter hour; positive sells, negative buys.
struct Portfolio {
  Vec4 v{};

  double mean_level() const { return (v[0] + v[1] + v[2] + v[3]) / 4.0; }
};

/// Signed MW bids for the five auctions.
struct BidVector {
  Vec5 b{};
};

struct RiskConfig {
  enum class Kind { Expectation, MeanVariance, VaR, CVaR };
  Kind kind = Kind::Expectation;
  double gamma = 0.25;  ///< mean-variance risk aversion
  double alpha = 0.05;  ///< tail probability for VaR/CVaR

  void validate() const;
};

/// Coefficients of the quadratic part of the expected gain under the linear
/// impact assumption: Q(b0) = q0 + q1*b0 + q2*b0^2 with q2 <= 0.
struct QuadraticObjective {
  double q0 = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
};

struct LinearImpact;  // impact.hpp

/// Total fees of the constrained bid (b0, v - b0): tau0|b0| + sum tau_i|v_i - b0|/4.
/// Convex and piecewise linear in b0.
double transaction_cost(double b0, const Portfolio& v, const FeeSchedule& fees);

/// Smallest global minimizer of transaction_cost: the leftmost weighted
/// median of (0, v).
double tc_min(const Portfolio& v, const FeeSchedule& fees);

/// Full bid vector induced by the DA bid under the imbalance constraint.
BidVector expand(double b0, const Portfolio& v);

/// Result of a piecewise-linear maximization that may lack a global optimum.
/// When unbounded, b0 holds the corner adjacent to the runaway direction.
struct CornerSolution {
  double b0 = 0.0;
  bool unbounded = false;
};

/// Risk-neutral optimum under the no-impact assumption: maximizes the
/// mean DA-IA arbitrage slope times b0 minus transaction costs over the
/// corners of the cost function (plus sentinels to detect unboundedness).
CornerSolution solve_noimp(std::span<const Vec5> scenarios, const Portfolio& v,
                           const FeeSchedule& fees);

/// Quadratic expected-gain coefficients from scenario means and linear
/// impact slopes.
QuadraticObjective q_coefficients(std::span<const Vec5> scenarios, const LinearImpact& impact,
                                  const Portfolio& v);

/// Exact maximizer of Q(b0) - T(b0): solves the vertex of each linear piece
/// of T, clips to the piece, and takes the global best (smallest b0 on
/// ties). Requires q2 <= 0; for q2 == 0 falls back to the corner search and
/// clamps when unbounded.
double solve_linimp(const QuadraticObjective& q, const Portfolio& v, const FeeSchedule& fees);

/// Scenario risk functional: mean, mean minus gamma times population
/// variance, the ceil(alpha*M)-th order statistic, or the mean of the
/// lowest ceil(alpha*M) gains.
double risk_functional(std::span<const double> gains, const RiskConfig& config);

/// Shifts every scenario's DA price by one constant so that the sample mean
/// DA price equals the sample mean quarter-average IA price. Returns the
/// applied shift.
double recenter_da(std::vector<Vec5>& scenarios);

/// Scenario-gain callbacks plugged into the numeric optimizer. `shift` maps
/// one scenario's prices to volume offsets (cached across b0 evaluations);
/// `gain` prices the expanded bid within that scenario.
struct ScenarioEvaluator {
  std::function<Vec5(const Vec5& prices)> shift;
  std::function<double(double b0, const Vec5& prices, const Vec5& xi)> gain;
};

struct NumericOptions {
  int grid_points = 201;
  double span_factor = 3.0;
  double tolerance = 1e-4;  ///< MW
};

/// One-dimensional maximization of the risk functional over b0: coarse
/// deterministic grid over [min(0,v)-span, max(0,v)+span], then
/// golden-section refinement of the best bracket. With market_efficiency the
/// scenarios' DA prices are recentered first (zero sample arbitrage).
double solve_numeric(const Portfolio& v, const FeeSchedule& fees, std::vector<Vec5> scenarios,
                     const ScenarioEvaluator& evaluator, const RiskConfig& risk,
                     bool market_efficiency, const NumericOptions& options = {});

/// Summation-matrix blocks for two consecutive markets trading the same
/// delivery periods: S1 maps first-market products to periods, S2 (square,
/// invertible) maps second-market products. The default DA/IA structure is
/// S1 = ones(4,1), S2 = I4.
struct MarketStructure {
  Eigen::MatrixXd s1;
  Eigen::MatrixXd s2;

  static MarketStructure standard();
  /// Stacked matrix S with one row per market, one column per period.
  Eigen::MatrixXd stacked() const;
  /// Delivery-period length weights: row sums of S over the period count.
  Eigen::VectorXd weights() const;
  void validate() const;
};

/// Completes the bid vector from the first-market bids: b = (b1, S2^-1 (v - S1 b1)),
/// which satisfies S' b = v exactly. Throws SingularS2.
Eigen::VectorXd generalized_expand(const MarketStructure& structure, const Eigen::VectorXd& v,
                                   const Eigen::VectorXd& b1);

/// Strategy identifiers accepted by the CLI and the backtest config.
enum class StrategyId {
  IaOnly,
  TcMin,
  ENoImp,
  ELinImp,
  ELinImpMeff,
  EMeff,
  E,
  MeanVariance,
  VaR,
  CVaR,
};

const std::vector<std::pair<std::string, StrategyId>>& strategy_names();
StrategyId parse_strategy(const std::string& name);
std::string strategy_name(StrategyId id);

}  // namespace bidopt
