#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bidopt/common.hpp"
#include "bidopt/dates.hpp"

namespace bidopt {

/// Unimpacted clearing prices per (day, hour) cell, five markets each.
/// Coverage is contiguous: `days` consecutive days starting at `start`,
/// hours 1..24.
class PriceHistory {
 public:
  PriceHistory() = default;
  PriceHistory(DayNumber start, int days)
      : start_(start), days_(days), rows_(static_cast<std::size_t>(days) * 24) {}

  DayNumber start() const { return start_; }
  DayNumber end() const { return start_ + days_; }  ///< one past the last day
  int days() const { return days_; }

  bool covers(DayNumber d) const { return d >= start_ && d < end(); }

  const Vec5& at(DayNumber d, int hour) const { return rows_[index(d, hour)]; }
  void set(DayNumber d, int hour, const Vec5& p) { rows_[index(d, hour)] = p; }

 private:
  std::size_t index(DayNumber d, int hour) const {
    if (!covers(d) || hour < 1 || hour > 24)
      throw MissingHistory("no price for day " + format_date(d) + " hour " +
                           std::to_string(hour));
    return static_cast<std::size_t>(d - start_) * 24 + static_cast<std::size_t>(hour - 1);
  }

  DayNumber start_ = 0;
  int days_ = 0;
  std::vector<Vec5> rows_;
};

/// Yesterday's prices on Tue-Fri deliveries, last week's on Mon/Sat/Sun.
Vec5 naive_forecast(const PriceHistory& history, DayNumber d, int hour);

inline constexpr int kNumRegressors = 21;

/// One estimation/forecast row of the expert model. The day-of-week dummies
/// span the intercept, so no separate constant is used.
struct FeatureRow {
  Vec5 lag1{};       ///< prices of d-1, same hour
  Vec5 lag2{};       ///< prices of d-2, same hour
  Vec5 lag7{};       ///< prices of d-7, same hour
  Vec5 last_hour{};  ///< prices of d-1, hour 24
  Vec5 prev_min{};   ///< per-market minimum over d-1's 24 hours
  Vec5 prev_max{};   ///< per-market maximum over d-1's 24 hours
  std::array<double, 7> dow{};  ///< one-hot day of week, index 0 = Monday
  double load = 0.0, solar = 0.0, wind_on = 0.0, wind_off = 0.0;  ///< day-ahead forecasts, MW
  double eua = 0.0, coal = 0.0, gas = 0.0, oil = 0.0;             ///< fuel prices, lag 2 days

  /// Regressors of one market in the fixed estimation layout.
  std::array<double, kNumRegressors> regressors(int market) const;
};

/// Per-market least-squares coefficients plus the in-sample residual store
/// feeding the scenario bootstrap.
struct ExpertFit {
  std::array<Eigen::VectorXd, 5> beta;  ///< kNumRegressors coefficients per market
  std::vector<Vec5> residuals;          ///< observed minus fitted, one row per window day
};

/// Ordinary least squares per market over the estimation window. Rows and
/// targets must be aligned. Rank-deficient designs fall back to the
/// minimum-norm solution (complete orthogonal decomposition), so duplicated
/// regressors do not change fitted values. Throws WindowTooShort when there
/// are fewer rows than regressors.
ExpertFit fit_expert(std::span<const FeatureRow> rows, std::span<const Vec5> targets);

Vec5 expert_forecast(const ExpertFit& fit, const FeatureRow& row);

/// M joint price trajectories for one (day, hour) cell.
struct ScenarioSet {
  std::vector<Vec5> scenarios;
  std::uint64_t seed = 0;
};

/// Expected price plus residual rows drawn jointly (one row index per
/// scenario across all five markets, preserving cross-market dependence),
/// uniformly with replacement. Deterministic given the seed.
ScenarioSet bootstrap_scenarios(const Vec5& expected, std::span<const Vec5> residuals,
                                std::size_t count, std::uint64_t seed);

}  // namespace bidopt
