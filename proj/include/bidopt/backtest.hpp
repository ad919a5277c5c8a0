#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bidopt/data_io.hpp"
#include "bidopt/gains.hpp"
#include "bidopt/strategy.hpp"

namespace bidopt {

/// Physical volume to trade, either a constant MW block or a fraction of an
/// exogenous series. Load portfolios are demand side (negative volumes).
struct PortfolioSpec {
  enum class Kind { ConstantMW, FractionOfSeries };
  enum class Series { Wind, Solar, Load };

  Kind kind = Kind::ConstantMW;
  double constant_mw = 1.0;
  bool sell = true;
  Series series = Series::Wind;
  double fraction = 0.01;

  void validate() const;
  Portfolio at(const ExogSeries& exog, DayNumber d, int hour) const;
};

struct BacktestConfig {
  enum class Setting { NewPlayer, Rebidding };
  enum class Model { Naive, Expert, Perfect };

  int window_days = 730;     ///< estimation window D
  int oos_days = 0;          ///< out-of-sample days N (required)
  int scenario_count = 1000; ///< bootstrap trajectories M
  int curve_window = 28;     ///< curve averaging window K
  FeeSchedule fees = FeeSchedule::make(0.05, 0.10);
  ImpactConfig impact;
  RiskConfig risk;           ///< gamma/alpha for the risk-averse strategies
  std::uint64_t seed = 1;
  Setting setting = Setting::NewPlayer;
  Model model = Model::Naive;
  bool perfect_curves = false;
  std::vector<StrategyId> strategies = {StrategyId::TcMin};
  PortfolioSpec portfolio;
  NumericOptions numeric;
  int threads = 0;                 ///< 0 = hardware concurrency
  int bootstrap_resamples = 10000; ///< B for the pairwise gain tests

  void validate() const;
};

/// Lag depth the price models need in front of the estimation window.
inline constexpr int kLeadInDays = 7;

struct CellReport {
  DayNumber day = 0;
  int hour = 0;
  Portfolio volume;
  Vec5 expected{};    ///< model point forecast
  Vec5 realized{};    ///< unimpacted price series entering evaluation
  bool skipped = false;  ///< zero-volume hour, no optimization ran
  std::vector<BidVector> bids;          ///< per strategy
  std::vector<GainBreakdown> breakdown; ///< realized decomposition per strategy
  std::vector<bool> unbounded;          ///< corner-search fallback fired
};

struct StrategySummary {
  StrategyId id;
  AverageGain average;
  std::size_t unbounded_cells = 0;
};

struct MetricsReport {
  double rmse = 0.0;
  double mae = 0.0;
  double crps = 0.0;
  double bias = 0.0;
};

struct PairTest {
  StrategyId a;
  StrategyId b;
  double p_ab = 0.0;  ///< evidence against "A better than B"
  double p_ba = 0.0;
};

struct BacktestResult {
  std::vector<StrategyId> strategies;
  std::vector<CellReport> cells;        ///< row-major over (day, hour)
  std::vector<StrategySummary> summary;
  MetricsReport metrics;
  std::vector<PairTest> tests;
};

/// Rolling-window study: for every out-of-sample (day, hour) cell, re-fits
/// the price model on the trailing window, bootstraps M scenarios, forecasts
/// the curves over K days, solves every configured strategy, and evaluates
/// realized gains against the realized curves. Deterministic given the seed,
/// for any worker count.
BacktestResult run(const BacktestConfig& config, const DataBundle& bundle);

/// Rebidding setting preprocessing: strips the trader's own historical
/// TC-min impact from the price series, yielding the artificial unimpacted
/// series that forecasting then runs on.
PriceHistory rebid_adjust(const PriceHistory& history, const CurveTable& curves,
                          const PortfolioSpec& portfolio, const ExogSeries& exog,
                          const FeeSchedule& fees, const ImpactConfig& impact, int threads = 0);

/// Forecast quality over aligned (scenario set, realized price) cells:
/// RMSE of scenario means, MAE of scenario medians, CRPS via the pinball
/// loss on a 99-quantile grid, and mean bias (forecast minus realized).
MetricsReport metrics(std::span<const ScenarioSet> forecasts, std::span<const Vec5> realized);

/// Paired two-sample bootstrap test on the per-cell gain difference.
/// p_ab is the fraction of resampled mean differences <= 0 (ties count 1/2),
/// i.e. small values speak for "A better than B". Deterministic given seed.
std::pair<double, double> bootstrap_mean_test(std::span<const double> gains_a,
                                              std::span<const double> gains_b, int resamples,
                                              std::uint64_t seed);

/// Report writers (byte-stable CSVs).
void write_reports(const BacktestResult& result, const BacktestConfig& config,
                   const std::filesystem::path& out_dir);

/// Configuration file (key = value lines, '#' comments; unknown keys are
/// errors) plus the data file paths.
struct RunConfig {
  BacktestConfig backtest;
  std::filesystem::path prices;
  std::filesystem::path curves;
  std::filesystem::path exogenous;
  std::filesystem::path fuels;
};

RunConfig load_run_config(const std::filesystem::path& file);
DataBundle load_bundle(const RunConfig& config);

}  // namespace bidopt
