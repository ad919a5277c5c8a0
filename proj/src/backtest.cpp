#include "bidopt/backtest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <numeric>
#include <thread>

#include "bidopt/rng.hpp"

namespace bidopt {

void PortfolioSpec::validate() const {
  if (kind == Kind::ConstantMW) {
    if (!(constant_mw >= 0.0)) throw ValidationError("portfolio: constant MW must be >= 0");
  } else {
    if (!(fraction > 0.0)) throw ValidationError("portfolio: fraction must be positive");
  }
}

Portfolio PortfolioSpec::at(const ExogSeries& exog, DayNumber d, int hour) const {
  Portfolio p;
  double level = 0.0;
  switch (kind) {
    case Kind::ConstantMW:
      level = sell ? constant_mw : -constant_mw;
      break;
    case Kind::FractionOfSeries: {
      const ExogRow& row = exog.at(d, hour);
      switch (series) {
        case Series::Wind:
          level = fraction * (row.wind_on + row.wind_off);
          break;
        case Series::Solar:
          level = fraction * row.solar;
          break;
        case Series::Load:
          level = -fraction * row.load;  // consumption is bought
          break;
      }
      break;
    }
  }
  p.v = {level, level, level, level};
  return p;
}

void BacktestConfig::validate() const {
  if (oos_days < 1) throw ValidationError("backtest: oos_days must be >= 1");
  if (scenario_count < 1) throw ValidationError("backtest: scenarios must be >= 1");
  if (curve_window < 1) throw ValidationError("backtest: curve_window must be >= 1");
  if (window_days < kLeadInDays + 1)
    throw ValidationError("backtest: window_days must exceed the price model lags");
  if (model == Model::Expert && window_days < kNumRegressors)
    throw ValidationError("backtest: expert model needs window_days >= " +
                          std::to_string(kNumRegressors));
  if (bootstrap_resamples < 1000)
    throw ValidationError("backtest: bootstrap_resamples must be >= 1000");
  fees.validate();
  impact.validate();
  risk.validate();
  portfolio.validate();
  if (strategies.empty()) throw ValidationError("backtest: strategy list is empty");
}

namespace {

std::vector<PriceGrid> market_grids() {
  std::vector<PriceGrid> grids;
  grids.reserve(kNumMarkets);
  for (int m = 0; m < kNumMarkets; ++m) grids.push_back(grid_for_market(m));
  return grids;
}

bool all_zero(const Portfolio& v) {
  return v.v[0] == 0.0 && v.v[1] == 0.0 && v.v[2] == 0.0 && v.v[3] == 0.0;
}

// Runs fn(i) for i in [0, count) on the requested number of threads. Work is
// index-addressed, so the schedule cannot influence results.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  unsigned n = threads > 0 ? static_cast<unsigned>(threads)
                           : std::max(1u, std::thread::hardware_concurrency());
  n = std::min<unsigned>(n, count == 0 ? 1 : static_cast<unsigned>(count));
  if (n <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

FeatureRow build_feature_row(const PriceHistory& prices, const ExogSeries& exog,
                             const FuelSeries& fuels, DayNumber d, int hour) {
  FeatureRow row;
  row.lag1 = prices.at(d - 1, hour);
  row.lag2 = prices.at(d - 2, hour);
  row.lag7 = prices.at(d - 7, hour);
  row.last_hour = prices.at(d - 1, 24);
  for (int i = 0; i < kNumMarkets; ++i) {
    row.prev_min[i] = prices.at(d - 1, 1)[i];
    row.prev_max[i] = prices.at(d - 1, 1)[i];
  }
  for (int h = 2; h <= 24; ++h) {
    const Vec5& p = prices.at(d - 1, h);
    for (int i = 0; i < kNumMarkets; ++i) {
      row.prev_min[i] = std::min(row.prev_min[i], p[i]);
      row.prev_max[i] = std::max(row.prev_max[i], p[i]);
    }
  }
  row.dow[weekday(d) - 1] = 1.0;
  const ExogRow& e = exog.at(d, hour);
  row.load = e.load;
  row.solar = e.solar;
  row.wind_on = e.wind_on;
  row.wind_off = e.wind_off;
  const FuelRow& f = fuels.at(d - 2);
  row.eua = f.eua;
  row.coal = f.coal;
  row.gas = f.gas;
  row.oil = f.oil;
  return row;
}

struct CellModel {
  Vec5 expected{};
  std::vector<Vec5> residuals;
};

CellModel price_model(const BacktestConfig& config, const DataBundle& bundle,
                      const PriceHistory& series, DayNumber d, int hour) {
  CellModel out;
  switch (config.model) {
    case BacktestConfig::Model::Naive: {
      out.expected = naive_forecast(series, d, hour);
      for (DayNumber j = d - config.window_days; j < d; ++j)
        if (series.covers(j - 7)) {
          const Vec5 fitted = naive_forecast(series, j, hour);
          Vec5 eps;
          for (int i = 0; i < kNumMarkets; ++i) eps[i] = series.at(j, hour)[i] - fitted[i];
          out.residuals.push_back(eps);
        }
      break;
    }
    case BacktestConfig::Model::Expert: {
      std::vector<FeatureRow> rows;
      std::vector<Vec5> targets;
      rows.reserve(static_cast<std::size_t>(config.window_days));
      for (DayNumber j = d - config.window_days; j < d; ++j) {
        rows.push_back(build_feature_row(series, bundle.exog, bundle.fuels, j, hour));
        targets.push_back(series.at(j, hour));
      }
      const ExpertFit fit = fit_expert(rows, targets);
      out.expected =
          expert_forecast(fit, build_feature_row(series, bundle.exog, bundle.fuels, d, hour));
      out.residuals = fit.residuals;
      break;
    }
    case BacktestConfig::Model::Perfect: {
      out.expected = series.at(d, hour);
      out.residuals.push_back(Vec5{});
      break;
    }
  }
  if (out.residuals.empty())
    throw DataGap("no in-sample residuals for " + format_date(d) + " hour " +
                  std::to_string(hour));
  return out;
}

struct ImpactModel {
  CurveForecast forecast;
  ImpactCurveSet curves;
};

ImpactModel realized_impact_model(const CurveTable& curves, const std::vector<PriceGrid>& grids,
                                  DayNumber d, int hour) {
  std::vector<MarketCurveSet> window{curves.at(d, hour)};
  ImpactModel model{forecast_curves(window, grids, 1), {}};
  model.curves = build_impact_curves(model.forecast);
  return model;
}

Vec5 adjusted_deltas(const ImpactModel& model, const Vec5& xi, const BidVector& bid,
                     double delta_factor) {
  return sequential_adjust(raw_deltas(model.curves, xi, bid.b), delta_factor);
}

}  // namespace

PriceHistory rebid_adjust(const PriceHistory& history, const CurveTable& curves,
                          const PortfolioSpec& portfolio, const ExogSeries& exog,
                          const FeeSchedule& fees, const ImpactConfig& impact, int threads) {
  PriceHistory adjusted(history.start(), history.days());
  const auto grids = market_grids();
  const std::size_t cells = static_cast<std::size_t>(history.days()) * 24;

  std::vector<Vec5> rows(cells);
  parallel_for(cells, threads, [&](std::size_t idx) {
    const DayNumber d = history.start() + static_cast<DayNumber>(idx / 24);
    const int hour = static_cast<int>(idx % 24) + 1;
    const Vec5 observed = history.at(d, hour);
    const Portfolio v = portfolio.at(exog, d, hour);
    if (all_zero(v)) {
      rows[idx] = observed;
      return;
    }
    if (!curves.covers(d))
      throw MissingCurves("rebid adjustment: no curves for " + format_date(d));
    const ImpactModel model = realized_impact_model(curves, grids, d, hour);
    const BidVector bid = expand(tc_min(v, fees), v);
    const Vec5 xi = scenario_shift(model.forecast, observed);
    const Vec5 delta = adjusted_deltas(model, xi, bid, impact.delta);
    Vec5 purged;
    for (int i = 0; i < kNumMarkets; ++i) purged[i] = observed[i] - delta[i];
    rows[idx] = purged;
  });

  for (std::size_t idx = 0; idx < cells; ++idx) {
    const DayNumber d = history.start() + static_cast<DayNumber>(idx / 24);
    const int hour = static_cast<int>(idx % 24) + 1;
    adjusted.set(d, hour, rows[idx]);
  }
  return adjusted;
}

namespace {

struct CellOutput {
  CellReport report;
  ScenarioSet scenarios;
};

CellOutput compute_cell(const BacktestConfig& config, const DataBundle& bundle,
                        const PriceHistory& series, const std::vector<PriceGrid>& grids,
                        DayNumber d, int hour) {
  CellOutput out;
  CellReport& cell = out.report;
  cell.day = d;
  cell.hour = hour;
  cell.realized = series.at(d, hour);
  cell.volume = config.portfolio.at(bundle.exog, d, hour);

  const std::size_t n_strategies = config.strategies.size();
  cell.bids.assign(n_strategies, BidVector{});
  cell.breakdown.assign(n_strategies, GainBreakdown{});
  cell.unbounded.assign(n_strategies, false);

  const std::uint64_t cell_seed =
      split_seed(split_seed(config.seed, static_cast<std::uint64_t>(d)),
                 static_cast<std::uint64_t>(hour));

  const CellModel model = price_model(config, bundle, series, d, hour);
  out.scenarios =
      bootstrap_scenarios(model.expected, model.residuals,
                          static_cast<std::size_t>(config.scenario_count), cell_seed);
  cell.expected = model.expected;

  if (all_zero(cell.volume)) {
    cell.skipped = true;  // nothing to trade this hour (e.g. solar at night)
    return out;
  }

  // Forecast curves and the impact machinery shared by all strategies.
  std::vector<MarketCurveSet> window;
  if (config.perfect_curves) {
    window.push_back(bundle.curves.at(d, hour));
  } else {
    window.reserve(static_cast<std::size_t>(config.curve_window));
    for (DayNumber j = d - config.curve_window; j < d; ++j)
      window.push_back(bundle.curves.at(j, hour));
  }
  const CurveForecast fc =
      forecast_curves(window, grids, static_cast<int>(window.size()));
  const ImpactCurveSet ics = build_impact_curves(fc);

  const ScenarioEvaluator evaluator{
      [&fc](const Vec5& prices) { return scenario_shift(fc, prices); },
      [&](double b0, const Vec5& prices, const Vec5& xi) {
        const BidVector bid = expand(b0, cell.volume);
        const Vec5 adj = sequential_adjust(raw_deltas(ics, xi, bid.b), config.impact.delta);
        Vec5 impacted;
        for (int i = 0; i < kNumMarkets; ++i) impacted[i] = prices[i] + adj[i];
        return gain_constrained(bid, impacted, config.fees);
      }};

  // Linear impact slope, estimated once if any strategy needs it.
  const bool needs_linear =
      std::any_of(config.strategies.begin(), config.strategies.end(), [](StrategyId s) {
        return s == StrategyId::ELinImp || s == StrategyId::ELinImpMeff;
      });
  LinearImpact slope;
  if (needs_linear) {
    Vec5 xi_mean{};
    for (const auto& sc : out.scenarios.scenarios) {
      const Vec5 xi = scenario_shift(fc, sc);
      for (int i = 0; i < kNumMarkets; ++i) xi_mean[i] += xi[i];
    }
    for (int i = 0; i < kNumMarkets; ++i)
      xi_mean[i] /= static_cast<double>(out.scenarios.scenarios.size());
    Vec5 demand_basis{};
    for (int i = 0; i < kNumMarkets; ++i) {
      const auto& g = fc.grids[i];
      demand_basis[i] =
          volume_at(fc.markets[i].demand, std::clamp(model.expected[i], g.p_min, g.p_max));
    }
    slope = estimate_linear_impact(ics, xi_mean, config.impact, demand_basis);
  }

  for (std::size_t s = 0; s < n_strategies; ++s) {
    const Portfolio& v = cell.volume;
    double b0 = 0.0;
    switch (config.strategies[s]) {
      case StrategyId::IaOnly:
        b0 = 0.0;
        break;
      case StrategyId::TcMin:
        b0 = tc_min(v, config.fees);
        break;
      case StrategyId::ENoImp: {
        const CornerSolution sol = solve_noimp(out.scenarios.scenarios, v, config.fees);
        b0 = sol.b0;
        cell.unbounded[s] = sol.unbounded;
        break;
      }
      case StrategyId::ELinImp:
        b0 = solve_linimp(q_coefficients(out.scenarios.scenarios, slope, v), v, config.fees);
        break;
      case StrategyId::ELinImpMeff: {
        std::vector<Vec5> recentered = out.scenarios.scenarios;
        recenter_da(recentered);
        b0 = solve_linimp(q_coefficients(recentered, slope, v), v, config.fees);
        break;
      }
      case StrategyId::EMeff:
        b0 = solve_numeric(v, config.fees, out.scenarios.scenarios, evaluator,
                           {RiskConfig::Kind::Expectation, config.risk.gamma, config.risk.alpha},
                           true, config.numeric);
        break;
      case StrategyId::E:
        b0 = solve_numeric(v, config.fees, out.scenarios.scenarios, evaluator,
                           {RiskConfig::Kind::Expectation, config.risk.gamma, config.risk.alpha},
                           false, config.numeric);
        break;
      case StrategyId::MeanVariance:
        b0 = solve_numeric(v, config.fees, out.scenarios.scenarios, evaluator,
                           {RiskConfig::Kind::MeanVariance, config.risk.gamma, config.risk.alpha},
                           false, config.numeric);
        break;
      case StrategyId::VaR:
        b0 = solve_numeric(v, config.fees, out.scenarios.scenarios, evaluator,
                           {RiskConfig::Kind::VaR, config.risk.gamma, config.risk.alpha}, false,
                           config.numeric);
        break;
      case StrategyId::CVaR:
        b0 = solve_numeric(v, config.fees, out.scenarios.scenarios, evaluator,
                           {RiskConfig::Kind::CVaR, config.risk.gamma, config.risk.alpha}, false,
                           config.numeric);
        break;
    }
    cell.bids[s] = expand(b0, v);
  }

  // Realized evaluation against the day's own curves.
  const ImpactModel realized = realized_impact_model(bundle.curves, grids, d, hour);
  const Vec5 xi_real = scenario_shift(realized.forecast, cell.realized);
  for (std::size_t s = 0; s < n_strategies; ++s) {
    const Vec5 delta = adjusted_deltas(realized, xi_real, cell.bids[s], config.impact.delta);
    cell.breakdown[s] =
        decompose(cell.bids[s].b[0], cell.volume, cell.realized, delta, config.fees);
  }
  return out;
}

}  // namespace

BacktestResult run(const BacktestConfig& config, const DataBundle& bundle) {
  config.validate();
  const DayNumber data_start = bundle.prices.start();
  const DayNumber oos_start = data_start + kLeadInDays + config.window_days;
  if (oos_start + config.oos_days > bundle.prices.end())
    throw ValidationError("backtest: data covers " + std::to_string(bundle.prices.days()) +
                          " days, need " +
                          std::to_string(kLeadInDays + config.window_days + config.oos_days));

  const PriceHistory series =
      config.setting == BacktestConfig::Setting::Rebidding
          ? rebid_adjust(bundle.prices, bundle.curves, config.portfolio, bundle.exog, config.fees,
                         config.impact, config.threads)
          : bundle.prices;

  const auto grids = market_grids();
  const std::size_t cell_count = static_cast<std::size_t>(config.oos_days) * 24;

  BacktestResult result;
  result.strategies = config.strategies;
  result.cells.resize(cell_count);
  std::vector<ScenarioSet> forecasts(cell_count);

  parallel_for(cell_count, config.threads, [&](std::size_t idx) {
    const DayNumber d = oos_start + static_cast<DayNumber>(idx / 24);
    const int hour = static_cast<int>(idx % 24) + 1;
    CellOutput out = compute_cell(config, bundle, series, grids, d, hour);
    result.cells[idx] = std::move(out.report);
    forecasts[idx] = std::move(out.scenarios);
  });

  // Forecast quality against the series the models actually targeted.
  std::vector<Vec5> realized(cell_count);
  for (std::size_t i = 0; i < cell_count; ++i) realized[i] = result.cells[i].realized;
  result.metrics = metrics(forecasts, realized);

  // Per-strategy volume-normalized averages.
  for (std::size_t s = 0; s < config.strategies.size(); ++s) {
    std::vector<std::pair<double, Portfolio>> cells;
    cells.reserve(cell_count);
    std::size_t unbounded = 0;
    for (const auto& cell : result.cells) {
      cells.emplace_back(cell.skipped ? 0.0 : cell.breakdown[s].total, cell.volume);
      if (!cell.skipped && cell.unbounded[s]) ++unbounded;
    }
    result.summary.push_back({config.strategies[s], average_gain(cells), unbounded});
  }

  // Pairwise mean-gain bootstrap tests over non-skipped cells.
  for (std::size_t a = 0; a < config.strategies.size(); ++a)
    for (std::size_t b = a + 1; b < config.strategies.size(); ++b) {
      std::vector<double> ga, gb;
      for (const auto& cell : result.cells) {
        if (cell.skipped) continue;
        ga.push_back(cell.breakdown[a].total);
        gb.push_back(cell.breakdown[b].total);
      }
      if (ga.empty()) continue;
      const auto [p_ab, p_ba] =
          bootstrap_mean_test(ga, gb, config.bootstrap_resamples,
                              split_seed(config.seed, 0x7e57 + a * 64 + b));
      result.tests.push_back({config.strategies[a], config.strategies[b], p_ab, p_ba});
    }

  return result;
}

MetricsReport metrics(std::span<const ScenarioSet> forecasts, std::span<const Vec5> realized) {
  if (forecasts.size() != realized.size())
    throw AlignmentError("metrics: " + std::to_string(forecasts.size()) + " forecast cells vs " +
                         std::to_string(realized.size()) + " realized");
  if (forecasts.empty()) throw AlignmentError("metrics: no cells");

  constexpr int kQuantiles = 99;
  double se = 0.0, ae = 0.0, crps = 0.0, bias = 0.0;
  std::size_t n = 0;
  std::vector<double> values;

  for (std::size_t c = 0; c < forecasts.size(); ++c) {
    const auto& set = forecasts[c].scenarios;
    if (set.empty()) throw AlignmentError("metrics: empty scenario set");
    const auto m = set.size();
    for (int i = 0; i < kNumMarkets; ++i) {
      values.resize(m);
      double mean = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        values[k] = set[k][i];
        mean += values[k];
      }
      mean /= static_cast<double>(m);
      std::sort(values.begin(), values.end());
      const double median =
          m % 2 == 1 ? values[m / 2] : 0.5 * (values[m / 2 - 1] + values[m / 2]);

      const double y = realized[c][i];
      se += (mean - y) * (mean - y);
      ae += std::abs(median - y);
      bias += mean - y;

      // CRPS as twice the mean pinball loss over the quantile grid, which
      // estimates E|X - y| - E|X - X'|/2.
      double pinball = 0.0;
      for (int r = 1; r <= kQuantiles; ++r) {
        const double tau = static_cast<double>(r) / 100.0;
        const auto k = static_cast<std::size_t>(std::clamp(
            std::ceil(tau * static_cast<double>(m) - 1e-9), 1.0, static_cast<double>(m)));
        const double q = values[k - 1];
        pinball += (tau - (y < q ? 1.0 : 0.0)) * (y - q);
      }
      crps += 2.0 * pinball / kQuantiles;
      ++n;
    }
  }

  MetricsReport report;
  const double count = static_cast<double>(n);
  report.rmse = std::sqrt(se / count);
  report.mae = ae / count;
  report.crps = crps / count;
  report.bias = bias / count;
  return report;
}

void write_reports(const BacktestResult& result, const BacktestConfig& config,
                   const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto& strategies = result.strategies;

  std::string gains = "date,hour,strategy,ia_revenue,arbitrage,impact,fees,total\n";
  std::string bids = "date,hour,strategy,b0,b1,b2,b3,b4\n";
  for (const auto& cell : result.cells) {
    for (std::size_t s = 0; s < strategies.size(); ++s) {
      const std::string prefix =
          format_date(cell.day) + ',' + std::to_string(cell.hour) + ',' +
          strategy_name(strategies[s]) + ',';
      const GainBreakdown& g = cell.breakdown[s];
      gains += prefix + format_double(g.ia_revenue) + ',' + format_double(g.arbitrage) + ',' +
               format_double(g.impact) + ',' + format_double(g.fees) + ',' +
               format_double(g.total) + '\n';
      bids += prefix;
      for (int i = 0; i < kNumMarkets; ++i)
        bids += format_double(cell.bids[s].b[i]) + (i + 1 < kNumMarkets ? "," : "\n");
    }
  }
  atomic_write(out_dir / "gains.csv", gains);
  atomic_write(out_dir / "bids.csv", bids);

  std::string averages = "strategy,avg_gain_eur_mwh,included_cells,excluded_cells,unbounded_cells\n";
  for (const auto& s : result.summary)
    averages += strategy_name(s.id) + ',' + format_double(s.average.per_mwh) + ',' +
                std::to_string(s.average.included) + ',' + std::to_string(s.average.excluded) +
                ',' + std::to_string(s.unbounded_cells) + '\n';
  atomic_write(out_dir / "averages.csv", averages);

  std::string tests = "strategy_a,strategy_b,p_ab,p_ba\n";
  for (const auto& t : result.tests)
    tests += strategy_name(t.a) + ',' + strategy_name(t.b) + ',' + format_double(t.p_ab) + ',' +
             format_double(t.p_ba) + '\n';
  atomic_write(out_dir / "tests.csv", tests);

  const char* model = config.model == BacktestConfig::Model::Naive    ? "naive"
                      : config.model == BacktestConfig::Model::Expert ? "expert"
                                                                      : "perfect";
  std::string metrics_csv = "model,rmse,mae,crps,bias\n";
  metrics_csv += std::string(model) + ',' + format_double(result.metrics.rmse) + ',' +
                 format_double(result.metrics.mae) + ',' + format_double(result.metrics.crps) +
                 ',' + format_double(result.metrics.bias) + '\n';
  atomic_write(out_dir / "metrics.csv", metrics_csv);

  // Daily mean share of traded MWh placed in the DA market, per strategy.
  std::string weights = "date,strategy,weight\n";
  for (std::size_t s = 0; s < strategies.size(); ++s) {
    DayNumber day = 0;
    double sum = 0.0;
    int hours = 0;
    const auto flush = [&] {
      if (hours > 0)
        weights += format_date(day) + ',' + strategy_name(strategies[s]) + ',' +
                   format_double(sum / hours) + '\n';
    };
    for (const auto& cell : result.cells) {
      if (hours > 0 && cell.day != day) {
        flush();
        sum = 0.0;
        hours = 0;
      }
      day = cell.day;
      if (cell.skipped) continue;
      double traded = 0.0;
      for (int i = 0; i < kNumMarkets; ++i)
        traded += kHourWeights[i] * std::abs(cell.bids[s].b[i]);
      if (traded > 0.0) {
        sum += std::abs(cell.bids[s].b[0]) / traded;
        ++hours;
      }
    }
    flush();
  }
  atomic_write(out_dir / "da_weights.csv", weights);
}

std::pair<double, double> bootstrap_mean_test(std::span<const double> gains_a,
                                              std::span<const double> gains_b, int resamples,
                                              std::uint64_t seed) {
  if (gains_a.size() != gains_b.size())
    throw LengthMismatch("bootstrap test: series lengths differ");
  if (gains_a.empty()) throw LengthMismatch("bootstrap test: empty series");
  if (resamples < 1000) throw ValidationError("bootstrap test: need at least 1000 resamples");

  const std::size_t n = gains_a.size();
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = gains_a[i] - gains_b[i];

  SplitMix64 rng(seed);
  std::size_t below = 0, above = 0, ties = 0;
  for (int r = 0; r < resamples; ++r) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += diff[rng.uniform_index(n)];
    if (sum < 0.0)
      ++below;
    else if (sum > 0.0)
      ++above;
    else
      ++ties;  // exactly-zero resample means count half toward each side
  }
  const double total = static_cast<double>(resamples);
  return {(below + 0.5 * ties) / total, (above + 0.5 * ties) / total};
}

}  // namespace bidopt
