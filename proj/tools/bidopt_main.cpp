// Command-line front end: synthetic market generation, forecasting metrics,
// single-hour bid optimization, and the rolling-window backtest.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bidopt/backtest.hpp"

namespace fs = std::filesystem;
using namespace bidopt;

namespace {

Vec4 parse_volumes(const std::string& text) {
  Vec4 v{};
  std::stringstream ss(text);
  std::string item;
  int i = 0;
  while (std::getline(ss, item, ',')) {
    if (i >= 4) throw ValidationError("expected four comma-separated volumes");
    v[i++] = std::stod(item);
  }
  if (i != 4) throw ValidationError("expected four comma-separated volumes, got " +
                                    std::to_string(i));
  return v;
}

std::string format_bid(const BidVector& bid) {
  std::string out = "b = (";
  for (int i = 0; i < kNumMarkets; ++i) {
    out += format_double(bid.b[i]);
    out += i + 1 < kNumMarkets ? ", " : ")";
  }
  return out;
}

void print_breakdown(const GainBreakdown& g) {
  std::printf("ia_revenue = %s\n", format_double(g.ia_revenue).c_str());
  std::printf("arbitrage  = %s\n", format_double(g.arbitrage).c_str());
  std::printf("impact     = %s\n", format_double(g.impact).c_str());
  std::printf("fees       = %s\n", format_double(g.fees).c_str());
  std::printf("total      = %s\n", format_double(g.total).c_str());
}

int cmd_simulate(const SyntheticMarketSpec& spec, const fs::path& out) {
  const DataBundle bundle = generate_synthetic(spec);
  fs::create_directories(out);
  save_prices(bundle.prices, out / "prices.csv");
  save_curves(bundle.curves, out / "curves.csv");
  save_exogenous(bundle.exog, out / "exogenous.csv");
  save_fuels(bundle.fuels, out / "fuels.csv");
  std::printf("wrote %d days (%s..%s) to %s\n", bundle.prices.days(),
              format_date(bundle.prices.start()).c_str(),
              format_date(bundle.prices.end() - 1).c_str(), out.string().c_str());
  return 0;
}

int cmd_backtest(const fs::path& config_path, const fs::path& out, std::uint64_t seed_override,
                 bool have_seed) {
  RunConfig rc = load_run_config(config_path);
  if (have_seed) rc.backtest.seed = seed_override;
  const DataBundle bundle = load_bundle(rc);
  const BacktestResult result = run(rc.backtest, bundle);
  write_reports(result, rc.backtest, out);
  for (const auto& s : result.summary)
    std::printf("%-14s avg gain %10.4f EUR/MWh  (cells %zu, excluded %zu)\n",
                strategy_name(s.id).c_str(), s.average.per_mwh, s.average.included,
                s.average.excluded);
  std::printf("reports written to %s\n", out.string().c_str());
  return 0;
}

int cmd_forecast(const fs::path& config_path, const fs::path& out, std::uint64_t seed_override,
                 bool have_seed) {
  RunConfig rc = load_run_config(config_path);
  if (have_seed) rc.backtest.seed = seed_override;
  rc.backtest.strategies = {StrategyId::TcMin};  // cheapest pass, metrics only
  const DataBundle bundle = load_bundle(rc);
  const BacktestResult result = run(rc.backtest, bundle);
  fs::create_directories(out);
  const char* model = rc.backtest.model == BacktestConfig::Model::Naive    ? "naive"
                      : rc.backtest.model == BacktestConfig::Model::Expert ? "expert"
                                                                           : "perfect";
  std::string csv = "model,rmse,mae,crps,bias\n";
  csv += std::string(model) + ',' + format_double(result.metrics.rmse) + ',' +
         format_double(result.metrics.mae) + ',' + format_double(result.metrics.crps) + ',' +
         format_double(result.metrics.bias) + '\n';
  atomic_write(out / "metrics.csv", csv);
  std::printf("%s: rmse %.4f  mae %.4f  crps %.4f  bias %.4f\n", model, result.metrics.rmse,
              result.metrics.mae, result.metrics.crps, result.metrics.bias);
  return 0;
}

int cmd_optimize_closed_form(const std::string& strategy, const Vec4& volumes, double tau_da,
                             double tau_ia) {
  const StrategyId id = parse_strategy(strategy);
  const Portfolio v{volumes};
  const FeeSchedule fees = FeeSchedule::make(tau_da, tau_ia);
  double b0 = 0.0;
  switch (id) {
    case StrategyId::IaOnly:
      b0 = 0.0;
      break;
    case StrategyId::TcMin:
      b0 = tc_min(v, fees);
      break;
    default:
      throw ValidationError("strategy '" + strategy +
                            "' needs market data; pass --config, --date and --hour");
  }
  std::printf("%s\n", format_bid(expand(b0, v)).c_str());
  std::printf("transaction cost = %s EUR\n",
              format_double(transaction_cost(b0, v, fees)).c_str());
  return 0;
}

int cmd_optimize_with_data(const std::string& strategy, const fs::path& config_path,
                           const std::string& date, int hour) {
  RunConfig rc = load_run_config(config_path);
  rc.backtest.strategies = {parse_strategy(strategy)};
  const DataBundle bundle = load_bundle(rc);
  const DayNumber d = parse_date(date);

  BacktestConfig config = rc.backtest;
  config.oos_days = 1;
  // Shrink the study to the single requested cell by aligning the window end.
  const DayNumber oos_start = bundle.prices.start() + kLeadInDays + config.window_days;
  if (d < oos_start || d >= bundle.prices.end())
    throw ValidationError("date " + date + " is not inside the out-of-sample span (first usable: " +
                          format_date(oos_start) + ")");
  config.window_days += static_cast<int>(d - oos_start);

  const BacktestResult result = run(config, bundle);
  const CellReport& cell = result.cells[static_cast<std::size_t>(hour - 1)];
  std::printf("%s hour %d, strategy %s\n", date.c_str(), hour, strategy.c_str());
  std::printf("%s\n", format_bid(cell.bids[0]).c_str());
  print_breakdown(cell.breakdown[0]);
  return 0;
}

int cmd_report(const fs::path& in, const fs::path& out) {
  // Pivots the backtest outputs into table/matrix shapes for plotting.
  std::ifstream tests(in / "tests.csv");
  if (!tests) throw ValidationError("cannot open " + (in / "tests.csv").string());
  std::string line;
  std::getline(tests, line);
  if (line != "strategy_a,strategy_b,p_ab,p_ba")
    throw ValidationError("unexpected tests.csv header");

  std::vector<std::string> names;
  std::map<std::pair<std::string, std::string>, double> p;
  const auto note = [&](const std::string& n) {
    for (const auto& existing : names)
      if (existing == n) return;
    names.push_back(n);
  };
  while (std::getline(tests, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b, pab, pba;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    std::getline(ss, pab, ',');
    std::getline(ss, pba, ',');
    note(a);
    note(b);
    p[{a, b}] = std::stod(pab);
    p[{b, a}] = std::stod(pba);
  }

  fs::create_directories(out);
  std::string matrix = "strategy";
  for (const auto& n : names) matrix += ',' + n;
  matrix += '\n';
  for (const auto& row : names) {
    matrix += row;
    for (const auto& col : names) {
      matrix += ',';
      if (row == col)
        matrix += "1";
      else if (auto it = p.find({row, col}); it != p.end())
        matrix += format_double(it->second);
    }
    matrix += '\n';
  }
  atomic_write(out / "pvalue_matrix.csv", matrix);

  // Averages table passes through sorted by gain, best first.
  std::ifstream averages(in / "averages.csv");
  if (!averages) throw ValidationError("cannot open " + (in / "averages.csv").string());
  std::getline(averages, line);
  std::vector<std::pair<double, std::string>> rows;
  while (std::getline(averages, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string strategy, value;
    std::getline(ss, strategy, ',');
    std::getline(ss, value, ',');
    rows.emplace_back(std::stod(value), line);
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::string table = "strategy,avg_gain_eur_mwh,included_cells,excluded_cells,unbounded_cells\n";
  for (const auto& [value, row] : rows) table += row + '\n';
  atomic_write(out / "gain_table.csv", table);

  std::printf("wrote %s and %s\n", (out / "pvalue_matrix.csv").string().c_str(),
              (out / "gain_table.csv").string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coordinated bidding across the day-ahead and intraday auctions"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate a deterministic synthetic market");
  SyntheticMarketSpec spec;
  std::string sim_out = "data";
  simulate->add_option("--seed", spec.seed, "Master seed");
  simulate->add_option("--days", spec.days, "Usable days after the lead-in");
  simulate->add_option("--noise", spec.noise_scale, "Price noise std dev, EUR/MWh");
  simulate->add_option("--da-liquidity", spec.da_liquidity, "DA curve slope, MW per EUR/MWh");
  simulate->add_option("--ia-liquidity", spec.ia_liquidity, "IA curve slope, MW per EUR/MWh");
  simulate->add_option("--base-price", spec.base_price, "Price process intercept, EUR/MWh");
  simulate->add_option("--out", sim_out, "Output directory")->required();

  // backtest
  auto* backtest = app.add_subcommand("backtest", "Run the rolling-window trading study");
  std::string bt_config, bt_out = "results";
  std::uint64_t bt_seed = 0;
  backtest->add_option("--config", bt_config, "Run configuration file")->required();
  backtest->add_option("--out", bt_out, "Report directory")->required();
  auto* bt_seed_opt = backtest->add_option("--seed", bt_seed, "Override the config seed");

  // forecast
  auto* forecast = app.add_subcommand("forecast", "Evaluate price forecast quality");
  std::string fc_config, fc_out = "results";
  std::uint64_t fc_seed = 0;
  forecast->add_option("--config", fc_config, "Run configuration file")->required();
  forecast->add_option("--out", fc_out, "Report directory")->required();
  auto* fc_seed_opt = forecast->add_option("--seed", fc_seed, "Override the config seed");

  // optimize
  auto* optimize = app.add_subcommand("optimize", "Solve a single hour's bid");
  std::string opt_strategy = "tc_min", opt_v, opt_config, opt_date;
  double opt_tau_da = 0.05, opt_tau_ia = 0.10;
  int opt_hour = 12;
  optimize->add_option("--strategy", opt_strategy, "Strategy id")->required();
  optimize->add_option("--v", opt_v, "Quarter-hour volumes, e.g. 2,3,5,8");
  optimize->add_option("--tau-da", opt_tau_da, "DA fee, EUR/MWh");
  optimize->add_option("--tau-ia", opt_tau_ia, "IA fee, EUR/MWh");
  optimize->add_option("--config", opt_config, "Run configuration file (data-driven mode)");
  optimize->add_option("--date", opt_date, "Delivery date YYYY-MM-DD (data-driven mode)");
  optimize->add_option("--hour", opt_hour, "Delivery hour 1..24")->check(CLI::Range(1, 24));

  // report
  auto* report = app.add_subcommand("report", "Pivot backtest outputs into table shapes");
  std::string rep_in, rep_out;
  report->add_option("--in", rep_in, "Backtest report directory")->required();
  report->add_option("--out", rep_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(spec, sim_out);
    if (backtest->parsed()) return cmd_backtest(bt_config, bt_out, bt_seed, !bt_seed_opt->empty());
    if (forecast->parsed()) return cmd_forecast(fc_config, fc_out, fc_seed, !fc_seed_opt->empty());
    if (optimize->parsed()) {
      if (!opt_config.empty()) {
        if (opt_date.empty())
          throw ValidationError("data-driven optimize needs --date and --hour");
        return cmd_optimize_with_data(opt_strategy, opt_config, opt_date, opt_hour);
      }
      if (opt_v.empty()) throw ValidationError("optimize needs --v or --config");
      return cmd_optimize_closed_form(opt_strategy, parse_volumes(opt_v), opt_tau_da, opt_tau_ia);
    }
    if (report->parsed()) return cmd_report(rep_in, rep_out);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
