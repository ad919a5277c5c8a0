#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bidopt/common.hpp"
#include "bidopt/curves.hpp"
#include "bidopt/dates.hpp"
#include "bidopt/forecast.hpp"
#include "bidopt/impact.hpp"

namespace bidopt {

/// Day-ahead system forecasts per (day, hour): load, solar, wind on/offshore, MW.
struct ExogRow {
  double load = 0.0;
  double solar = 0.0;
  double wind_on = 0.0;
  double wind_off = 0.0;
};

class ExogSeries {
 public:
  ExogSeries() = default;
  ExogSeries(DayNumber start, int days)
      : start_(start), days_(days), rows_(static_cast<std::size_t>(days) * 24) {}

  DayNumber start() const { return start_; }
  int days() const { return days_; }
  bool covers(DayNumber d) const { return d >= start_ && d < start_ + days_; }
  const ExogRow& at(DayNumber d, int hour) const { return rows_[index(d, hour)]; }
  void set(DayNumber d, int hour, const ExogRow& r) { rows_[index(d, hour)] = r; }

 private:
  std::size_t index(DayNumber d, int hour) const;
  DayNumber start_ = 0;
  int days_ = 0;
  std::vector<ExogRow> rows_;
};

/// Daily settle prices: EUA carbon, API2 coal, TTF gas, Brent oil.
struct FuelRow {
  double eua = 0.0;
  double coal = 0.0;
  double gas = 0.0;
  double oil = 0.0;
};

class FuelSeries {
 public:
  FuelSeries() = default;
  FuelSeries(DayNumber start, int days)
      : start_(start), days_(days), rows_(static_cast<std::size_t>(days)) {}

  DayNumber start() const { return start_; }
  int days() const { return days_; }
  bool covers(DayNumber d) const { return d >= start_ && d < start_ + days_; }
  const FuelRow& at(DayNumber d) const;
  void set(DayNumber d, const FuelRow& r);

 private:
  DayNumber start_ = 0;
  int days_ = 0;
  std::vector<FuelRow> rows_;
};

/// Aggregated auction curves per (day, hour) cell, five markets each.
class CurveTable {
 public:
  CurveTable() = default;
  CurveTable(DayNumber start, int days)
      : start_(start), days_(days), cells_(static_cast<std::size_t>(days) * 24) {}

  DayNumber start() const { return start_; }
  int days() const { return days_; }
  bool covers(DayNumber d) const { return d >= start_ && d < start_ + days_; }
  const MarketCurveSet& at(DayNumber d, int hour) const;
  void set(DayNumber d, int hour, MarketCurveSet curves);

 private:
  std::size_t index(DayNumber d, int hour) const;
  DayNumber start_ = 0;
  int days_ = 0;
  std::vector<MarketCurveSet> cells_;
};

/// Everything a backtest needs, aligned on the same day span.
struct DataBundle {
  PriceHistory prices;
  CurveTable curves;
  ExogSeries exog;
  FuelSeries fuels;
};

inline const char* market_label(int market) {
  constexpr const char* names[] = {"DA", "IA1", "IA2", "IA3", "IA4"};
  return names[market];
}
int parse_market(const std::string& label);  ///< DA, IA1..IA4 -> 0..4

/// CSV readers. All validate the header, reject duplicate keys, and check
/// for gaps; errors carry the offending row number or (date, hour).
PriceHistory load_prices(const std::filesystem::path& file);
CurveTable load_curves(const std::filesystem::path& file);
ExogSeries load_exogenous(const std::filesystem::path& file);
FuelSeries load_fuels(const std::filesystem::path& file);

/// CSV writers (write-temp-then-rename, so readers never observe a torn file).
void save_prices(const PriceHistory& prices, const std::filesystem::path& file);
void save_curves(const CurveTable& curves, const std::filesystem::path& file);
void save_exogenous(const ExogSeries& exog, const std::filesystem::path& file);
void save_fuels(const FuelSeries& fuels, const std::filesystem::path& file);

/// Atomically replaces `file` with `contents`.
void atomic_write(const std::filesystem::path& file, const std::string& contents);

/// Shortest round-trip decimal form of x (byte-stable across runs).
std::string format_double(double x);

/// Deterministic synthetic market, desk-scale stand-in for exchange data.
///
/// Clearing prices follow a daily/weekly profile driven by the exogenous
/// series plus seeded noise; curves are piecewise-linear ladders around the
/// target price, bracketed by unlimited bids at the grid extremes. DA curves
/// are steeper in volume than IA by the liquidity ratio, and the DA target
/// equals the quarter-average of the IA targets.
struct SyntheticMarketSpec {
  std::uint64_t seed = 1;
  int days = 40;
  DayNumber start = days_from_civil(2021, 3, 1);  // a Monday
  double base_price = 8.0;           ///< EUR/MWh intercept of the price process
  double daily_amplitude = 10.0;     ///< EUR/MWh swing over the day
  double weekly_amplitude = 4.0;     ///< EUR/MWh swing over the week
  double noise_scale = 2.0;          ///< std dev of the price noise, EUR/MWh
  double da_liquidity = 400.0;       ///< MW per EUR/MWh per side near the money
  double ia_liquidity = 40.0;        ///< MW per EUR/MWh per side near the money
  double da_volume = 30000.0;        ///< DA clearing volume scale, MW
  double ia_volume = 6000.0;         ///< IA clearing volume scale, MW
  double quarter_ramp = 1.5;         ///< EUR/MWh spread of IA quarters within the hour

  void validate() const;
};

DataBundle generate_synthetic(const SyntheticMarketSpec& spec);

}  // namespace bidopt
