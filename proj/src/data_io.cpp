#include "bidopt/data_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "bidopt/backtest.hpp"

namespace bidopt {

DayNumber parse_date(const std::string& s) {
  int y = 0;
  unsigned m = 0, d = 0;
  char dash1 = 0, dash2 = 0;
  std::istringstream in(s);
  in >> y >> dash1 >> m >> dash2 >> d;
  if (!in || dash1 != '-' || dash2 != '-' || m < 1 || m > 12 || d < 1 || d > 31)
    throw SchemaError("malformed date '" + s + "', expected YYYY-MM-DD");
  return days_from_civil(y, m, d);
}

std::string format_date(DayNumber z) {
  const CivilDate c = civil_from_days(z);
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", c.year, c.month, c.day);
  return buf;
}

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void atomic_write(const std::filesystem::path& file, const std::string& contents) {
  const std::filesystem::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open " + tmp.string() + " for writing");
    out << contents;
    if (!out.flush()) throw ValidationError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, file);
}

std::size_t ExogSeries::index(DayNumber d, int hour) const {
  if (!covers(d) || hour < 1 || hour > 24)
    throw MissingHistory("no exogenous data for " + format_date(d) + " hour " +
                         std::to_string(hour));
  return static_cast<std::size_t>(d - start_) * 24 + static_cast<std::size_t>(hour - 1);
}

const FuelRow& FuelSeries::at(DayNumber d) const {
  if (!covers(d)) throw MissingHistory("no fuel prices for " + format_date(d));
  return rows_[static_cast<std::size_t>(d - start_)];
}

void FuelSeries::set(DayNumber d, const FuelRow& r) {
  if (!covers(d)) throw MissingHistory("no fuel prices for " + format_date(d));
  rows_[static_cast<std::size_t>(d - start_)] = r;
}

std::size_t CurveTable::index(DayNumber d, int hour) const {
  if (!covers(d) || hour < 1 || hour > 24)
    throw MissingCurves("no curves for " + format_date(d) + " hour " + std::to_string(hour));
  return static_cast<std::size_t>(d - start_) * 24 + static_cast<std::size_t>(hour - 1);
}

const MarketCurveSet& CurveTable::at(DayNumber d, int hour) const {
  const auto& cell = cells_[index(d, hour)];
  if (cell.empty())
    throw MissingCurves("curves missing for " + format_date(d) + " hour " + std::to_string(hour));
  return cell;
}

void CurveTable::set(DayNumber d, int hour, MarketCurveSet curves) {
  cells_[index(d, hour)] = std::move(curves);
}

int parse_market(const std::string& label) {
  for (int m = 0; m < kNumMarkets; ++m)
    if (label == market_label(m)) return m;
  throw SchemaError("unknown market '" + label + "', expected DA or IA1..IA4");
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  out.push_back(field);
  return out;
}

double parse_number(const std::string& s, std::size_t row) {
  double value = 0.0;
  const char* begin = s.data();
  const char* end = begin + s.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end)
    throw SchemaError("row " + std::to_string(row) + ": '" + s + "' is not a number");
  return value;
}

int parse_hour(const std::string& s, std::size_t row) {
  const double h = parse_number(s, row);
  const int hour = static_cast<int>(h);
  if (hour < 1 || hour > 24 || h != hour)
    throw SchemaError("row " + std::to_string(row) + ": hour must be an integer in 1..24");
  return hour;
}

// Reads all rows, checks the exact header, hands fields + row number to sink.
template <typename Sink>
void read_csv(const std::filesystem::path& file, const std::string& header, Sink&& sink) {
  std::ifstream in(file);
  if (!in) throw SchemaError("cannot open " + file.string());
  std::string line;
  if (!std::getline(in, line)) throw SchemaError(file.string() + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header)
    throw SchemaError(file.string() + ": header mismatch, expected '" + header + "'");
  const std::size_t columns = split_csv(header).size();
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv(line);
    if (fields.size() != columns)
      throw SchemaError(file.string() + " row " + std::to_string(row) + ": expected " +
                        std::to_string(columns) + " fields, got " + std::to_string(fields.size()));
    sink(fields, row);
  }
}

struct DaySpan {
  DayNumber min_day = 0;
  DayNumber max_day = 0;
  bool any = false;

  void add(DayNumber d) {
    if (!any) {
      min_day = max_day = d;
      any = true;
    } else {
      min_day = std::min(min_day, d);
      max_day = std::max(max_day, d);
    }
  }
  int days() const { return any ? static_cast<int>(max_day - min_day + 1) : 0; }
};

}  // namespace

PriceHistory load_prices(const std::filesystem::path& file) {
  std::map<std::pair<DayNumber, int>, Vec5> rows;
  DaySpan span;
  read_csv(file, "delivery_date,hour,p_da,p_ia1,p_ia2,p_ia3,p_ia4",
           [&](const std::vector<std::string>& f, std::size_t row) {
             const DayNumber d = parse_date(f[0]);
             const int h = parse_hour(f[1], row);
             Vec5 p;
             for (int i = 0; i < kNumMarkets; ++i) p[i] = parse_number(f[2 + i], row);
             if (!rows.emplace(std::make_pair(d, h), p).second)
               throw DuplicateRow(file.string() + " row " + std::to_string(row) +
                                  ": duplicate price for " + f[0] + " hour " + f[1]);
             span.add(d);
           });
  if (!span.any) throw SchemaError(file.string() + " contains no data rows");

  PriceHistory hist(span.min_day, span.days());
  for (DayNumber d = span.min_day; d <= span.max_day; ++d)
    for (int h = 1; h <= 24; ++h) {
      const auto it = rows.find({d, h});
      if (it == rows.end())
        throw GapError(file.string() + ": missing prices for " + format_date(d) + " hour " +
                       std::to_string(h));
      hist.set(d, h, it->second);
    }
  return hist;
}

CurveTable load_curves(const std::filesystem::path& file) {
  struct LadderKey {
    DayNumber d;
    int h;
    int market;
    Side side;
    auto operator<=>(const LadderKey&) const = default;
  };
  std::map<LadderKey, std::map<double, double>> ladders;
  DaySpan span;
  read_csv(file, "delivery_date,hour,market,side,price,volume",
           [&](const std::vector<std::string>& f, std::size_t row) {
             const DayNumber d = parse_date(f[0]);
             const int h = parse_hour(f[1], row);
             const int market = parse_market(f[2]);
             Side side;
             if (f[3] == "S")
               side = Side::Supply;
             else if (f[3] == "D")
               side = Side::Demand;
             else
               throw SchemaError(file.string() + " row " + std::to_string(row) +
                                 ": side must be S or D");
             const double price = parse_number(f[4], row);
             const double volume = parse_number(f[5], row);
             auto& ladder = ladders[{d, h, market, side}];
             if (!ladder.emplace(price, volume).second)
               throw DuplicateRow(file.string() + " row " + std::to_string(row) +
                                  ": duplicate aggregated bid at price " + f[4]);
             span.add(d);
           });
  if (!span.any) throw SchemaError(file.string() + " contains no data rows");

  CurveTable table(span.min_day, span.days());
  for (DayNumber d = span.min_day; d <= span.max_day; ++d)
    for (int h = 1; h <= 24; ++h) {
      MarketCurveSet cell;
      cell.reserve(kNumMarkets);
      for (int m = 0; m < kNumMarkets; ++m) {
        const auto grid = grid_for_market(m);
        const auto make = [&](Side side) {
          const auto it = ladders.find({d, h, m, side});
          if (it == ladders.end())
            throw GapError(file.string() + ": missing " +
                           std::string(side == Side::Supply ? "supply" : "demand") + " curve for " +
                           format_date(d) + " hour " + std::to_string(h) + " market " +
                           market_label(m));
          BidLadder ladder(side, grid);
          for (const auto& [price, volume] : it->second) ladder.add(price, volume);
          return aggregate(ladder);
        };
        AggregatedCurve supply = make(Side::Supply);
        AggregatedCurve demand = make(Side::Demand);
        cell.push_back({std::move(supply), std::move(demand)});
      }
      table.set(d, h, std::move(cell));
    }
  return table;
}

ExogSeries load_exogenous(const std::filesystem::path& file) {
  std::map<std::pair<DayNumber, int>, ExogRow> rows;
  DaySpan span;
  read_csv(file, "delivery_date,hour,load,solar,wind_on,wind_off",
           [&](const std::vector<std::string>& f, std::size_t row) {
             const DayNumber d = parse_date(f[0]);
             const int h = parse_hour(f[1], row);
             const ExogRow r{parse_number(f[2], row), parse_number(f[3], row),
                             parse_number(f[4], row), parse_number(f[5], row)};
             if (!rows.emplace(std::make_pair(d, h), r).second)
               throw DuplicateRow(file.string() + " row " + std::to_string(row) +
                                  ": duplicate exogenous row");
             span.add(d);
           });
  if (!span.any) throw SchemaError(file.string() + " contains no data rows");

  ExogSeries series(span.min_day, span.days());
  for (DayNumber d = span.min_day; d <= span.max_day; ++d)
    for (int h = 1; h <= 24; ++h) {
      const auto it = rows.find({d, h});
      if (it == rows.end())
        throw GapError(file.string() + ": missing exogenous data for " + format_date(d) +
                       " hour " + std::to_string(h));
      series.set(d, h, it->second);
    }
  return series;
}

FuelSeries load_fuels(const std::filesystem::path& file) {
  std::map<DayNumber, FuelRow> rows;
  DaySpan span;
  read_csv(file, "date,eua,coal,gas,oil", [&](const std::vector<std::string>& f, std::size_t row) {
    const DayNumber d = parse_date(f[0]);
    const FuelRow r{parse_number(f[1], row), parse_number(f[2], row), parse_number(f[3], row),
                    parse_number(f[4], row)};
    if (!rows.emplace(d, r).second)
      throw DuplicateRow(file.string() + " row " + std::to_string(row) + ": duplicate fuel row");
    span.add(d);
  });
  if (!span.any) throw SchemaError(file.string() + " contains no data rows");

  FuelSeries series(span.min_day, span.days());
  for (DayNumber d = span.min_day; d <= span.max_day; ++d) {
    const auto it = rows.find(d);
    if (it == rows.end())
      throw GapError(file.string() + ": missing fuel prices for " + format_date(d));
    series.set(d, it->second);
  }
  return series;
}

void save_prices(const PriceHistory& prices, const std::filesystem::path& file) {
  std::string out = "delivery_date,hour,p_da,p_ia1,p_ia2,p_ia3,p_ia4\n";
  for (DayNumber d = prices.start(); d < prices.end(); ++d)
    for (int h = 1; h <= 24; ++h) {
      out += format_date(d) + ',' + std::to_string(h);
      for (double p : prices.at(d, h)) out += ',' + format_double(p);
      out += '\n';
    }
  atomic_write(file, out);
}

void save_curves(const CurveTable& curves, const std::filesystem::path& file) {
  std::string out = "delivery_date,hour,market,side,price,volume\n";
  for (DayNumber d = curves.start(); d < curves.start() + curves.days(); ++d)
    for (int h = 1; h <= 24; ++h) {
      const auto& cell = curves.at(d, h);
      for (int m = 0; m < static_cast<int>(cell.size()); ++m) {
        const auto emit = [&](const AggregatedCurve& curve) {
          // Stored as aggregated bids, i.e. increments of the cumulative curve.
          const auto& pts = curve.breakpoints();
          for (std::size_t i = 0; i < pts.size(); ++i) {
            double bid;
            if (curve.side() == Side::Supply)
              bid = i == 0 ? pts[0].volume : pts[i].volume - pts[i - 1].volume;
            else
              bid = i + 1 == pts.size() ? pts[i].volume : pts[i].volume - pts[i + 1].volume;
            out += format_date(d) + ',' + std::to_string(h) + ',' + market_label(m) + ',' +
                   to_string(curve.side()) + ',' + format_double(pts[i].price) + ',' +
                   format_double(bid) + '\n';
          }
        };
        emit(cell[m].supply);
        emit(cell[m].demand);
      }
    }
  atomic_write(file, out);
}

void save_exogenous(const ExogSeries& exog, const std::filesystem::path& file) {
  std::string out = "delivery_date,hour,load,solar,wind_on,wind_off\n";
  for (DayNumber d = exog.start(); d < exog.start() + exog.days(); ++d)
    for (int h = 1; h <= 24; ++h) {
      const auto& r = exog.at(d, h);
      out += format_date(d) + ',' + std::to_string(h) + ',' + format_double(r.load) + ',' +
             format_double(r.solar) + ',' + format_double(r.wind_on) + ',' +
             format_double(r.wind_off) + '\n';
    }
  atomic_write(file, out);
}

void save_fuels(const FuelSeries& fuels, const std::filesystem::path& file) {
  std::string out = "date,eua,coal,gas,oil\n";
  for (DayNumber d = fuels.start(); d < fuels.start() + fuels.days(); ++d) {
    const auto& r = fuels.at(d);
    out += format_date(d) + ',' + format_double(r.eua) + ',' + format_double(r.coal) + ',' +
           format_double(r.gas) + ',' + format_double(r.oil) + '\n';
  }
  atomic_write(file, out);
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file " + file.string());

  const std::set<std::string> known = {
      "prices",       "curves",        "exogenous",     "fuels",
      "model",        "setting",       "strategies",    "portfolio",
      "window_days",  "oos_days",      "scenarios",     "curve_window",
      "tau_da",       "tau_ia",        "delta",         "slope_fraction",
      "gamma",        "alpha",         "seed",          "perfect_curves",
      "threads",      "bootstrap_resamples",            "numeric_grid",
      "numeric_span", "numeric_tol",
  };

  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(file.string() + " line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known.count(key))
      throw ConfigError(file.string() + " line " + std::to_string(lineno) + ": unknown key '" +
                        key + "'");
    if (!kv.emplace(key, value).second)
      throw ConfigError(file.string() + " line " + std::to_string(lineno) + ": duplicate key '" +
                        key + "'");
  }

  const auto get = [&](const std::string& key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  const auto require = [&](const std::string& key) {
    const auto v = get(key);
    if (!v) throw ConfigError(file.string() + ": missing required key '" + key + "'");
    return *v;
  };
  const auto number = [&](const std::string& key, double fallback) {
    const auto v = get(key);
    return v ? parse_number(*v, 0) : fallback;
  };

  RunConfig rc;
  const auto base = file.parent_path();
  const auto resolve = [&](const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
  };
  rc.prices = resolve(require("prices"));
  rc.curves = resolve(require("curves"));
  rc.exogenous = resolve(require("exogenous"));
  rc.fuels = resolve(require("fuels"));
  for (const auto& p : {rc.prices, rc.curves, rc.exogenous, rc.fuels})
    if (!std::filesystem::exists(p)) throw ConfigError("referenced file does not exist: " + p.string());

  BacktestConfig& bt = rc.backtest;
  bt.window_days = static_cast<int>(number("window_days", 730));
  bt.oos_days = static_cast<int>(number("oos_days", 0));
  bt.scenario_count = static_cast<int>(number("scenarios", 1000));
  bt.curve_window = static_cast<int>(number("curve_window", 28));
  bt.fees = FeeSchedule::make(number("tau_da", 0.05), number("tau_ia", 0.10));
  bt.impact.delta = number("delta", 1.0);
  bt.impact.slope_fraction = number("slope_fraction", 0.05);
  bt.impact.window = bt.curve_window;
  bt.risk.gamma = number("gamma", 0.25);
  bt.risk.alpha = number("alpha", 0.05);
  bt.seed = static_cast<std::uint64_t>(number("seed", 1));
  bt.perfect_curves = number("perfect_curves", 0) != 0;
  bt.threads = static_cast<int>(number("threads", 0));
  bt.bootstrap_resamples = static_cast<int>(number("bootstrap_resamples", 10000));
  bt.numeric.grid_points = static_cast<int>(number("numeric_grid", 201));
  bt.numeric.span_factor = number("numeric_span", 3.0);
  bt.numeric.tolerance = number("numeric_tol", 1e-4);

  if (const auto v = get("model")) {
    if (*v == "naive")
      bt.model = BacktestConfig::Model::Naive;
    else if (*v == "expert")
      bt.model = BacktestConfig::Model::Expert;
    else if (*v == "perfect")
      bt.model = BacktestConfig::Model::Perfect;
    else
      throw ConfigError("model must be naive, expert or perfect, got '" + *v + "'");
  }
  if (const auto v = get("setting")) {
    if (*v == "new_player")
      bt.setting = BacktestConfig::Setting::NewPlayer;
    else if (*v == "rebidding")
      bt.setting = BacktestConfig::Setting::Rebidding;
    else
      throw ConfigError("setting must be new_player or rebidding, got '" + *v + "'");
  }
  if (const auto v = get("strategies")) {
    bt.strategies.clear();
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ','))
      bt.strategies.push_back(parse_strategy(trim(item)));
    if (bt.strategies.empty()) throw ConfigError("strategies list is empty");
  }
  if (const auto v = get("portfolio")) {
    // const:<mw>:<sell|buy> | wind:<fraction> | solar:<fraction> | load:<fraction>
    std::vector<std::string> parts;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(trim(item));
    PortfolioSpec& ps = bt.portfolio;
    if (parts.size() == 3 && parts[0] == "const") {
      ps.kind = PortfolioSpec::Kind::ConstantMW;
      ps.constant_mw = parse_number(parts[1], 0);
      if (parts[2] == "sell")
        ps.sell = true;
      else if (parts[2] == "buy")
        ps.sell = false;
      else
        throw ConfigError("portfolio side must be sell or buy, got '" + parts[2] + "'");
    } else if (parts.size() == 2 &&
               (parts[0] == "wind" || parts[0] == "solar" || parts[0] == "load")) {
      ps.kind = PortfolioSpec::Kind::FractionOfSeries;
      ps.series = parts[0] == "wind"    ? PortfolioSpec::Series::Wind
                  : parts[0] == "solar" ? PortfolioSpec::Series::Solar
                                        : PortfolioSpec::Series::Load;
      ps.fraction = parse_number(parts[1], 0);
    } else {
      throw ConfigError("portfolio must be const:<mw>:<sell|buy> or wind|solar|load:<fraction>");
    }
  }

  bt.validate();
  return rc;
}

DataBundle load_bundle(const RunConfig& config) {
  DataBundle bundle;
  bundle.prices = load_prices(config.prices);
  bundle.curves = load_curves(config.curves);
  bundle.exog = load_exogenous(config.exogenous);
  bundle.fuels = load_fuels(config.fuels);
  return bundle;
}

}  // namespace bidopt
