#include <algorithm>
#include <cmath>

#include "bidopt/data_io.hpp"
#include "bidopt/rng.hpp"

namespace bidopt {

void SyntheticMarketSpec::validate() const {
  if (days < 1) throw ValidationError("synthetic market: days must be >= 1");
  if (!(da_liquidity > 0.0 && ia_liquidity > 0.0))
    throw ValidationError("synthetic market: liquidity slopes must be positive");
  if (!(da_volume > 0.0 && ia_volume > 0.0))
    throw ValidationError("synthetic market: clearing volumes must be positive");
  if (!(noise_scale >= 0.0)) throw ValidationError("synthetic market: noise must be >= 0");
}

namespace {

constexpr double kPi = 3.14159265358979323846;

double gaussian(SplitMix64& rng) {
  // Box-Muller; one draw per call keeps the stream layout simple.
  const double u1 = std::max(rng.uniform(), 1e-12);
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

// Piecewise-linear ladder whose aggregated curve passes exactly through the
// affine segment volume = v_star + sign*slope*(p - p_star) within the dense
// zone around the target price, with shallow tails out to the grid extremes.
constexpr double kDenseHalfWidth = 30.0;  // EUR/MWh
constexpr double kDenseStep = 2.0;        // EUR/MWh between dense breakpoints

AggregatedCurve make_side(Side side, const PriceGrid& grid, double p_star, double v_star,
                          double slope) {
  const auto snap = [&](double p) { return std::round(p / grid.tick) * grid.tick; };
  const double lo = snap(p_star - kDenseHalfWidth);
  const double hi = snap(p_star + kDenseHalfWidth);
  const double sign = side == Side::Supply ? 1.0 : -1.0;
  const double tail = 0.04 * v_star;  // volume at the far extension end

  std::vector<AggregatedCurve::Point> pts;
  const auto affine = [&](double p) { return v_star + sign * slope * (p - p_star); };

  if (side == Side::Supply) {
    pts.push_back({grid.p_min, tail});
    for (double p = lo; p <= hi + 1e-9; p += kDenseStep) pts.push_back({snap(p), affine(snap(p))});
    pts.push_back({grid.p_max, affine(hi) + tail});
  } else {
    pts.push_back({grid.p_min, affine(lo) + tail});
    for (double p = lo; p <= hi + 1e-9; p += kDenseStep) pts.push_back({snap(p), affine(snap(p))});
    pts.push_back({grid.p_max, tail});
  }
  return AggregatedCurve(side, std::move(pts));
}

struct PriceCoefficients {
  double load = 9e-4;
  double solar = -6e-4;
  double wind = -8e-4;
  double gas = 1.2;
};

}  // namespace

DataBundle generate_synthetic(const SyntheticMarketSpec& spec) {
  spec.validate();
  const PriceCoefficients coef;
  const int lead = 9;  // lag-7 features plus lag-2 fuels need history in front
  const DayNumber start = spec.start - lead;
  const int days = spec.days + lead;

  DataBundle bundle;
  bundle.prices = PriceHistory(start, days);
  bundle.curves = CurveTable(start, days);
  bundle.exog = ExogSeries(start, days);
  bundle.fuels = FuelSeries(start, days);

  for (DayNumber d = start; d < start + days; ++d) {
    SplitMix64 day_rng(split_seed(spec.seed, static_cast<std::uint64_t>(d)));
    const int dow = weekday(d);
    const double week_level = spec.weekly_amplitude * std::sin(2.0 * kPi * (dow - 1) / 7.0);

    const double gas = 20.0 + 3.0 * std::sin(2.0 * kPi * static_cast<double>(d % 90) / 90.0);
    bundle.fuels.set(d, {25.0 + 0.5 * week_level, 90.0, gas, 70.0});

    for (int h = 1; h <= 24; ++h) {
      const double hour_angle = 2.0 * kPi * (h - 8) / 24.0;
      ExogRow exog;
      exog.load = 50000.0 * (1.0 + 0.20 * std::sin(hour_angle) + 0.03 * week_level / 5.0) +
                  300.0 * gaussian(day_rng);
      exog.solar = (h >= 7 && h <= 20)
                       ? 20000.0 * std::max(0.0, std::sin(kPi * (h - 6) / 14.0)) +
                             std::abs(150.0 * gaussian(day_rng))
                       : 0.0;
      exog.wind_on = 15000.0 * (1.0 + 0.5 * std::sin(2.0 * kPi * static_cast<double>(d % 11) / 11.0 +
                                                     h / 24.0)) +
                     400.0 * gaussian(day_rng);
      exog.wind_off = 0.35 * exog.wind_on;
      bundle.exog.set(d, h, exog);

      // Fuels settle two days before delivery is what the price reacts to.
      const double gas_lag =
          20.0 + 3.0 * std::sin(2.0 * kPi * static_cast<double>((d - 2) % 90) / 90.0);
      const double fundamental = spec.base_price + week_level +
                                 spec.daily_amplitude * std::sin(hour_angle) +
                                 coef.load * exog.load + coef.solar * exog.solar +
                                 coef.wind * (exog.wind_on + exog.wind_off) + coef.gas * gas_lag;

      // IA quarter targets ramp within the hour; the DA target is their mean,
      // so the synthetic market carries no built-in DA-IA arbitrage.
      Vec5 target{};
      double quarter_sum = 0.0;
      for (int q = 1; q <= 4; ++q) {
        const double ramp = spec.quarter_ramp * (q - 2.5) / 1.5;
        target[q] = fundamental + ramp + spec.noise_scale * gaussian(day_rng);
        quarter_sum += target[q];
      }
      target[0] = quarter_sum / 4.0;

      MarketCurveSet cell;
      cell.reserve(kNumMarkets);
      Vec5 cleared{};
      for (int m = 0; m < kNumMarkets; ++m) {
        const PriceGrid grid = grid_for_market(m);
        const double liquidity = m == 0 ? spec.da_liquidity : spec.ia_liquidity;
        const double volume = m == 0 ? spec.da_volume : spec.ia_volume;
        const double p_star =
            std::clamp(target[m], grid.p_min + kDenseHalfWidth + 10.0,
                       grid.p_max - kDenseHalfWidth - 10.0);
        AggregatedCurve supply = make_side(Side::Supply, grid, p_star, volume, liquidity);
        AggregatedCurve demand = make_side(Side::Demand, grid, p_star, volume, liquidity);
        cleared[m] = clear(supply, demand).price;
        cell.push_back({std::move(supply), std::move(demand)});
      }
      bundle.curves.set(d, h, std::move(cell));
      bundle.prices.set(d, h, cleared);
    }
  }
  return bundle;
}

}  // namespace bidopt
