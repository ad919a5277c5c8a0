#pragma once

#include <span>
#include <vector>

#include "bidopt/common.hpp"
#include "bidopt/curves.hpp"

namespace bidopt {

/// Supply/demand curve pair of one auction.
struct CurvePair {
  AggregatedCurve supply;
  AggregatedCurve demand;
};

/// Curves of all five auctions of one delivery hour (index 0 = DA, 1..4 = IA).
using MarketCurveSet = std::vector<CurvePair>;

struct ImpactConfig {
  double delta = 1.0;           ///< market efficiency factor coupling DA impact into IA
  double slope_fraction = 0.05; ///< fraction of clearing volume used as slope increment
  int window = 28;              ///< curve averaging window K in days

  void validate() const;
};

/// Functional moving average of the last K days' curves, per market.
struct CurveForecast {
  MarketCurveSet markets;        ///< averaged supply/demand pair per market
  std::vector<PriceGrid> grids;  ///< price grid per market
  int window = 0;                ///< number of days averaged
};

/// Pointwise mean of the K most recent daily curve sets (history ordered
/// oldest to newest). The mean is taken over the union of the days'
/// breakpoints, which is exact for piecewise-linear curves sharing their
/// extreme bid prices. Throws InsufficientHistory when fewer than K days.
CurveForecast forecast_curves(std::span<const MarketCurveSet> history,
                              std::span<const PriceGrid> grids, int window);

/// Excess supply z(p) = A_S(p) - A_D(p) tabulated at every grid tick.
///
/// z is non-decreasing in price. The inverse lookup is the workhorse for
/// market impact: a bid b shifts the curve system so the clearing moves to
/// the price where z equals -(xi + b).
class ImpactCurve {
 public:
  ImpactCurve(const CurvePair& curves, const PriceGrid& grid);

  const PriceGrid& grid() const { return grid_; }
  std::span<const double> table() const { return excess_; }

  /// Excess supply at price p (linear between ticks, clamped outside).
  double excess_at(double p) const;

  /// Price where the excess supply equals z, clamped to [p_min, p_max]. On a
  /// flat run of the table the lowest matching price is returned.
  double price_for_excess(double z) const;

  /// Clearing price after a volume offset w has been added to the supply
  /// side (w = xi + b). Non-increasing in w: extra supply lowers the price.
  double impacted_price(double w) const { return price_for_excess(-w); }

 private:
  PriceGrid grid_;
  std::vector<double> excess_;
};

/// Per-market impact curves for one delivery hour.
using ImpactCurveSet = std::vector<ImpactCurve>;

ImpactCurveSet build_impact_curves(const CurveForecast& fc);

/// Volume offsets aligning the forecast curves with scenario prices:
/// xi_i = A_D(p_i) - A_S(p_i) evaluated on the forecast curves, with p
/// clamped to the market grid. By construction the offset system clears at
/// the scenario price again.
Vec5 scenario_shift(const CurveForecast& fc, const Vec5& p_hat);

/// Prices after bidding b on top of the scenario offset xi.
Vec5 impacted_prices(const ImpactCurveSet& ics, const Vec5& xi, const Vec5& b);

/// Price impacts of bid b relative to the zero-bid baseline; exactly zero
/// when b is zero.
Vec5 raw_deltas(const ImpactCurveSet& ics, const Vec5& xi, const Vec5& b);

/// Sequential market adjustment: the DA auction clears first, so a fraction
/// delta_factor of its price impact carries into each IA quarter.
Vec5 sequential_adjust(const Vec5& raw, double delta_factor);

/// Expected linear price impact per MW of own bid, one slope per market.
struct LinearImpact {
  Vec5 a{};
};

/// Central-difference slope of the impacted-price map around the mean
/// scenario offset, with increment nu_i = slope_fraction * demand_basis_i.
/// demand_basis is the forecast demand volume at the expected price.
/// Throws DegenerateSlope when both evaluations clamp to the same grid bound.
LinearImpact estimate_linear_impact(const ImpactCurveSet& ics, const Vec5& xi_mean,
                                    const ImpactConfig& config, const Vec5& demand_basis);

}  // namespace bidopt
