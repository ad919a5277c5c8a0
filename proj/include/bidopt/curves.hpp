#pragma once

#include <map>
#include <utility>
#include <vector>

#include "bidopt/common.hpp"

namespace bidopt {

/// Admissible bid prices of one auction: p_min + k * tick up to p_max.
struct PriceGrid {
  double p_min = -500.0;
  double p_max = 3000.0;
  double tick = 0.1;

  void validate() const;
  bool contains(double p) const { return p >= p_min && p <= p_max; }
  /// True when p lies on the grid within 1e-9.
  bool on_grid(double p) const;
  std::size_t num_ticks() const;
};

/// German market defaults: the day-ahead grid starts at -500 EUR/MWh,
/// the intraday auction grid at -3000 EUR/MWh, both end at 3000 EUR/MWh.
inline PriceGrid da_grid() { return {-500.0, 3000.0, 0.1}; }
inline PriceGrid ia_grid() { return {-3000.0, 3000.0, 0.1}; }
inline PriceGrid grid_for_market(int market) { return market == 0 ? da_grid() : ia_grid(); }

/// Volume bids of one auction side, aggregated per price level.
class BidLadder {
 public:
  BidLadder(Side side, PriceGrid grid) : side_(side), grid_(std::move(grid)) {}

  /// Adds volume at a price; bids at the same price accumulate.
  void add(double price, double volume);

  Side side() const { return side_; }
  const PriceGrid& grid() const { return grid_; }
  const std::map<double, double>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

 private:
  Side side_;
  PriceGrid grid_;
  std::map<double, double> entries_;
};

/// Cumulative volume as a piecewise-linear function of price.
///
/// Breakpoints are the bidden prices. Supply accumulates upward in price,
/// demand downward. Outside the bidden span the curve follows the
/// cumulative-sum convention: supply is 0 below its lowest bidden price and
/// total volume above the highest; demand mirrors this (0 above the highest,
/// total volume below the lowest).
class AggregatedCurve {
 public:
  struct Point {
    double price;
    double volume;
  };

  AggregatedCurve(Side side, std::vector<Point> breakpoints);

  Side side() const { return side_; }
  const std::vector<Point>& breakpoints() const { return points_; }

  double min_price() const { return points_.front().price; }
  double max_price() const { return points_.back().price; }
  /// Smallest cumulative volume among breakpoints.
  double min_volume() const;
  /// Largest cumulative volume among breakpoints (total bid volume).
  double max_volume() const;

  /// Returns a copy with `delta` added to every cumulative volume, i.e. the
  /// effect of an extra unlimited bid at this side's extreme price.
  AggregatedCurve shifted(double delta) const;

 private:
  Side side_;
  std::vector<Point> points_;
};

struct ClearingResult {
  double price = 0.0;
  double volume = 0.0;
  /// Set when the curves do not cross and the extreme-price fallback applied.
  bool degenerate = false;
};

/// Cumulative bid volume at every bidden price.
AggregatedCurve aggregate(const BidLadder& ladder);

/// Curve value at price p: exact at breakpoints, linear in between, constant
/// extension rules outside the bidden span.
double volume_at(const AggregatedCurve& curve, double p);

/// Pseudo-inverse of volume_at. On a flat stretch returns the lowest price of
/// the stretch for supply and the highest for demand, so that
/// volume_at(curve, price_at(curve, z)) == z. Throws VolumeOutOfRange when z
/// lies outside [min_volume, max_volume].
double price_at(const AggregatedCurve& curve, double z);

/// Market clearing point: the root of the excess supply A_S(p) - A_D(p).
/// When the difference is zero over a price interval, the midpoint of that
/// interval is returned. When the curves do not cross at all, the result is
/// clamped to the nearer span end and flagged degenerate.
ClearingResult clear(const AggregatedCurve& supply, const AggregatedCurve& demand);

/// Applies the trader's own unlimited bid b (MW, sign = side) to the pair of
/// curves: b > 0 raises all supply volumes by b, b < 0 raises all demand
/// volumes by |b|, b == 0 is the identity.
std::pair<AggregatedCurve, AggregatedCurve> shift_by_own_bid(
    const AggregatedCurve& supply, const AggregatedCurve& demand, double b);

}  // namespace bidopt
