#include "bidopt/impact.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace bidopt {

void ImpactConfig::validate() const {
  if (!(delta >= 0.0)) throw ValidationError("impact config: delta must be >= 0");
  if (!(slope_fraction > 0.0 && slope_fraction < 1.0))
    throw ValidationError("impact config: slope_fraction must be in (0, 1)");
  if (window < 1) throw ValidationError("impact config: window must be >= 1");
}

CurveForecast forecast_curves(std::span<const MarketCurveSet> history,
                              std::span<const PriceGrid> grids, int window) {
  if (window < 1) throw ValidationError("curve forecast window must be >= 1");
  if (history.size() < static_cast<std::size_t>(window))
    throw InsufficientHistory("curve forecast needs " + std::to_string(window) +
                              " days, have " + std::to_string(history.size()));
  const auto recent = history.subspan(history.size() - static_cast<std::size_t>(window));
  const std::size_t markets = recent.front().size();
  for (const auto& day : recent)
    if (day.size() != markets)
      throw ValidationError("curve history days disagree on market count");
  if (grids.size() != markets)
    throw ValidationError("curve forecast: one price grid per market required");

  CurveForecast fc;
  fc.window = window;
  fc.grids.assign(grids.begin(), grids.end());
  fc.markets.reserve(markets);

  const auto average_side = [&](Side side, std::size_t market) {
    std::set<double> prices;
    for (const auto& day : recent) {
      const auto& curve = side == Side::Supply ? day[market].supply : day[market].demand;
      for (const auto& pt : curve.breakpoints()) prices.insert(pt.price);
    }
    std::vector<AggregatedCurve::Point> pts;
    pts.reserve(prices.size());
    for (double p : prices) {
      double sum = 0.0;
      for (const auto& day : recent) {
        const auto& curve = side == Side::Supply ? day[market].supply : day[market].demand;
        sum += volume_at(curve, p);
      }
      pts.push_back({p, sum / window});
    }
    return AggregatedCurve(side, std::move(pts));
  };

  for (std::size_t m = 0; m < markets; ++m)
    fc.markets.push_back({average_side(Side::Supply, m), average_side(Side::Demand, m)});
  return fc;
}

namespace {

// Curve values at every grid tick by a single sweep over the breakpoints.
std::vector<double> sample_on_grid(const AggregatedCurve& c, const PriceGrid& grid) {
  const auto& pts = c.breakpoints();
  const std::size_t n = grid.num_ticks();
  std::vector<double> out(n);
  std::size_t seg = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double p = grid.p_min + static_cast<double>(k) * grid.tick;
    if (p < pts.front().price) {
      out[k] = c.side() == Side::Supply ? 0.0 : pts.front().volume;
      continue;
    }
    if (p > pts.back().price) {
      out[k] = c.side() == Side::Supply ? pts.back().volume : 0.0;
      continue;
    }
    while (seg + 2 < pts.size() && pts[seg + 1].price <= p) ++seg;
    const auto& a = pts[seg];
    const auto& b = pts[std::min(seg + 1, pts.size() - 1)];
    if (b.price == a.price) {
      out[k] = a.volume;
    } else {
      const double t = std::clamp((p - a.price) / (b.price - a.price), 0.0, 1.0);
      out[k] = a.volume + t * (b.volume - a.volume);
    }
  }
  return out;
}

}  // namespace

ImpactCurve::ImpactCurve(const CurvePair& curves, const PriceGrid& grid) : grid_(grid) {
  grid_.validate();
  if (curves.supply.side() != Side::Supply || curves.demand.side() != Side::Demand)
    throw ValidationError("impact curve: sides are swapped");
  const auto s = sample_on_grid(curves.supply, grid_);
  const auto d = sample_on_grid(curves.demand, grid_);
  excess_.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) excess_[i] = s[i] - d[i];
  if (!(excess_.back() > excess_.front()))
    throw NonMonotoneExcess("excess supply is flat over the whole grid");
}

double ImpactCurve::excess_at(double p) const {
  if (p <= grid_.p_min) return excess_.front();
  if (p >= grid_.p_max) return excess_.back();
  const double pos = (p - grid_.p_min) / grid_.tick;
  const std::size_t i = std::min(static_cast<std::size_t>(pos), excess_.size() - 2);
  const double t = pos - static_cast<double>(i);
  return excess_[i] + t * (excess_[i + 1] - excess_[i]);
}

double ImpactCurve::price_for_excess(double z) const {
  auto it = std::lower_bound(excess_.begin(), excess_.end(), z);
  if (it == excess_.begin()) return grid_.p_min;
  if (it == excess_.end()) return grid_.p_max;
  const std::size_t i = static_cast<std::size_t>(it - excess_.begin());
  const double lo = excess_[i - 1];
  const double hi = excess_[i];
  const double t = (z - lo) / (hi - lo);
  return grid_.p_min + (static_cast<double>(i - 1) + t) * grid_.tick;
}

ImpactCurveSet build_impact_curves(const CurveForecast& fc) {
  ImpactCurveSet out;
  out.reserve(fc.markets.size());
  for (std::size_t m = 0; m < fc.markets.size(); ++m)
    out.emplace_back(fc.markets[m], fc.grids[m]);
  return out;
}

Vec5 scenario_shift(const CurveForecast& fc, const Vec5& p_hat) {
  Vec5 xi{};
  for (std::size_t m = 0; m < fc.markets.size(); ++m) {
    const auto& g = fc.grids[m];
    const double p = std::clamp(p_hat[m], g.p_min, g.p_max);
    xi[m] = volume_at(fc.markets[m].demand, p) - volume_at(fc.markets[m].supply, p);
  }
  return xi;
}

Vec5 impacted_prices(const ImpactCurveSet& ics, const Vec5& xi, const Vec5& b) {
  Vec5 out{};
  for (std::size_t m = 0; m < ics.size(); ++m) out[m] = ics[m].impacted_price(xi[m] + b[m]);
  return out;
}

Vec5 raw_deltas(const ImpactCurveSet& ics, const Vec5& xi, const Vec5& b) {
  Vec5 out{};
  for (std::size_t m = 0; m < ics.size(); ++m) {
    if (b[m] == 0.0) {
      out[m] = 0.0;
      continue;
    }
    out[m] = ics[m].impacted_price(xi[m] + b[m]) - ics[m].impacted_price(xi[m]);
  }
  return out;
}

Vec5 sequential_adjust(const Vec5& raw, double delta_factor) {
  Vec5 out = raw;
  for (int i = 1; i < kNumMarkets; ++i) out[i] += delta_factor * raw[0];
  return out;
}

LinearImpact estimate_linear_impact(const ImpactCurveSet& ics, const Vec5& xi_mean,
                                    const ImpactConfig& config, const Vec5& demand_basis) {
  config.validate();
  LinearImpact li;
  for (std::size_t m = 0; m < ics.size(); ++m) {
    const double nu = config.slope_fraction * demand_basis[m];
    if (!(nu > 0.0))
      throw ValidationError("linear impact: slope increment must be positive in market " +
                            std::to_string(m));
    const double hi = ics[m].impacted_price(xi_mean[m] + nu);
    const double lo = ics[m].impacted_price(xi_mean[m] - nu);
    const auto& g = ics[m].grid();
    if (hi == lo && (hi == g.p_min || hi == g.p_max))
      throw DegenerateSlope("linear impact: both evaluations clamp to the grid bound in market " +
                            std::to_string(m));
    li.a[m] = (hi - lo) / (2.0 * nu);
  }
  return li;
}

}  // namespace bidopt
