#include "bidopt/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bidopt {

namespace {

constexpr double kGridEps = 1e-9;

}  // namespace

void PriceGrid::validate() const {
  if (!(p_min < p_max)) throw ValidationError("price grid: p_min must be < p_max");
  if (!(tick > 0.0)) throw ValidationError("price grid: tick must be positive");
  const double span = (p_max - p_min) / tick;
  if (std::abs(span - std::round(span)) > kGridEps)
    throw ValidationError("price grid: span is not a multiple of the tick");
}

bool PriceGrid::on_grid(double p) const {
  if (!std::isfinite(p) || p < p_min - kGridEps || p > p_max + kGridEps) return false;
  const double steps = (p - p_min) / tick;
  return std::abs(steps - std::round(steps)) <= 1e-6;
}

std::size_t PriceGrid::num_ticks() const {
  return static_cast<std::size_t>(std::llround((p_max - p_min) / tick)) + 1;
}

void BidLadder::add(double price, double volume) {
  if (!grid_.on_grid(price))
    throw OffGridPrice("bid price " + std::to_string(price) + " is not on the price grid");
  if (!(volume >= 0.0))
    throw ValidationError("bid volume must be non-negative, got " + std::to_string(volume));
  entries_[price] += volume;
}

AggregatedCurve::AggregatedCurve(Side side, std::vector<Point> breakpoints)
    : side_(side), points_(std::move(breakpoints)) {
  if (points_.empty()) throw EmptyLadder("aggregated curve needs at least one breakpoint");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (!(points_[i - 1].price < points_[i].price))
      throw ValidationError("aggregated curve: breakpoint prices must be strictly increasing");
    const bool ok = side_ == Side::Supply ? points_[i].volume >= points_[i - 1].volume - kGridEps
                                          : points_[i].volume <= points_[i - 1].volume + kGridEps;
    if (!ok) throw ValidationError("aggregated curve: cumulative volume not monotone");
  }
}

double AggregatedCurve::min_volume() const {
  return side_ == Side::Supply ? points_.front().volume : points_.back().volume;
}

double AggregatedCurve::max_volume() const {
  return side_ == Side::Supply ? points_.back().volume : points_.front().volume;
}

AggregatedCurve AggregatedCurve::shifted(double delta) const {
  std::vector<Point> pts = points_;
  for (auto& p : pts) p.volume += delta;
  return AggregatedCurve(side_, std::move(pts));
}

AggregatedCurve aggregate(const BidLadder& ladder) {
  if (ladder.empty()) throw EmptyLadder("cannot aggregate an empty bid ladder");
  std::vector<AggregatedCurve::Point> pts;
  pts.reserve(ladder.entries().size());
  for (const auto& [price, volume] : ladder.entries()) pts.push_back({price, volume});
  if (ladder.side() == Side::Supply) {
    double cum = 0.0;
    for (auto& p : pts) {
      cum += p.volume;
      p.volume = cum;
    }
  } else {
    double cum = 0.0;
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
      cum += it->volume;
      it->volume = cum;
    }
  }
  return AggregatedCurve(ladder.side(), std::move(pts));
}

namespace {

// Interpolates within the breakpoint span; pre: front.price <= p <= back.price.
double interp_inside(const std::vector<AggregatedCurve::Point>& pts, double p) {
  auto it = std::lower_bound(pts.begin(), pts.end(), p,
                             [](const AggregatedCurve::Point& a, double x) { return a.price < x; });
  if (it != pts.end() && it->price == p) return it->volume;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double t = (p - lo.price) / (hi.price - lo.price);
  return lo.volume + t * (hi.volume - lo.volume);
}

}  // namespace

double volume_at(const AggregatedCurve& curve, double p) {
  const auto& pts = curve.breakpoints();
  if (curve.side() == Side::Supply) {
    if (p < pts.front().price) return 0.0;
    if (p > pts.back().price) return pts.back().volume;
  } else {
    if (p > pts.back().price) return 0.0;
    if (p < pts.front().price) return pts.front().volume;
  }
  return interp_inside(pts, p);
}

double price_at(const AggregatedCurve& curve, double z) {
  const auto& pts = curve.breakpoints();
  const double lo = curve.min_volume();
  const double hi = curve.max_volume();
  if (!(z >= lo - kGridEps && z <= hi + kGridEps))
    throw VolumeOutOfRange("volume " + std::to_string(z) + " outside curve range [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "]");
  z = std::clamp(z, lo, hi);

  if (curve.side() == Side::Supply) {
    // Volumes are non-decreasing in price; the lowest price attaining z wins.
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].volume >= z) {
        if (i == 0 || pts[i].volume == z) {
          // On a flat run lower_bound semantics would pick the rightmost
          // equal breakpoint; walk back to the leftmost.
          std::size_t j = i;
          while (j > 0 && pts[j - 1].volume == z) --j;
          if (pts[j].volume == z) return pts[j].price;
        }
        const auto& a = pts[i - 1];
        const auto& b = pts[i];
        const double t = (z - a.volume) / (b.volume - a.volume);
        return a.price + t * (b.price - a.price);
      }
    }
  } else {
    // Volumes are non-increasing in price; the highest price attaining z wins.
    for (std::size_t i = pts.size(); i-- > 0;) {
      if (pts[i].volume >= z) {
        if (i + 1 == pts.size() || pts[i].volume == z) {
          std::size_t j = i;
          while (j + 1 < pts.size() && pts[j + 1].volume == z) ++j;
          if (pts[j].volume == z) return pts[j].price;
        }
        const auto& a = pts[i];
        const auto& b = pts[i + 1];
        const double t = (z - a.volume) / (b.volume - a.volume);
        return a.price + t * (b.price - a.price);
      }
    }
  }
  throw VolumeOutOfRange("volume lookup failed");  // unreachable given range check
}

namespace {

// One-sided curve evaluation. The aggregated curve jumps where the
// cumulative-sum extension meets the first (supply) or last (demand)
// breakpoint; limits from the two sides differ exactly there.
double volume_left_limit(const AggregatedCurve& c, double p) {
  if (c.side() == Side::Supply && p == c.min_price()) return 0.0;
  return volume_at(c, p);
}

double volume_right_limit(const AggregatedCurve& c, double p) {
  if (c.side() == Side::Demand && p == c.max_price()) return 0.0;
  return volume_at(c, p);
}

}  // namespace

ClearingResult clear(const AggregatedCurve& supply, const AggregatedCurve& demand) {
  if (supply.side() != Side::Supply || demand.side() != Side::Demand)
    throw IncompatibleGrids("clear() expects a supply curve and a demand curve");

  const double p_lo = std::min(supply.min_price(), demand.min_price());
  const double p_hi = std::max(supply.max_price(), demand.max_price());

  // No-crossing fallbacks: clamp to the span end on the short side.
  const double f_lo = volume_at(supply, p_lo) - volume_at(demand, p_lo);
  const double f_hi = volume_at(supply, p_hi) - volume_at(demand, p_hi);
  if (f_lo > 0.0) return {p_lo, volume_at(demand, p_lo), true};
  if (f_hi < 0.0) return {p_hi, volume_at(supply, p_hi), true};

  // Knots of the piecewise-linear excess supply f = A_S - A_D.
  std::vector<double> knots;
  knots.reserve(supply.breakpoints().size() + demand.breakpoints().size());
  for (const auto& p : supply.breakpoints()) knots.push_back(p.price);
  for (const auto& p : demand.breakpoints()) knots.push_back(p.price);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  const auto f_at = [&](double p) { return volume_at(supply, p) - volume_at(demand, p); };
  const auto f_left = [&](double p) {
    return volume_left_limit(supply, p) - volume_left_limit(demand, p);
  };
  const auto f_right = [&](double p) {
    return volume_right_limit(supply, p) - volume_right_limit(demand, p);
  };

  // f is non-decreasing in p (up-jumps possible at the extension knots), so
  // the zero set is a point or an interval. Locate both ends.
  double z_lo = std::numeric_limits<double>::quiet_NaN();
  double z_hi = std::numeric_limits<double>::quiet_NaN();

  for (std::size_t i = 0; i < knots.size(); ++i) {
    const double k = knots[i];
    if (f_at(k) >= 0.0 && f_left(k) <= 0.0) {
      z_lo = k;  // zero reached at (or jumped over at) the knot itself
      break;
    }
    if (i + 1 < knots.size()) {
      const double a = f_right(k);
      const double b = f_left(knots[i + 1]);
      if (a <= 0.0 && b >= 0.0) {
        z_lo = b > a ? k + (knots[i + 1] - k) * (-a) / (b - a) : k;
        break;
      }
    }
  }
  for (std::size_t i = knots.size(); i-- > 0;) {
    const double k = knots[i];
    if (f_at(k) <= 0.0 && f_right(k) >= 0.0) {
      z_hi = k;
      break;
    }
    if (i > 0) {
      const double a = f_right(knots[i - 1]);
      const double b = f_left(k);
      if (a <= 0.0 && b >= 0.0) {
        z_hi = b > a ? knots[i - 1] + (k - knots[i - 1]) * (-a) / (b - a) : k;
        break;
      }
    }
  }
  if (std::isnan(z_lo)) z_lo = p_lo;  // f >= 0 on the whole span
  if (std::isnan(z_hi)) z_hi = p_hi;  // f <= 0 on the whole span

  const double p_star = 0.5 * (z_lo + z_hi);
  const double v_star = std::min(volume_at(supply, p_star), volume_at(demand, p_star));
  return {p_star, v_star, false};
}

std::pair<AggregatedCurve, AggregatedCurve> shift_by_own_bid(const AggregatedCurve& supply,
                                                             const AggregatedCurve& demand,
                                                             double b) {
  if (b > 0.0) return {supply.shifted(b), demand};
  if (b < 0.0) return {supply, demand.shifted(-b)};
  return {supply, demand};
}

}  // namespace bidopt
