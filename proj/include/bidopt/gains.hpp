#pragma once

#include <span>
#include <utility>

#include "bidopt/common.hpp"
#include "bidopt/strategy.hpp"

namespace bidopt {

/// Uniform balancing energy price per quarter hour, charged on any residual
/// imbalance.
struct ImbalancePrice {
  Vec4 r{};
};

/// The four interpretable components of the constrained trading gain.
struct GainBreakdown {
  double ia_revenue = 0.0;  ///< revenue of the volume itself at IA prices
  double arbitrage = 0.0;   ///< DA-IA price spread earned on b0
  double impact = 0.0;      ///< own price impact, always a drag for aligned bids
  double fees = 0.0;        ///< transaction costs
  double total = 0.0;       ///< ia_revenue + arbitrage + impact - fees
};

/// Trading gain with the imbalance penalty: revenue minus fees minus
/// |v - S'b| priced at the imbalance price. Reduces to gain_constrained when
/// the bid covers the portfolio exactly.
double gain_full(const BidVector& b, const Portfolio& v, const Vec5& prices,
                 const FeeSchedule& fees, const ImbalancePrice& imbalance);

/// Trading gain of a constraint-satisfying bid: sum_i P_i s_i b_i - sum_i tau_i s_i |b_i|.
double gain_constrained(const BidVector& b, const Vec5& prices, const FeeSchedule& fees);

/// Splits the constrained gain of (b0, v - b0) into the four components.
/// p0 are unimpacted prices, deltas the (sequentially adjusted) own impacts.
GainBreakdown decompose(double b0, const Portfolio& v, const Vec5& p0, const Vec5& deltas,
                        const FeeSchedule& fees);

/// Realized gain of a submitted bid against realized prices and impacts.
double actual_gain(const BidVector& b, const Vec5& realized_p0, const Vec5& realized_deltas,
                   const FeeSchedule& fees);

struct AverageGain {
  double per_mwh = 0.0;        ///< mean of gain / (mean portfolio level)
  std::size_t included = 0;    ///< cells entering the average
  std::size_t excluded = 0;    ///< zero-volume cells left out
};

/// Volume-normalized average over (gain, portfolio) cells; hours whose
/// portfolio sums to zero are excluded and counted.
AverageGain average_gain(std::span<const std::pair<double, Portfolio>> cells);

}  // namespace bidopt
