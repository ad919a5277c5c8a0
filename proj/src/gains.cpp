#include "bidopt/gains.hpp"

#include <cmath>

namespace bidopt {

double gain_full(const BidVector& b, const Portfolio& v, const Vec5& prices,
                 const FeeSchedule& fees, const ImbalancePrice& imbalance) {
  double gain = 0.0;
  for (int i = 0; i < kNumMarkets; ++i)
    gain += kHourWeights[i] * (prices[i] * b.b[i] - fees.tau[i] * std::abs(b.b[i]));
  for (int j = 0; j < kNumQuarters; ++j) {
    const double covered = b.b[0] + b.b[j + 1];  // S'b with the DA/IA structure
    gain -= std::abs(v.v[j] - covered) * imbalance.r[j];
  }
  return gain;
}

double gain_constrained(const BidVector& b, const Vec5& prices, const FeeSchedule& fees) {
  double gain = 0.0;
  for (int i = 0; i < kNumMarkets; ++i)
    gain += kHourWeights[i] * (prices[i] * b.b[i] - fees.tau[i] * std::abs(b.b[i]));
  return gain;
}

GainBreakdown decompose(double b0, const Portfolio& v, const Vec5& p0, const Vec5& deltas,
                        const FeeSchedule& fees) {
  GainBreakdown out;
  double ia_price_sum = 0.0;
  for (int i = 0; i < kNumQuarters; ++i) {
    out.ia_revenue += 0.25 * p0[i + 1] * v.v[i];
    out.impact += 0.25 * deltas[i + 1] * (v.v[i] - b0);
    ia_price_sum += p0[i + 1];
  }
  out.arbitrage = (p0[0] - 0.25 * ia_price_sum) * b0;
  out.impact += deltas[0] * b0;
  out.fees = transaction_cost(b0, v, fees);
  out.total = out.ia_revenue + out.arbitrage + out.impact - out.fees;
  return out;
}

double actual_gain(const BidVector& b, const Vec5& realized_p0, const Vec5& realized_deltas,
                   const FeeSchedule& fees) {
  Vec5 prices;
  for (int i = 0; i < kNumMarkets; ++i) prices[i] = realized_p0[i] + realized_deltas[i];
  return gain_constrained(b, prices, fees);
}

AverageGain average_gain(std::span<const std::pair<double, Portfolio>> cells) {
  AverageGain avg;
  double sum = 0.0;
  for (const auto& [gain, v] : cells) {
    const double level = v.mean_level();
    if (level == 0.0) {
      ++avg.excluded;
      continue;
    }
    sum += gain / level;
    ++avg.included;
  }
  if (avg.included > 0) avg.per_mwh = sum / static_cast<double>(avg.included);
  return avg;
}

}  // namespace bidopt
