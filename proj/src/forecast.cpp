#include "bidopt/forecast.hpp"

#include "bidopt/rng.hpp"

namespace bidopt {

Vec5 naive_forecast(const PriceHistory& history, DayNumber d, int hour) {
  const int dow = weekday(d);
  const bool weekly = dow == 1 || dow == 6 || dow == 7;  // Monday, Saturday, Sunday
  return history.at(weekly ? d - 7 : d - 1, hour);
}

std::array<double, kNumRegressors> FeatureRow::regressors(int market) const {
  std::array<double, kNumRegressors> x{};
  x[0] = lag1[market];
  x[1] = lag2[market];
  x[2] = lag7[market];
  x[3] = last_hour[market];
  x[4] = prev_min[market];
  x[5] = prev_max[market];
  for (int k = 0; k < 7; ++k) x[6 + k] = dow[k];
  x[13] = load;
  x[14] = solar;
  x[15] = wind_on;
  x[16] = wind_off;
  x[17] = eua;
  x[18] = coal;
  x[19] = gas;
  x[20] = oil;
  return x;
}

ExpertFit fit_expert(std::span<const FeatureRow> rows, std::span<const Vec5> targets) {
  if (rows.size() != targets.size())
    throw LayoutMismatch("expert fit: rows and targets differ in length");
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (n < kNumRegressors)
    throw WindowTooShort("expert fit: window of " + std::to_string(rows.size()) +
                         " days is shorter than " + std::to_string(kNumRegressors) +
                         " regressors");

  ExpertFit fit;
  fit.residuals.assign(rows.size(), Vec5{});

  Eigen::MatrixXd design(n, kNumRegressors);
  for (int market = 0; market < kNumMarkets; ++market) {
    for (Eigen::Index r = 0; r < n; ++r) {
      const auto x = rows[static_cast<std::size_t>(r)].regressors(market);
      for (int c = 0; c < kNumRegressors; ++c) design(r, c) = x[c];
    }
    Eigen::VectorXd y(n);
    for (Eigen::Index r = 0; r < n; ++r) y(r) = targets[static_cast<std::size_t>(r)][market];

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
    fit.beta[market] = cod.solve(y);

    const Eigen::VectorXd fitted = design * fit.beta[market];
    for (Eigen::Index r = 0; r < n; ++r)
      fit.residuals[static_cast<std::size_t>(r)][market] = y(r) - fitted(r);
  }
  return fit;
}

Vec5 expert_forecast(const ExpertFit& fit, const FeatureRow& row) {
  Vec5 out{};
  for (int market = 0; market < kNumMarkets; ++market) {
    const auto& beta = fit.beta[market];
    if (beta.size() != kNumRegressors)
      throw LayoutMismatch("expert forecast: coefficient vector has " +
                           std::to_string(beta.size()) + " entries, expected " +
                           std::to_string(kNumRegressors));
    const auto x = row.regressors(market);
    double acc = 0.0;
    for (int c = 0; c < kNumRegressors; ++c) acc += beta(c) * x[c];
    out[market] = acc;
  }
  return out;
}

ScenarioSet bootstrap_scenarios(const Vec5& expected, std::span<const Vec5> residuals,
                                std::size_t count, std::uint64_t seed) {
  if (residuals.empty()) throw EmptyResiduals("bootstrap needs a non-empty residual store");
  if (count < 1) throw ValidationError("bootstrap needs at least one scenario");

  ScenarioSet set;
  set.seed = seed;
  set.scenarios.reserve(count);
  SplitMix64 rng(seed);
  for (std::size_t m = 0; m < count; ++m) {
    const auto& eps = residuals[rng.uniform_index(residuals.size())];
    Vec5 s;
    for (int i = 0; i < kNumMarkets; ++i) s[i] = expected[i] + eps[i];
    set.scenarios.push_back(s);
  }
  return set;
}

}  // namespace bidopt
