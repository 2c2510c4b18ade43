#include "cda/metrics/metrics.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cda::metrics {

std::optional<AlphaValue> smiths_alpha(std::span<const double> prices,
                                       std::span<const double> p0) {
  if (prices.size() != p0.size()) throw std::invalid_argument("alpha: size mismatch");
  if (prices.empty()) return std::nullopt;
  double ss = 0.0;
  double p0_sum = 0.0;
  for (std::size_t i = 0; i < prices.size(); ++i) {
    ss += (prices[i] - p0[i]) * (prices[i] - p0[i]);
    p0_sum += p0[i];
  }
  const double n = static_cast<double>(prices.size());
  const double rms = std::sqrt(ss / n);
  const double mean_p0 = p0_sum / n;
  if (!(mean_p0 > 0.0)) return std::nullopt;
  return AlphaValue{100.0 * rms / mean_p0, rms};
}

double efficiency(double realized, double optimum) noexcept {
  return optimum > 0.0 ? 100.0 * realized / optimum : 0.0;
}

double profit_dispersion(std::span<const double> realized, std::span<const double> expected) {
  if (realized.size() != expected.size()) throw std::invalid_argument("pd: size mismatch");
  if (realized.empty()) return 0.0;
  double ss = 0.0;
  for (std::size_t i = 0; i < realized.size(); ++i)
    ss += (realized[i] - expected[i]) * (realized[i] - expected[i]);
  return std::sqrt(ss / static_cast<double>(realized.size()));
}

Efficiency allocative_efficiency(const session::SessionResult& r) {
  Efficiency e;
  double realized = 0.0;
  double optimum = 0.0;
  for (const auto& t : r.traders) realized += static_cast<double>(t.profit);
  for (const auto& d : r.days) optimum += static_cast<double>(d.max_surplus);
  e.global = efficiency(realized, optimum);

  std::map<std::string, std::pair<double, double>> acc;
  for (const auto& t : r.traders) {
    auto& [got, exp] = acc[t.ticker];
    got += static_cast<double>(t.profit);
    exp += t.expected;
  }
  for (const auto& [ticker, v] : acc) e.by_strategy[ticker] = efficiency(v.first, v.second);
  return e;
}

session::MetricsBundle compute_metrics(const session::SessionResult& r) {
  session::MetricsBundle m;
  const double unit = kTicksPerUnit;

  std::vector<double> prices, p0s;
  for (const auto& t : r.trades) {
    prices.push_back(static_cast<double>(t.price));
    p0s.push_back(t.p0);
  }
  if (auto a = smiths_alpha(prices, p0s)) {
    m.alpha = a->percent;
    m.alpha_rms = a->rms / unit;
  }
  const auto eff = allocative_efficiency(r);
  m.ae_global = eff.global;
  m.ae_by_strategy = eff.by_strategy;

  std::vector<double> got, exp;
  for (const auto& t : r.traders) {
    got.push_back(static_cast<double>(t.profit) / unit);
    exp.push_back(t.expected / unit);
  }
  m.pd = profit_dispersion(got, exp);

  for (int day = 1; day <= r.n_days; ++day) {
    const auto d = static_cast<std::size_t>(day - 1);
    std::vector<double> dp, dp0;
    for (const auto& t : r.trades)
      if (t.day == day) {
        dp.push_back(static_cast<double>(t.price));
        dp0.push_back(t.p0);
      }
    const auto a = smiths_alpha(dp, dp0);
    m.alpha_by_day.push_back(a ? std::optional<double>(a->percent) : std::nullopt);

    double realized = 0.0;
    std::vector<double> g, x;
    for (const auto& t : r.traders) {
      realized += static_cast<double>(t.daily_profit[d]);
      g.push_back(static_cast<double>(t.daily_profit[d]) / unit);
      x.push_back(t.daily_expected[d] / unit);
    }
    const double opt = d < r.days.size() ? static_cast<double>(r.days[d].max_surplus) : 0.0;
    m.ae_by_day.push_back(efficiency(realized, opt));
    m.pd_by_day.push_back(profit_dispersion(g, x));
  }
  return m;
}

}  // namespace cda::metrics
