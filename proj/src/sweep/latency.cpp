#include "cda/sweep/latency.hpp"

#include "cda/traders/gdx.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace cda::sweep {

LatencyStats summarize_latency(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("latency report needs at least one call");
  std::sort(v.begin(), v.end());
  LatencyStats s;
  s.calls = static_cast<int>(v.size());
  const std::size_t n = v.size();
  s.median_us = n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
  s.mean_us = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
  const auto rank = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(n)));
  s.p99_us = v[std::max<std::size_t>(rank, 1) - 1];
  return s;
}

LatencyFixture make_latency_fixture(const std::string& market, const std::vector<std::string>& tickers,
                                    int per_side, std::uint64_t seed,
                                    const market::ScheduleCatalog& catalog,
                                    const market::OffsetConstants& offsets,
                                    const traders::StrategyParams& params) {
  LatencyFixture f;
  f.market = market;
  f.config.env = market::make_market(market, catalog, offsets);
  for (const auto& t : tickers) {
    f.config.buyers.push_back({t, per_side});
    f.config.sellers.push_back({t, per_side});
  }
  f.config.seed = seed;
  f.config.strategies = params;
  return f;
}

LatencyStats latency_probe(const std::string& ticker, const LatencyFixture& fixture, int n_calls,
                           std::optional<Ticks> gdx_grid_pad) {
  if (n_calls < 1) throw std::invalid_argument("latency probe needs at least one call");
  session::Session s(fixture.config);
  const SimTime mid = s.end_time() / 2 + fixture.config.clock().polls_per_day / 4;
  s.advance_to(mid);
  const auto view = s.view();

  std::vector<const traders::Agent*> pool;
  for (const auto& a : s.agents())
    if (a->ticker() == ticker && s.last_limit(a->id()) > 0) pool.push_back(a.get());
  if (pool.empty()) throw std::invalid_argument("no " + ticker + " agents in the latency fixture");

  std::vector<double> us;
  us.reserve(static_cast<std::size_t>(n_calls));
  volatile Ticks sink = 0;
  for (int i = 0; i < n_calls; ++i) {
    const auto* src = pool[static_cast<std::size_t>(i) % pool.size()];
    auto agent = src->clone();
    if (!agent->active()) {
      market::Assignment a;
      a.role = agent->role();
      a.limit = Price(s.last_limit(agent->id()));
      a.issue_time = view.time;
      a.trader = agent->id();
      agent->assign(a);
    }
    if (gdx_grid_pad)
      if (auto* g = dynamic_cast<traders::GdxTrader*>(agent.get())) g->set_grid_pad(*gdx_grid_pad);
    const auto t0 = std::chrono::steady_clock::now();
    const auto q = agent->quote(view);
    const auto t1 = std::chrono::steady_clock::now();
    if (q) sink = sink + q->ticks();
    us.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
  }
  return summarize_latency(std::move(us));
}

void write_latency_csv(const std::vector<LatencyRow>& rows, std::ostream& out) {
  char buf[128];
  out << "market,ticker,median_us,mean_us,p99_us,calls\n";
  double med = 0, mean = 0, p99 = 0;
  long calls = 0;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.3f,%.3f,%.3f,%d", r.stats.median_us, r.stats.mean_us,
                  r.stats.p99_us, r.stats.calls);
    out << r.market << ',' << r.ticker << ',' << buf << '\n';
    med += r.stats.median_us;
    mean += r.stats.mean_us;
    p99 += r.stats.p99_us;
    calls += r.stats.calls;
  }
  const double n = rows.empty() ? 1.0 : static_cast<double>(rows.size());
  std::snprintf(buf, sizeof buf, "%.3f,%.3f,%.3f,%ld", med / n, mean / n, p99 / n, calls);
  out << "Average,ALL," << buf << '\n';
}

}  // namespace cda::sweep
