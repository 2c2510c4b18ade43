#pragma once

#include "cda/session/session.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace cda::sweep {

struct LatencyStats {
  double median_us{0.0};
  double mean_us{0.0};
  double p99_us{0.0};
  int calls{0};
};

/// Median, mean and nearest-rank 99th percentile. Throws std::invalid_argument
/// when `samples_us` is empty.
LatencyStats summarize_latency(std::vector<double> samples_us);

struct LatencyFixture {
  std::string market;
  session::SessionConfig config;  // paused half way through
};

/// `per_side` traders of each ticker on each side of `market`.
LatencyFixture make_latency_fixture(const std::string& market, const std::vector<std::string>& tickers,
                                    int per_side, std::uint64_t seed,
                                    const market::ScheduleCatalog& catalog,
                                    const market::OffsetConstants& offsets = {},
                                    const traders::StrategyParams& params = {});

/// Times quote decisions of `ticker` agents in the fixture, paused at
/// mid-session. Each call quotes from a fresh copy of one agent, cycling
/// through the ticker's agents; copying is not timed. Agents without a live
/// assignment are given their most recent one. Throws std::invalid_argument
/// when n_calls < 1 or the ticker has no agents in the fixture.
LatencyStats latency_probe(const std::string& ticker, const LatencyFixture& fixture, int n_calls,
                           std::optional<Ticks> gdx_grid_pad = std::nullopt);

struct LatencyRow {
  std::string market;
  std::string ticker;
  LatencyStats stats;
};

/// One row per (market, ticker) plus a final "Average,ALL" row.
void write_latency_csv(const std::vector<LatencyRow>& rows, std::ostream& out);

}  // namespace cda::sweep
