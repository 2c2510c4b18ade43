#pragma once

#include "cda/exchange/order_book.hpp"
#include "cda/market/env.hpp"
#include "cda/traders/agent.hpp"
#include "cda/traders/params.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cda::session {

struct RosterEntry {
  std::string ticker;
  int count{0};
};

struct SessionConfig {
  market::MarketEnv env;
  std::vector<RosterEntry> buyers;
  std::vector<RosterEntry> sellers;
  int n_days{20};
  double day_length{300.0};
  int polls_per_second{8};
  std::uint64_t seed{0};
  traders::StrategyParams strategies;
  bool record_tape{false};
  int tape_tail{32};  // recent trades visible to traders

  [[nodiscard]] int per_side() const;
  [[nodiscard]] market::SessionClock clock() const;
  /// Throws std::invalid_argument describing the first problem found.
  void validate() const;
};

struct TraderRow {
  TraderId id{0};
  std::string ticker;
  Role role{Role::Buyer};
  Ticks profit{0};
  double expected{0.0};  // ticks, had every assignment traded at the equilibrium price
  int trades{0};
  int assignments{0};
  std::vector<Ticks> daily_profit;
  std::vector<double> daily_expected;
};

struct TradeRecord {
  SimTime time{0};
  int day{1};
  Ticks price{0};
  TraderId buyer{0};
  TraderId seller{0};
  Ticks buyer_limit{0};
  Ticks seller_limit{0};
  double p0{0.0};  // equilibrium in force at the trade, ticks
};

struct DayRecord {
  int day{1};
  std::string schedule;
  std::optional<double> p0;  // ticks, at day start
  int q0{0};
  Ticks max_surplus{0};
};

struct MetricsBundle {
  std::optional<double> alpha;      // percent
  std::optional<double> alpha_rms;  // currency
  double ae_global{0.0};
  std::map<std::string, double> ae_by_strategy;
  double pd{0.0};  // currency
  std::vector<std::optional<double>> alpha_by_day;
  std::vector<double> ae_by_day;
  std::vector<double> pd_by_day;
};

struct SessionResult {
  std::uint64_t seed{0};
  std::string market;
  bool ok{true};
  std::string error;
  int n_days{0};
  std::vector<TraderRow> traders;
  std::vector<TradeRecord> trades;
  std::vector<DayRecord> days;
  std::vector<exchange::TapeEvent> tape;  // only when record_tape is set
  MetricsBundle metrics;

  [[nodiscard]] int negative_surplus_trades() const noexcept;
};

/// A session that can be advanced poll by poll. Ticks run from 0 to
/// n_days * polls_per_day - 1.
class Session {
public:
  /// Throws std::invalid_argument on a bad config.
  explicit Session(const SessionConfig& config);
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  /// Processes every tick before `until`.
  void advance_to(SimTime until);
  [[nodiscard]] SimTime now() const noexcept;
  [[nodiscard]] SimTime end_time() const noexcept;
  [[nodiscard]] bool done() const noexcept;
  /// Runs any remaining ticks and returns the result with metrics filled in.
  SessionResult finish();

  /// What a trader polled at the current tick would see.
  [[nodiscard]] traders::MarketView view() const;
  [[nodiscard]] std::span<const std::unique_ptr<traders::Agent>> agents() const noexcept;
  /// Limit of the trader's most recent assignment, 0 before the first.
  [[nodiscard]] Ticks last_limit(TraderId id) const;
  [[nodiscard]] const exchange::OrderBook& book() const noexcept;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Runs one session. Configuration errors throw std::invalid_argument;
/// anything thrown while trading is caught and reported through ok/error.
SessionResult run_session(const SessionConfig& config);

/// Public market state for a trader about to quote.
traders::MarketView snapshot_view(const exchange::OrderBook& book,
                                  std::span<const exchange::TapeEvent> trade_tail, SimTime time,
                                  int day, double session_seconds);

/// Seed of the trader with this id inside a session seeded with `session_seed`.
std::uint64_t agent_seed(std::uint64_t session_seed, TraderId id) noexcept;

}  // namespace cda::session
