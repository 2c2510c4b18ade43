#pragma once

#include "cda/exchange/order_book.hpp"
#include "cda/market/env.hpp"
#include "cda/types.hpp"

#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string_view>

namespace cda::traders {

/// Read-only snapshot of public market state handed to a trader.
struct MarketView {
  std::optional<Price> best_bid;
  std::optional<Price> best_ask;
  int bid_depth{0};  // aggregate qty at the best bid
  int ask_depth{0};
  std::optional<double> microprice;  // ticks
  std::span<const exchange::TapeEvent> tape_tail;  // recent trades, oldest first
  SimTime time{0};
  int day{1};
  double session_seconds{0.0};
};

enum class EventKind : std::uint8_t { Shout, Trade, Cancel };

/// A public market event fanned out to every trader.
///
/// For a shout, `side`/`price` describe the resting quote. For a trade,
/// `price` is the execution price, `side` the aggressor side and `quote` the
/// aggressor's own limit price.
struct MarketEvent {
  EventKind kind{EventKind::Shout};
  SimTime time{0};
  Side side{Side::Bid};
  Price price{};
  Price quote{};
  TraderId trader{-1};
  OrderId order{0};
  OrderId resting_order{0};
  TraderId buyer{-1};
  TraderId seller{-1};
  std::optional<double> microprice_before;
};

/// Uniform trader interface. Subclasses implement `compute_quote`; the base
/// class owns the assignment, the accounting and loss-avoidance.
class Agent {
public:
  Agent(TraderId id, Role role, std::uint64_t seed);
  virtual ~Agent() = default;

  [[nodiscard]] virtual std::unique_ptr<Agent> clone() const = 0;
  [[nodiscard]] virtual std::string_view ticker() const noexcept = 0;

  [[nodiscard]] TraderId id() const noexcept { return id_; }
  [[nodiscard]] Role role() const noexcept { return role_; }
  [[nodiscard]] Side side() const noexcept { return side_of(role_); }

  void assign(const market::Assignment& a);
  void expire_assignment() noexcept { assignment_.reset(); }
  [[nodiscard]] const std::optional<market::Assignment>& assignment() const noexcept {
    return assignment_;
  }
  [[nodiscard]] bool active() const noexcept { return assignment_.has_value(); }

  /// Quote for the live assignment, or empty to abstain. Never loss-making.
  std::optional<Price> quote(const MarketView& view);

  virtual void respond(const MarketEvent& /*event*/, const MarketView& /*view*/) {}
  virtual void on_day_start(int /*day*/) {}

  /// Books the surplus of a fill against the live assignment and retires it.
  void record_fill(Price price);

  [[nodiscard]] Ticks profit() const noexcept { return profit_; }
  [[nodiscard]] int trades() const noexcept { return trades_; }
  [[nodiscard]] int assignments_received() const noexcept { return received_; }

protected:
  virtual std::optional<Price> compute_quote(const MarketView& view) = 0;
  virtual void on_assign() {}

  [[nodiscard]] Price limit() const { return assignment_->limit; }
  std::mt19937_64& rng() noexcept { return rng_; }

private:
  TraderId id_;
  Role role_;
  std::mt19937_64 rng_;
  std::optional<market::Assignment> assignment_;
  Ticks profit_{0};
  int trades_{0};
  int received_{0};
};

}  // namespace cda::traders
