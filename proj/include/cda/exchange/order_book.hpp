#pragma once

#include "cda/types.hpp"

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

namespace cda::exchange {

struct Order {
  OrderId id{0};
  TraderId trader{0};
  Side side{Side::Bid};
  Price price{};
  int qty{1};
  SimTime time{0};
};

enum class TapeKind : std::uint8_t { Trade, Cancel };

struct TapeEvent {
  TapeKind kind{TapeKind::Trade};
  SimTime time{0};
  Price price{};  // TRADE only
  int qty{0};
  TraderId buyer{-1};   // TRADE only
  TraderId seller{-1};  // TRADE only
  TraderId trader{-1};  // CANCEL only
  // Bookkeeping for observers that track shout outcomes; not serialized.
  OrderId buy_order{0};
  OrderId sell_order{0};
  Side aggressor{Side::Bid};

  bool operator==(const TapeEvent&) const = default;
};

struct MatchOutcome {
  std::vector<TapeEvent> trades;
  bool rested{false};
  bool replaced{false};  // a prior live order on the same side was dropped
};

enum class CancelStatus : std::uint8_t { Cancelled, NotFound };

struct TopOfBook {
  std::optional<Price> best_bid;
  std::optional<Price> best_ask;
};

struct LevelView {
  Price price;
  int qty;
};

/// Anonymized limit order book with one live order per trader per side.
///
/// Crossing orders (bid >= best ask, ask <= best bid) execute against the
/// best opposing level at the resting price, oldest order first. The book
/// records TRADE and CANCEL events on an append-only tape.
class OrderBook {
public:
  explicit OrderBook(int n_traders);

  /// Throws std::invalid_argument on qty < 1, an unknown trader or an
  /// out-of-range price.
  MatchOutcome submit(const Order& order);

  CancelStatus cancel(TraderId trader, Side side, SimTime time);

  /// Cancels every resting order, bids first, each level oldest first.
  void flush(SimTime time);

  [[nodiscard]] TopOfBook best_prices() const noexcept;
  [[nodiscard]] std::optional<LevelView> best_level(Side side) const noexcept;
  [[nodiscard]] int qty_at(Side side, Price price) const noexcept;
  [[nodiscard]] std::vector<LevelView> depth(Side side) const;

  /// Volume-weighted top-of-book mid in ticks; empty when either side is empty.
  [[nodiscard]] std::optional<double> microprice() const noexcept;

  [[nodiscard]] std::optional<Price> live_price(TraderId trader, Side side) const noexcept;
  [[nodiscard]] bool crossed() const noexcept;
  [[nodiscard]] int n_traders() const noexcept { return static_cast<int>(live_.size()); }

  [[nodiscard]] const std::vector<TapeEvent>& tape() const noexcept { return tape_; }
  void clear_tape() { tape_.clear(); }

private:
  struct Resting {
    OrderId id;
    TraderId trader;
    int qty;
  };
  struct Level {
    int total{0};
    std::vector<Resting> queue;
  };
  struct Live {
    bool present{false};
    Ticks price{0};
    OrderId id{0};
  };

  template <typename Map>
  void remove_from(Map& side_map, Ticks price, OrderId id);
  void append_tape(const TapeEvent& e);

  std::map<Ticks, Level, std::greater<>> bids_;
  std::map<Ticks, Level> asks_;
  std::vector<std::array<Live, 2>> live_;
  std::vector<TapeEvent> tape_;
};

/// Writes `time,kind,price,qty,buyer_id,seller_id` rows.
void write_tape_csv(std::ostream& out, std::span<const TapeEvent> tape);

}  // namespace cda::exchange
