#include "cda/exchange/order_book.hpp"

#include <algorithm>
#include <stdexcept>

namespace cda {

std::string format_currency(Ticks ticks) {
  const bool neg = ticks < 0;
  const Ticks a = neg ? -ticks : ticks;
  std::string s = std::to_string(a / kTicksPerUnit);
  const Ticks frac = a % kTicksPerUnit;
  s += '.';
  s += static_cast<char>('0' + frac / 10);
  s += static_cast<char>('0' + frac % 10);
  return neg ? "-" + s : s;
}

}  // namespace cda

namespace cda::exchange {

namespace {
constexpr std::size_t idx(Side s) { return s == Side::Bid ? 0 : 1; }
}  // namespace

OrderBook::OrderBook(int n_traders) : live_(static_cast<std::size_t>(n_traders)) {
  if (n_traders < 1) throw std::invalid_argument("order book needs at least one trader");
}

template <typename Map>
void OrderBook::remove_from(Map& side_map, Ticks price, OrderId id) {
  auto it = side_map.find(price);
  if (it == side_map.end()) return;
  auto& q = it->second.queue;
  auto pos = std::find_if(q.begin(), q.end(), [id](const Resting& r) { return r.id == id; });
  if (pos == q.end()) return;
  it->second.total -= pos->qty;
  q.erase(pos);
  if (q.empty()) side_map.erase(it);
}

void OrderBook::append_tape(const TapeEvent& e) {
  if (!tape_.empty() && e.time < tape_.back().time)
    throw std::logic_error("tape time must be non-decreasing");
  tape_.push_back(e);
}

MatchOutcome OrderBook::submit(const Order& order) {
  if (order.qty < 1) throw std::invalid_argument("order qty must be >= 1");
  if (order.trader < 0 || order.trader >= n_traders())
    throw std::invalid_argument("unknown trader id " + std::to_string(order.trader));
  if (!order.price.valid()) throw std::invalid_argument("price outside [0.01, 500.00]");

  MatchOutcome out;
  auto& mine = live_[static_cast<std::size_t>(order.trader)][idx(order.side)];
  if (mine.present) {
    if (order.side == Side::Bid)
      remove_from(bids_, mine.price, mine.id);
    else
      remove_from(asks_, mine.price, mine.id);
    mine = Live{};
    out.replaced = true;
  }

  int remaining = order.qty;
  auto match_against = [&](auto& book, auto crosses) {
    while (remaining > 0 && !book.empty()) {
      auto top = book.begin();
      if (!crosses(top->first)) break;
      Level& lvl = top->second;
      Resting& head = lvl.queue.front();
      const int fill = std::min(remaining, head.qty);
      TapeEvent t;
      t.kind = TapeKind::Trade;
      t.time = order.time;
      t.price = Price(top->first);
      t.qty = fill;
      t.aggressor = order.side;
      if (order.side == Side::Bid) {
        t.buyer = order.trader;
        t.seller = head.trader;
        t.buy_order = order.id;
        t.sell_order = head.id;
      } else {
        t.buyer = head.trader;
        t.seller = order.trader;
        t.buy_order = head.id;
        t.sell_order = order.id;
      }
      append_tape(t);
      out.trades.push_back(t);
      remaining -= fill;
      head.qty -= fill;
      lvl.total -= fill;
      if (head.qty == 0) {
        live_[static_cast<std::size_t>(head.trader)][idx(opposite(order.side))] = Live{};
        lvl.queue.erase(lvl.queue.begin());
      }
      if (lvl.queue.empty()) book.erase(top);
    }
  };

  const Ticks p = order.price.ticks();
  if (order.side == Side::Bid)
    match_against(asks_, [p](Ticks ask) { return p >= ask; });
  else
    match_against(bids_, [p](Ticks bid) { return p <= bid; });

  if (remaining > 0) {
    Level& lvl = order.side == Side::Bid ? bids_[p] : asks_[p];
    lvl.queue.push_back(Resting{order.id, order.trader, remaining});
    lvl.total += remaining;
    mine = Live{true, p, order.id};
    out.rested = true;
  }
  return out;
}

CancelStatus OrderBook::cancel(TraderId trader, Side side, SimTime time) {
  if (trader < 0 || trader >= n_traders()) return CancelStatus::NotFound;
  auto& mine = live_[static_cast<std::size_t>(trader)][idx(side)];
  if (!mine.present) return CancelStatus::NotFound;

  int qty = 0;
  auto take = [&](auto& book) {
    auto it = book.find(mine.price);
    if (it == book.end()) return;
    for (const auto& r : it->second.queue)
      if (r.id == mine.id) qty = r.qty;
    remove_from(book, mine.price, mine.id);
  };
  if (side == Side::Bid)
    take(bids_);
  else
    take(asks_);

  TapeEvent c;
  c.kind = TapeKind::Cancel;
  c.time = time;
  c.qty = qty;
  c.trader = trader;
  append_tape(c);
  mine = Live{};
  return CancelStatus::Cancelled;
}

void OrderBook::flush(SimTime time) {
  auto drain = [&](auto& book, Side side) {
    while (!book.empty()) {
      const TraderId t = book.begin()->second.queue.front().trader;
      cancel(t, side, time);
    }
  };
  drain(bids_, Side::Bid);
  drain(asks_, Side::Ask);
}

TopOfBook OrderBook::best_prices() const noexcept {
  TopOfBook top;
  if (!bids_.empty()) top.best_bid = Price(bids_.begin()->first);
  if (!asks_.empty()) top.best_ask = Price(asks_.begin()->first);
  return top;
}

std::optional<LevelView> OrderBook::best_level(Side side) const noexcept {
  if (side == Side::Bid) {
    if (bids_.empty()) return std::nullopt;
    return LevelView{Price(bids_.begin()->first), bids_.begin()->second.total};
  }
  if (asks_.empty()) return std::nullopt;
  return LevelView{Price(asks_.begin()->first), asks_.begin()->second.total};
}

int OrderBook::qty_at(Side side, Price price) const noexcept {
  if (side == Side::Bid) {
    auto it = bids_.find(price.ticks());
    return it == bids_.end() ? 0 : it->second.total;
  }
  auto it = asks_.find(price.ticks());
  return it == asks_.end() ? 0 : it->second.total;
}

std::vector<LevelView> OrderBook::depth(Side side) const {
  std::vector<LevelView> out;
  if (side == Side::Bid)
    for (const auto& [p, l] : bids_) out.push_back({Price(p), l.total});
  else
    for (const auto& [p, l] : asks_) out.push_back({Price(p), l.total});
  return out;
}

std::optional<double> OrderBook::microprice() const noexcept {
  if (bids_.empty() || asks_.empty()) return std::nullopt;
  const double pb = static_cast<double>(bids_.begin()->first);
  const double pa = static_cast<double>(asks_.begin()->first);
  const double qb = bids_.begin()->second.total;
  const double qa = asks_.begin()->second.total;
  return (qa * pb + qb * pa) / (qb + qa);
}

std::optional<Price> OrderBook::live_price(TraderId trader, Side side) const noexcept {
  if (trader < 0 || trader >= n_traders()) return std::nullopt;
  const auto& l = live_[static_cast<std::size_t>(trader)][idx(side)];
  if (!l.present) return std::nullopt;
  return Price(l.price);
}

bool OrderBook::crossed() const noexcept {
  return !bids_.empty() && !asks_.empty() && bids_.begin()->first >= asks_.begin()->first;
}

void write_tape_csv(std::ostream& out, std::span<const TapeEvent> tape) {
  out << "time,kind,price,qty,buyer_id,seller_id\n";
  for (const auto& e : tape) {
    if (e.kind == TapeKind::Trade)
      out << e.time << ",TRADE," << format_currency(e.price.ticks()) << ',' << e.qty << ','
          << e.buyer << ',' << e.seller << '\n';
    else
      out << e.time << ",CANCEL,," << e.qty << ",,\n";
  }
}

}  // namespace cda::exchange
