#include "cda/session/session.hpp"

#include "cda/metrics/metrics.hpp"
#include "cda/seed.hpp"
#include "cda/traders/factory.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cda::session {

namespace {

int roster_total(const std::vector<RosterEntry>& side) {
  int n = 0;
  for (const auto& e : side) n += e.count;
  return n;
}

}  // namespace

int SessionConfig::per_side() const { return roster_total(buyers); }

market::SessionClock SessionConfig::clock() const {
  return {static_cast<int>(day_length * polls_per_second), day_length};
}

void SessionConfig::validate() const {
  if (n_days < 1) throw std::invalid_argument("n_days must be at least 1");
  if (!(day_length > 0.0)) throw std::invalid_argument("day_length must be positive");
  if (polls_per_second < 1) throw std::invalid_argument("polls_per_second must be at least 1");
  for (const auto* side : {&buyers, &sellers})
    for (const auto& e : *side) {
      if (!traders::is_known_ticker(e.ticker))
        throw std::invalid_argument("unknown strategy ticker: " + e.ticker);
      if (e.count < 0) throw std::invalid_argument("negative roster count for " + e.ticker);
    }
  const int nb = roster_total(buyers);
  const int ns = roster_total(sellers);
  if (nb < 1) throw std::invalid_argument("roster has no buyers");
  if (nb != ns) throw std::invalid_argument("buyer and seller rosters differ in size");
  for (const auto& seg : env.timetable.segments()) (void)env.catalog.spec(seg.label);
}

int SessionResult::negative_surplus_trades() const noexcept {
  int n = 0;
  for (const auto& t : trades)
    if (t.buyer_limit < t.price || t.price < t.seller_limit) ++n;
  return n;
}

std::uint64_t agent_seed(std::uint64_t session_seed, TraderId id) noexcept {
  return derive_seed(session_seed, {0xA6E7ULL, static_cast<std::uint64_t>(id)});
}

traders::MarketView snapshot_view(const exchange::OrderBook& book,
                                  std::span<const exchange::TapeEvent> trade_tail, SimTime time,
                                  int day, double session_seconds) {
  traders::MarketView v;
  if (auto b = book.best_level(Side::Bid)) {
    v.best_bid = b->price;
    v.bid_depth = b->qty;
  }
  if (auto a = book.best_level(Side::Ask)) {
    v.best_ask = a->price;
    v.ask_depth = a->qty;
  }
  v.microprice = book.microprice();
  v.tape_tail = trade_tail;
  v.time = time;
  v.day = day;
  v.session_seconds = session_seconds;
  return v;
}

struct Session::Impl {
  explicit Impl(const SessionConfig& cfg)
      : cfg_(cfg), clock_(cfg.clock()), n_(cfg.per_side()), book_(2 * n_), rng_(cfg.seed) {
    TraderId id = 0;
    for (Role role : {Role::Buyer, Role::Seller}) {
      for (const auto& e : role == Role::Buyer ? cfg.buyers : cfg.sellers)
        for (int k = 0; k < e.count; ++k) {
          agents_.push_back(traders::make_agent(e.ticker, id, role, agent_seed(cfg.seed, id),
                                                cfg.strategies));
          (role == Role::Buyer ? buyer_ids_ : seller_ids_).push_back(id);
          ++id;
        }
    }
    result_.seed = cfg.seed;
    result_.market = cfg.env.name;
    result_.n_days = cfg.n_days;
    for (const auto& a : agents_) {
      TraderRow row;
      row.id = a->id();
      row.ticker = std::string(a->ticker());
      row.role = a->role();
      row.daily_profit.assign(static_cast<std::size_t>(cfg.n_days), 0);
      row.daily_expected.assign(static_cast<std::size_t>(cfg.n_days), 0.0);
      result_.traders.push_back(std::move(row));
    }
    limits_.assign(agents_.size(), 0);
  }

  SimTime end_time() const { return static_cast<SimTime>(cfg_.n_days) * clock_.polls_per_day; }

  void step() {
    const SimTime t = now_;
    const int day = static_cast<int>(t / clock_.polls_per_day) + 1;
    const SimTime start = clock_.day_start(day);
    if (t == start) {
      for (auto& a : agents_) a->on_day_start(day);
      open_day(day, issued_);
      next_ = 0;
    }
    while (next_ < issued_.size() && issued_[next_].issue_time <= t) deliver(issued_[next_++], day);
    poll(t, day);
    if (t == start + clock_.polls_per_day - 1) close_day(day, t);
    ++now_;
  }

  void advance_to(SimTime until) {
    until = std::min(until, end_time());
    while (now_ < until) step();
  }

  int current_day() const {
    return static_cast<int>(std::min(now_, end_time() - 1) / clock_.polls_per_day) + 1;
  }

  bool continuous() const {
    return cfg_.env.replenishment.mode == market::Replenishment::Continuous;
  }

  std::span<const exchange::TapeEvent> tail() const {
    const std::size_t k = std::min(recent_.size(), static_cast<std::size_t>(cfg_.tape_tail));
    return std::span<const exchange::TapeEvent>(recent_).last(k);
  }

  traders::MarketView view(SimTime t, int day) const {
    return snapshot_view(book_, tail(), t, day, clock_.seconds(t));
  }

  void fan_out(const traders::MarketEvent& e, const traders::MarketView& v) {
    for (auto& a : agents_) a->respond(e, v);
  }

  void drain_book_tape() {
    auto tape = book_.tape();
    if (cfg_.record_tape) result_.tape.insert(result_.tape.end(), tape.begin(), tape.end());
    book_.clear_tape();
  }

  void emit_cancels(std::size_t from, int day) {
    auto tape = book_.tape();
    if (from >= tape.size()) return;
    const SimTime t = tape.back().time;
    const auto v = view(t, day);
    for (std::size_t i = from; i < tape.size(); ++i) {
      const auto& c = tape[i];
      traders::MarketEvent e;
      e.kind = traders::EventKind::Cancel;
      e.time = c.time;
      e.trader = c.trader;
      e.side = agents_[static_cast<std::size_t>(c.trader)]->side();
      fan_out(e, v);
    }
  }

  double p0_at(double base_p0, double seconds) const {
    return base_p0 + cfg_.env.offset.value(seconds) * kTicksPerUnit;
  }

  void deliver(const market::Assignment& a, int day) {
    auto& agent = *agents_[static_cast<std::size_t>(a.trader)];
    if (agent.active()) {
      // A fresh assignment retires the old one and any quote made for it.
      const std::size_t before = book_.tape().size();
      if (book_.cancel(agent.id(), agent.side(), a.issue_time) == exchange::CancelStatus::Cancelled)
        emit_cancels(before, day);
      agent.expire_assignment();
    }
    agent.assign(a);
    limits_[static_cast<std::size_t>(a.trader)] = a.limit.ticks();

    double expected = 0.0;
    if (day_p0_) {
      double p0 = *day_p0_;
      if (continuous()) p0 = base_p0_ + static_cast<double>(market::offset_ticks(cfg_.env.offset, clock_.seconds(a.issue_time)));
      const double l = static_cast<double>(a.limit.ticks());
      expected = std::max(0.0, a.role == Role::Buyer ? l - p0 : p0 - l);
    }
    auto& row = result_.traders[static_cast<std::size_t>(a.trader)];
    row.expected += expected;
    row.daily_expected[static_cast<std::size_t>(day - 1)] += expected;
    ++row.assignments;
  }

  void settle(const exchange::TapeEvent& tr, int day) {
    const auto b = static_cast<std::size_t>(tr.buyer);
    const auto s = static_cast<std::size_t>(tr.seller);
    TradeRecord rec;
    rec.time = tr.time;
    rec.day = day;
    rec.price = tr.price.ticks();
    rec.buyer = tr.buyer;
    rec.seller = tr.seller;
    rec.buyer_limit = limits_[b];
    rec.seller_limit = limits_[s];
    rec.p0 = continuous() ? p0_at(base_p0_, clock_.seconds(tr.time)) : day_p0_.value_or(0.0);
    result_.trades.push_back(rec);

    for (std::size_t k : {b, s}) {
      auto& agent = *agents_[k];
      const Ticks before = agent.profit();
      agent.record_fill(tr.price);
      const Ticks gain = agent.profit() - before;
      auto& row = result_.traders[k];
      row.profit += gain;
      row.daily_profit[static_cast<std::size_t>(day - 1)] += gain;
      ++row.trades;
    }
  }

  void poll(SimTime t, int day) {
    const auto who = std::uniform_int_distribution<std::size_t>(0, agents_.size() - 1)(rng_);
    auto& agent = *agents_[who];
    if (!agent.active()) return;
    const auto before = view(t, day);
    const auto price = agent.quote(before);
    if (!price) return;

    exchange::Order o;
    o.id = next_order_++;
    o.trader = agent.id();
    o.side = agent.side();
    o.price = *price;
    o.time = t;
    const auto outcome = book_.submit(o);

    std::vector<traders::MarketEvent> events;
    for (const auto& tr : outcome.trades) {
      settle(tr, day);
      recent_.push_back(tr);
      traders::MarketEvent e;
      e.kind = traders::EventKind::Trade;
      e.time = t;
      e.side = o.side;
      e.price = tr.price;
      e.quote = o.price;
      e.trader = o.trader;
      e.order = o.id;
      e.resting_order = o.side == Side::Bid ? tr.sell_order : tr.buy_order;
      e.buyer = tr.buyer;
      e.seller = tr.seller;
      e.microprice_before = before.microprice;
      events.push_back(e);
    }
    if (recent_.size() > 4 * static_cast<std::size_t>(cfg_.tape_tail) + 64)
      recent_.erase(recent_.begin(), recent_.end() - cfg_.tape_tail);
    if (outcome.rested) {
      traders::MarketEvent e;
      e.kind = traders::EventKind::Shout;
      e.time = t;
      e.side = o.side;
      e.price = o.price;
      e.quote = o.price;
      e.trader = o.trader;
      e.order = o.id;
      e.microprice_before = before.microprice;
      events.push_back(e);
    }
    if (events.empty()) return;
    const auto after = view(t, day);
    for (const auto& e : events) fan_out(e, after);
  }

  void open_day(int day, std::vector<market::Assignment>& issued) {
    issued = market::issue_assignments(cfg_.env, buyer_ids_, seller_ids_, day, clock_, rng_);
    DayRecord rec;
    rec.day = day;
    rec.schedule = cfg_.env.timetable.schedule_for_day(day);
    const auto base = cfg_.env.catalog.resolve(rec.schedule, n_);
    std::optional<market::Equilibrium> eq;
    if (continuous()) {
      eq = market::equilibrium(base);
      base_p0_ = eq ? eq->p0 : 0.0;
      if (eq) rec.p0 = p0_at(base_p0_, clock_.seconds(clock_.day_start(day)));
    } else {
      std::vector<Price> b, s;
      for (const auto& a : issued) (a.role == Role::Buyer ? b : s).push_back(a.limit);
      eq = market::equilibrium(b, s);
      if (eq) rec.p0 = eq->p0;
    }
    day_p0_.reset();
    if (eq) {
      day_p0_ = rec.p0;
      rec.q0 = eq->q0;
      rec.max_surplus = eq->max_surplus;
    }
    result_.days.push_back(rec);
  }

  void close_day(int day, SimTime t) {
    const std::size_t before = book_.tape().size();
    book_.flush(t);
    emit_cancels(before, day);
    for (auto& a : agents_) a->expire_assignment();
    drain_book_tape();
  }

  SessionConfig cfg_;
  market::SessionClock clock_;
  int n_;
  exchange::OrderBook book_;
  std::mt19937_64 rng_;
  std::vector<std::unique_ptr<traders::Agent>> agents_;
  std::vector<TraderId> buyer_ids_;
  std::vector<TraderId> seller_ids_;
  std::vector<Ticks> limits_;
  std::vector<exchange::TapeEvent> recent_;
  std::optional<double> day_p0_;
  double base_p0_{0.0};
  OrderId next_order_{1};
  SimTime now_{0};
  std::vector<market::Assignment> issued_;
  std::size_t next_{0};
  SessionResult result_;
};

Session::Session(const SessionConfig& config) {
  config.validate();
  impl_ = std::make_unique<Impl>(config);
}

Session::~Session() = default;

void Session::advance_to(SimTime until) { impl_->advance_to(until); }
SimTime Session::now() const noexcept { return impl_->now_; }
SimTime Session::end_time() const noexcept { return impl_->end_time(); }
bool Session::done() const noexcept { return impl_->now_ >= impl_->end_time(); }

SessionResult Session::finish() {
  impl_->advance_to(impl_->end_time());
  SessionResult out = std::move(impl_->result_);
  out.metrics = metrics::compute_metrics(out);
  return out;
}

traders::MarketView Session::view() const {
  return impl_->view(std::min(impl_->now_, impl_->end_time() - 1), impl_->current_day());
}

std::span<const std::unique_ptr<traders::Agent>> Session::agents() const noexcept {
  return impl_->agents_;
}

Ticks Session::last_limit(TraderId id) const { return impl_->limits_.at(static_cast<std::size_t>(id)); }

const exchange::OrderBook& Session::book() const noexcept { return impl_->book_; }

SessionResult run_session(const SessionConfig& config) {
  config.validate();
  SessionResult out;
  try {
    out = Session(config).finish();
  } catch (const std::exception& ex) {
    out = SessionResult{};
    out.seed = config.seed;
    out.market = config.env.name;
    out.n_days = config.n_days;
    out.ok = false;
    out.error = ex.what();
  }
  return out;
}

}  // namespace cda::session
