#include "cda/traders/gdx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cda::traders {

void ShoutHistory::push(Side side, Price price, OrderId order, bool accepted) {
  entries_.push_back({side, price.ticks(), order, accepted});
  while (static_cast<int>(entries_.size()) > capacity_) entries_.pop_front();
}

void ShoutHistory::mark_accepted(OrderId order) noexcept {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->order == order) {
      it->accepted = true;
      return;
    }
  }
}

BeliefCurve BeliefCurve::build(const ShoutHistory& history, Side side, double prior) {
  BeliefCurve c;
  c.prior_ = prior;
  const auto& h = history.entries();
  if (h.empty()) return c;

  std::vector<Ticks> prices;
  prices.reserve(h.size());
  for (const auto& s : h) prices.push_back(s.price);
  std::sort(prices.begin(), prices.end());
  prices.erase(std::unique(prices.begin(), prices.end()), prices.end());
  c.observed_ = {prices.front(), prices.back()};

  for (Ticks p : prices) {
    int num = 0;
    int rej = 0;
    for (const auto& s : h) {
      if (side == Side::Bid) {
        if (s.side == Side::Bid && s.accepted && s.price <= p) ++num;
        if (s.side == Side::Ask && s.price <= p) ++num;
        if (s.side == Side::Bid && !s.accepted && s.price >= p) ++rej;
      } else {
        if (s.side == Side::Ask && s.accepted && s.price >= p) ++num;
        if (s.side == Side::Bid && s.price >= p) ++num;
        if (s.side == Side::Ask && !s.accepted && s.price <= p) ++rej;
      }
    }
    c.knots_.emplace_back(p, static_cast<double>(num) / static_cast<double>(num + rej));
  }

  const double low_end = side == Side::Bid ? 0.0 : 1.0;
  if (c.knots_.front().first > kMinTicks) c.knots_.insert(c.knots_.begin(), {kMinTicks, low_end});
  if (c.knots_.back().first < kMaxTicks) c.knots_.emplace_back(kMaxTicks, 1.0 - low_end);
  return c;
}

double BeliefCurve::at(Ticks price) const noexcept {
  if (knots_.empty()) return prior_;
  if (price <= knots_.front().first) return knots_.front().second;
  if (price >= knots_.back().first) return knots_.back().second;
  auto hi = std::lower_bound(knots_.begin(), knots_.end(), price,
                             [](const auto& k, Ticks p) { return k.first < p; });
  if (hi->first == price) return hi->second;
  auto lo = hi - 1;
  const double w = static_cast<double>(price - lo->first) / static_cast<double>(hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

void BeliefCurve::sample(Ticks lo, std::span<double> out) const noexcept {
  if (knots_.empty()) {
    std::fill(out.begin(), out.end(), prior_);
    return;
  }
  std::size_t seg = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Ticks p = lo + static_cast<Ticks>(i);
    if (p <= knots_.front().first) {
      out[i] = knots_.front().second;
      continue;
    }
    if (p >= knots_.back().first) {
      out[i] = knots_.back().second;
      continue;
    }
    while (knots_[seg + 1].first < p) ++seg;
    const auto& a = knots_[seg];
    const auto& b = knots_[seg + 1];
    const double w = static_cast<double>(p - a.first) / static_cast<double>(b.first - a.first);
    out[i] = a.second + w * (b.second - a.second);
  }
}

double gd_belief(const ShoutHistory& history, Price price, Side side, double prior) {
  return BeliefCurve::build(history, side, prior).at(price.ticks());
}

std::optional<GdxChoice> solve_gdx(const GridProblem& problem, double gamma, int units,
                                   int horizon, std::optional<Ticks> tie_anchor,
                                   kernels::ValueGridFn kernel) {
  const std::size_t g = problem.prices.size();
  if (g == 0 || units < 1 || horizon < 1) return std::nullopt;

  // value[m][k]; row m = 0 and column k = 0 stay zero.
  const auto M = static_cast<std::size_t>(units);
  const auto K = static_cast<std::size_t>(horizon);
  std::vector<double> value((M + 1) * (K + 1), 0.0);
  auto V = [&](std::size_t m, std::size_t k) -> double& { return value[m * (K + 1) + k]; };

  std::vector<double> scratch(g);
  for (std::size_t k = 1; k <= K; ++k)
    for (std::size_t m = 1; m <= M; ++m)
      V(m, k) = kernel(problem.belief, problem.surplus, gamma * V(m - 1, k - 1),
                       gamma * V(m, k - 1), scratch);

  // scratch now holds the (M, K) stage.
  const double best = V(M, K);
  if (!(best > 0.0)) return std::nullopt;

  std::optional<std::size_t> pick;
  for (std::size_t i = 0; i < g; ++i) {
    if (scratch[i] != best) continue;
    if (!pick) {
      pick = i;
      if (!tie_anchor) break;
      continue;
    }
    const Ticks d_new = std::abs(problem.prices[i] - *tie_anchor);
    const Ticks d_old = std::abs(problem.prices[*pick] - *tie_anchor);
    if (d_new < d_old) pick = i;
  }
  return GdxChoice{*pick, best};
}

GdxTrader::GdxTrader(TraderId id, Role role, std::uint64_t seed, const GdxParams& params)
    : Agent(id, role, seed), params_(params), history_(params.window), budget_(params.horizon) {}

void GdxTrader::on_day_start(int) { budget_ = params_.horizon; }

void GdxTrader::respond(const MarketEvent& e, const MarketView&) {
  switch (e.kind) {
    case EventKind::Shout:
      history_.push(e.side, e.price, e.order, false);
      break;
    case EventKind::Trade:
      history_.mark_accepted(e.resting_order);
      history_.push(e.side, e.quote, e.order, true);
      break;
    case EventKind::Cancel:
      break;
  }
}

GridProblem GdxTrader::build_grid(const MarketView& view) const {
  GridProblem g;
  if (!active()) return g;
  const Ticks lim = limit().ticks();
  const Ticks pad = params_.grid_pad;
  const BeliefCurve curve = BeliefCurve::build(history_, side(), params_.prior);
  const bool buyer = role() == Role::Buyer;

  Ticks lo = 0;
  Ticks hi = 0;
  if (buyer) {
    hi = view.best_ask ? std::min(lim, view.best_ask->ticks() + pad) : lim;
    if (view.best_bid)
      lo = view.best_bid->ticks() - pad;
    else
      lo = curve.flat() ? kMinTicks : curve.observed_range().first - pad;
    lo = std::clamp(lo, kMinTicks, hi);
  } else {
    lo = view.best_bid ? std::max(lim, view.best_bid->ticks() - pad) : lim;
    if (view.best_ask)
      hi = view.best_ask->ticks() + pad;
    else
      hi = curve.flat() ? kMaxTicks : curve.observed_range().second + pad;
    hi = std::clamp(hi, lo, kMaxTicks);
  }

  const auto n = static_cast<std::size_t>(hi - lo + 1);
  const bool add_limit = buyer ? hi < lim : lo > lim;
  g.prices.resize(n + (add_limit ? 1 : 0));
  g.belief.resize(g.prices.size());
  g.surplus.resize(g.prices.size());
  curve.sample(lo, std::span<double>(g.belief.data(), n));
  for (std::size_t i = 0; i < n; ++i) g.prices[i] = lo + static_cast<Ticks>(i);
  if (add_limit) {
    g.prices[n] = lim;
    g.belief[n] = curve.at(lim);
  }

  for (std::size_t i = 0; i < g.prices.size(); ++i) {
    const Ticks p = g.prices[i];
    Ticks exec = p;
    // A quote through the touch fills at once, at the resting price; one
    // behind the same-side best cannot fill before it.
    if (buyer) {
      if (view.best_ask && p >= view.best_ask->ticks()) {
        g.belief[i] = 1.0;
        exec = view.best_ask->ticks();
      } else if (view.best_bid && p < view.best_bid->ticks()) {
        g.belief[i] = 0.0;
      }
      g.surplus[i] = static_cast<double>(lim - exec);
    } else {
      if (view.best_bid && p <= view.best_bid->ticks()) {
        g.belief[i] = 1.0;
        exec = view.best_bid->ticks();
      } else if (view.best_ask && p > view.best_ask->ticks()) {
        g.belief[i] = 0.0;
      }
      g.surplus[i] = static_cast<double>(exec - lim);
    }
  }
  return g;
}

std::optional<Price> GdxTrader::compute_quote(const MarketView& view) {
  const GridProblem g = build_grid(view);
  std::optional<Ticks> anchor;
  if (role() == Role::Buyer && view.best_bid) anchor = view.best_bid->ticks();
  if (role() == Role::Seller && view.best_ask) anchor = view.best_ask->ticks();
  const int units = assignment()->qty;
  const auto choice = solve_gdx(g, params_.gamma, units, std::max(budget_, 1), anchor);
  if (budget_ > 1) --budget_;
  if (!choice) return std::nullopt;
  return Price(g.prices[choice->index]);
}

}  // namespace cda::traders
