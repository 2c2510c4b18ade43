#include "cda/traders/zip.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cda::traders {

namespace {
constexpr double kMinBuyerMargin = -0.999;
constexpr double kMaxSellerMargin = 10.0;
}  // namespace

ZipTrader::ZipTrader(TraderId id, Role role, std::uint64_t seed, const ZipParams& params)
    : Agent(id, role, seed), params_(params) {
  std::uniform_real_distribution<double> beta(params.beta_lo, params.beta_hi);
  std::uniform_real_distribution<double> margin(params.margin_lo, params.margin_hi);
  state_.beta = beta(rng());
  const double m = margin(rng());
  state_.margin = role == Role::Buyer ? -m : m;
  state_.momentum = params.momentum;
}

void ZipTrader::set_margin(double m) noexcept {
  if (role() == Role::Buyer)
    state_.margin = std::clamp(m, kMinBuyerMargin, 0.0);
  else
    state_.margin = std::clamp(m, 0.0, kMaxSellerMargin);
}

double ZipTrader::shout_price() const noexcept { return state_.limit * (1.0 + state_.margin); }

void ZipTrader::on_assign() { state_.limit = static_cast<double>(limit().ticks()); }

std::optional<Price> ZipTrader::compute_quote(const MarketView&) {
  const double p = shout_price();
  // Round away from the limit so the quote never crosses it.
  if (role() == Role::Buyer) return clamp_price(static_cast<Ticks>(std::floor(p + 1e-9)));
  return clamp_price(static_cast<Ticks>(std::ceil(p - 1e-9)));
}

double ZipTrader::target_up(double q) {
  std::uniform_real_distribution<double> r(1.0, params_.r_up_hi);
  std::uniform_real_distribution<double> a(0.0, params_.a_abs * kTicksPerUnit);
  const double rel = r(rng());
  return rel * q + a(rng());
}

double ZipTrader::target_down(double q) {
  std::uniform_real_distribution<double> r(params_.r_down_lo, 1.0);
  std::uniform_real_distribution<double> a(0.0, params_.a_abs * kTicksPerUnit);
  const double rel = r(rng());
  return rel * q - a(rng());
}

void ZipTrader::adapt_toward(double target) {
  const double p = shout_price();
  const double delta = state_.beta * (target - p);
  const double change = state_.momentum * state_.last_change + (1.0 - state_.momentum) * delta;
  state_.last_change = change;
  set_margin((p + change) / state_.limit - 1.0);
}

void ZipTrader::respond(const MarketEvent& e, const MarketView&) {
  if (state_.limit <= 0.0) return;
  if (e.kind == EventKind::Cancel) return;
  const double q = static_cast<double>(e.price.ticks());
  const double p = shout_price();

  if (role() == Role::Seller) {
    if (e.kind == EventKind::Trade) {
      if (p <= q)
        adapt_toward(target_up(q));
      else if (active())
        adapt_toward(target_down(q));
    } else if (e.side == Side::Ask && active() && q < p) {
      adapt_toward(target_down(q));
    }
    return;
  }
  if (e.kind == EventKind::Trade) {
    if (p >= q)
      adapt_toward(target_down(q));
    else if (active())
      adapt_toward(target_up(q));
  } else if (e.side == Side::Bid && active() && q > p) {
    adapt_toward(target_up(q));
  }
}

bool ShockDetector::observe(double price) {
  prices_.push_back(price);
  const auto s = static_cast<std::size_t>(params_.short_window);
  const auto l = static_cast<std::size_t>(params_.long_window);
  while (prices_.size() > s + l) prices_.pop_front();
  if (prices_.size() < s + l) return false;

  const auto split = prices_.begin() + static_cast<std::ptrdiff_t>(l);
  const double ref_mean = std::accumulate(prices_.begin(), split, 0.0) / static_cast<double>(l);
  double var = 0.0;
  for (auto it = prices_.begin(); it != split; ++it) var += (*it - ref_mean) * (*it - ref_mean);
  const double sd = std::max(std::sqrt(var / static_cast<double>(l)), 1.0);
  const double short_mean = std::accumulate(split, prices_.end(), 0.0) / static_cast<double>(s);

  if (std::abs(short_mean - ref_mean) > params_.k * sd) {
    prices_.clear();
    ++fired_;
    return true;
  }
  return false;
}

AsadTrader::AsadTrader(TraderId id, Role role, std::uint64_t seed, const ZipParams& zip,
                       const AsadParams& asad)
    : ZipTrader(id, role, seed, zip), asad_(asad), detector_(asad) {}

void AsadTrader::respond(const MarketEvent& e, const MarketView& view) {
  ZipTrader::respond(e, view);
  if (e.kind != EventKind::Trade) return;
  if (detector_.observe(static_cast<double>(e.price.ticks()))) {
    set_margin(state().margin * asad_.reset_factor);
    flush_momentum();
  }
}

}  // namespace cda::traders
