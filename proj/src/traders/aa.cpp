#include "cda/traders/aa.hpp"

#include <algorithm>
#include <cmath>

namespace cda::traders {

namespace {
constexpr double kFlatTheta = 1e-9;
constexpr double kPriceFloor = 0.0;
constexpr double kPriceCeil = static_cast<double>(kMaxTicks);
}  // namespace

double aa_curve(double x, double theta) noexcept {
  if (std::abs(theta) < kFlatTheta) return x;
  return std::expm1(x * theta) / std::expm1(theta);
}

double aa_curve_inv(double y, double theta) noexcept {
  if (std::abs(theta) < kFlatTheta) return y;
  return std::log1p(y * std::expm1(theta)) / theta;
}

double ewma(const std::deque<double>& prices, double decay) noexcept {
  double num = 0.0;
  double den = 0.0;
  double w = 1.0;
  for (auto it = prices.rbegin(); it != prices.rend(); ++it) {
    num += w * *it;
    den += w;
    w *= decay;
  }
  return den > 0.0 ? num / den : 0.0;
}

AaTrader::AaTrader(TraderId id, Role role, std::uint64_t seed, const AaParams& params,
                   AaVariant variant)
    : Agent(id, role, seed), params_(params), variant_(variant) {
  state_.theta = params.theta0;
  std::uniform_real_distribution<double> r0(-params.r0_spread, 0.0);
  state_.r = r0(rng());
}

void AaTrader::set_aggressiveness(double r) noexcept { state_.r = std::clamp(r, -1.0, 1.0); }

void AaTrader::set_theta(double theta) noexcept {
  state_.theta = std::clamp(theta, params_.theta_min, params_.theta_max);
}

std::optional<double> AaTrader::estimate_equilibrium(const MarketView& view) const {
  if (variant_ == AaVariant::Micro && view.microprice) return view.microprice;
  if (trades_.empty()) return std::nullopt;
  return ewma(trades_, params_.ewma_decay);
}

double AaTrader::target(double r, double p_hat) const {
  const double l = last_limit_;
  const double th = state_.theta;
  if (role() == Role::Buyer) {
    if (l > p_hat) {
      if (r >= 0.0) return p_hat + (l - p_hat) * aa_curve(r, th);
      return p_hat - (p_hat - kPriceFloor) * aa_curve(-r, th);
    }
    if (r >= 0.0) return l;
    return l - (l - kPriceFloor) * aa_curve(-r, th);
  }
  if (l < p_hat) {
    if (r >= 0.0) return p_hat - (p_hat - l) * aa_curve(r, th);
    return p_hat + (kPriceCeil - p_hat) * aa_curve(-r, th);
  }
  if (r >= 0.0) return l;
  return l + (kPriceCeil - l) * aa_curve(-r, th);
}

double AaTrader::aggressiveness_for(double q, double p_hat) const {
  const double l = last_limit_;
  const double th = state_.theta;
  auto inv = [th](double num, double den) {
    if (den <= 0.0) return 0.0;
    return aa_curve_inv(std::clamp(num / den, 0.0, 1.0), th);
  };
  double r = 0.0;
  if (role() == Role::Buyer) {
    if (l > p_hat) {
      if (q >= l) r = 1.0;
      else if (q >= p_hat) r = inv(q - p_hat, l - p_hat);
      else r = -inv(p_hat - q, p_hat - kPriceFloor);
    } else {
      r = q >= l ? 0.0 : -inv(l - q, l - kPriceFloor);
    }
  } else {
    if (l < p_hat) {
      if (q <= l) r = 1.0;
      else if (q <= p_hat) r = inv(p_hat - q, p_hat - l);
      else r = -inv(q - p_hat, kPriceCeil - p_hat);
    } else {
      r = q <= l ? 0.0 : -inv(q - l, kPriceCeil - l);
    }
  }
  return std::clamp(r, -1.0, 1.0);
}

void AaTrader::update_r(double q, bool trade, Side shout_side, double p_hat) {
  const double tau = target(state_.r, p_hat);
  const double r_shout = aggressiveness_for(q, p_hat);
  const double lr = params_.lambda_r;
  const double la = params_.lambda_a;
  const double more = (1.0 + lr) * r_shout + la;
  const double less = (1.0 - lr) * r_shout - la;
  std::optional<double> delta;
  if (role() == Role::Buyer) {
    if (trade)
      delta = tau >= q ? less : more;
    else if (shout_side == Side::Bid && tau <= q)
      delta = more;
  } else {
    if (trade)
      delta = tau <= q ? less : more;
    else if (shout_side == Side::Ask && tau >= q)
      delta = more;
  }
  if (delta) set_aggressiveness(state_.r + params_.beta1 * (*delta - state_.r));
}

void AaTrader::update_theta() {
  const double p_hat = *state_.p_hat;
  if (p_hat <= 0.0 || trades_.empty()) return;
  double ss = 0.0;
  for (std::size_t i = 0; i < trades_.size(); ++i) {
    const double ref = variant_ == AaVariant::Micro ? references_[i] : p_hat;
    ss += (trades_[i] - ref) * (trades_[i] - ref);
  }
  const double alpha = std::sqrt(ss / static_cast<double>(trades_.size())) / p_hat;
  state_.alpha = alpha;
  alpha_min_ = std::min(alpha_min_, alpha);
  alpha_max_ = std::max(alpha_max_, alpha);
  const double span = alpha_max_ - alpha_min_;
  const double an = span > 0.0 ? (alpha - alpha_min_) / span : 0.5;
  const double star = params_.theta_min + (params_.theta_max - params_.theta_min) *
                                              (1.0 - an * std::exp(params_.gamma_theta * (an - 1.0)));
  set_theta(state_.theta + params_.beta2 * (star - state_.theta));
}

void AaTrader::on_assign() { last_limit_ = static_cast<double>(limit().ticks()); }

void AaTrader::respond(const MarketEvent& e, const MarketView& view) {
  if (e.kind == EventKind::Cancel) return;
  const double q = static_cast<double>(e.price.ticks());
  if (e.kind == EventKind::Trade) {
    double ref = q;
    if (e.microprice_before) ref = *e.microprice_before;
    else if (state_.p_hat) ref = *state_.p_hat;
    trades_.push_back(q);
    references_.push_back(ref);
    const auto w = static_cast<std::size_t>(params_.vol_window);
    while (trades_.size() > w) {
      trades_.pop_front();
      references_.pop_front();
    }
  }
  state_.p_hat = estimate_equilibrium(view);
  if (!state_.p_hat) return;
  if (e.kind == EventKind::Trade) update_theta();
  if (last_limit_ <= 0.0) return;
  update_r(q, e.kind == EventKind::Trade, e.side, *state_.p_hat);
}

std::optional<Price> AaTrader::compute_quote(const MarketView& view) {
  const double l = last_limit_;
  const double eta = params_.eta;
  const double la = params_.lambda_a * kTicksPerUnit;
  const double lr = params_.lambda_r;
  const bool buyer = role() == Role::Buyer;
  const double o_bid = view.best_bid ? static_cast<double>(view.best_bid->ticks()) : kPriceFloor;
  const double o_ask = view.best_ask ? static_cast<double>(view.best_ask->ticks()) : kPriceCeil;

  state_.p_hat = estimate_equilibrium(view);
  double px = 0.0;
  if (!state_.p_hat) {
    if (buyer)
      px = o_bid + (std::min(l, (1.0 + lr) * o_ask + la) - o_bid) / eta;
    else
      px = o_ask - (o_ask - std::max(l, (1.0 - lr) * o_bid - la)) / eta;
  } else {
    state_.intramarginal = buyer ? l > *state_.p_hat : l < *state_.p_hat;
    const double tau = target(state_.r, *state_.p_hat);
    if (buyer)
      px = view.best_ask && o_ask <= tau ? o_ask : o_bid + (tau - o_bid) / eta;
    else
      px = view.best_bid && o_bid >= tau ? o_bid : o_ask - (o_ask - tau) / eta;
  }
  if (buyer) return clamp_price(static_cast<Ticks>(std::floor(px + 1e-9)));
  return clamp_price(static_cast<Ticks>(std::ceil(px - 1e-9)));
}

}  // namespace cda::traders
