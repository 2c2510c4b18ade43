#include "cda/traders/simple.hpp"

namespace cda::traders {

std::optional<Price> ZicTrader::compute_quote(const MarketView&) {
  const Ticks lim = limit().ticks();
  if (role() == Role::Buyer) return Price(std::uniform_int_distribution<Ticks>(kMinTicks, lim)(rng()));
  return Price(std::uniform_int_distribution<Ticks>(lim, kMaxTicks)(rng()));
}

std::optional<Price> ShvrTrader::compute_quote(const MarketView& view) {
  const Ticks lim = limit().ticks();
  if (role() == Role::Buyer) {
    if (!view.best_bid) return limit();
    const Ticks p = view.best_bid->ticks() + 1;
    if (p > lim) return std::nullopt;
    return Price(p);
  }
  if (!view.best_ask) return limit();
  const Ticks p = view.best_ask->ticks() - 1;
  if (p < lim) return std::nullopt;
  return Price(p);
}

}  // namespace cda::traders
