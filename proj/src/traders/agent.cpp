#include "cda/traders/agent.hpp"

#include <stdexcept>

namespace cda::traders {

Agent::Agent(TraderId id, Role role, std::uint64_t seed) : id_(id), role_(role), rng_(seed) {}

void Agent::assign(const market::Assignment& a) {
  if (a.role != role_) throw std::invalid_argument("assignment role does not match trader role");
  assignment_ = a;
  ++received_;
  on_assign();
}

std::optional<Price> Agent::quote(const MarketView& view) {
  if (!assignment_) return std::nullopt;
  auto p = compute_quote(view);
  if (!p) return std::nullopt;
  const Ticks lim = assignment_->limit.ticks();
  Ticks t = p->ticks();
  if (role_ == Role::Buyer && t > lim) t = lim;
  if (role_ == Role::Seller && t < lim) t = lim;
  return clamp_price(t);
}

void Agent::record_fill(Price price) {
  if (!assignment_) throw std::logic_error("fill without a live assignment");
  const Ticks lim = assignment_->limit.ticks();
  profit_ += role_ == Role::Buyer ? lim - price.ticks() : price.ticks() - lim;
  ++trades_;
  assignment_.reset();
}

}  // namespace cda::traders
