#pragma once

#include "cda/traders/agent.hpp"

namespace cda::traders {

/// Zero-intelligence constrained: uniform random quotes on the
/// loss-avoiding side of the limit.
class ZicTrader final : public Agent {
public:
  using Agent::Agent;
  [[nodiscard]] std::unique_ptr<Agent> clone() const override {
    return std::make_unique<ZicTrader>(*this);
  }
  [[nodiscard]] std::string_view ticker() const noexcept override { return "ZIC"; }

protected:
  std::optional<Price> compute_quote(const MarketView& view) override;
};

/// Shaver: improves the same-side best by one tick while that stays within
/// the limit. Quotes the limit itself when its side of the book is empty.
class ShvrTrader final : public Agent {
public:
  using Agent::Agent;
  [[nodiscard]] std::unique_ptr<Agent> clone() const override {
    return std::make_unique<ShvrTrader>(*this);
  }
  [[nodiscard]] std::string_view ticker() const noexcept override { return "SHVR"; }

protected:
  std::optional<Price> compute_quote(const MarketView& view) override;
};

}  // namespace cda::traders
