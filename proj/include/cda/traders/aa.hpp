#pragma once

#include "cda/traders/agent.hpp"
#include "cda/traders/params.hpp"

#include <deque>

namespace cda::traders {

/// theta-shaped target map on [0, 1]: (e^{x theta} - 1) / (e^theta - 1).
double aa_curve(double x, double theta) noexcept;
/// Inverse of aa_curve in x.
double aa_curve_inv(double y, double theta) noexcept;

/// Exponentially weighted mean of `prices` (oldest first), newest weighted 1.
double ewma(const std::deque<double>& prices, double decay) noexcept;

struct AaState {
  double r{0.0};
  double theta{-2.0};
  std::optional<double> p_hat;   // ticks
  double alpha{0.0};             // normalized volatility
  bool intramarginal{true};
};

/// Adaptive Aggressiveness. The Micro variant estimates the equilibrium from
/// the book's microprice and measures volatility against the pre-trade
/// microprice.
class AaTrader final : public Agent {
public:
  AaTrader(TraderId id, Role role, std::uint64_t seed, const AaParams& params,
           AaVariant variant = AaVariant::Classic);

  [[nodiscard]] std::unique_ptr<Agent> clone() const override {
    return std::make_unique<AaTrader>(*this);
  }
  [[nodiscard]] std::string_view ticker() const noexcept override {
    return variant_ == AaVariant::Micro ? "MAA" : "AA";
  }

  void respond(const MarketEvent& event, const MarketView& view) override;

  [[nodiscard]] const AaState& state() const noexcept { return state_; }
  void set_aggressiveness(double r) noexcept;
  void set_theta(double theta) noexcept;

  /// Equilibrium estimate from the current view and the trade history.
  [[nodiscard]] std::optional<double> estimate_equilibrium(const MarketView& view) const;
  /// Target price for aggressiveness r around estimate p_hat.
  [[nodiscard]] double target(double r, double p_hat) const;
  /// Aggressiveness whose target equals `price`.
  [[nodiscard]] double aggressiveness_for(double price, double p_hat) const;

  [[nodiscard]] const std::deque<double>& trade_prices() const noexcept { return trades_; }

protected:
  std::optional<Price> compute_quote(const MarketView& view) override;
  void on_assign() override;

private:
  void update_r(double q, bool trade, Side shout_side, double p_hat);
  void update_theta();

  AaParams params_;
  AaVariant variant_;
  AaState state_;
  std::deque<double> trades_;       // recent trade prices, oldest first
  std::deque<double> references_;   // p_hat in force just before each trade
  double last_limit_{0.0};
  double alpha_min_{1e300};
  double alpha_max_{0.0};
};

}  // namespace cda::traders
