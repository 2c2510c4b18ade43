#pragma once

#include "cda/traders/agent.hpp"
#include "cda/traders/params.hpp"

#include <deque>

namespace cda::traders {

struct ZipState {
  double margin{0.0};       // buyer: (-1, 0]; seller: [0, inf)
  double beta{0.3};
  double momentum{0.3};
  double last_change{0.0};  // momentum term, ticks
  double limit{0.0};        // most recent limit in ticks; 0 before the first assignment
};

/// ZIP: a profit margin on the limit adapted by a momentum-smoothed
/// Widrow-Hoff rule toward perturbed targets around observed prices.
class ZipTrader : public Agent {
public:
  ZipTrader(TraderId id, Role role, std::uint64_t seed, const ZipParams& params);

  [[nodiscard]] std::unique_ptr<Agent> clone() const override {
    return std::make_unique<ZipTrader>(*this);
  }
  [[nodiscard]] std::string_view ticker() const noexcept override { return "ZIP"; }

  void respond(const MarketEvent& event, const MarketView& view) override;

  [[nodiscard]] const ZipState& state() const noexcept { return state_; }
  void set_margin(double m) noexcept;
  /// Current shout price limit * (1 + margin), in ticks.
  [[nodiscard]] double shout_price() const noexcept;

protected:
  std::optional<Price> compute_quote(const MarketView& view) override;
  void on_assign() override;

  void flush_momentum() noexcept { state_.last_change = 0.0; }
  ZipState& mutable_state() noexcept { return state_; }

private:
  double target_up(double q);
  double target_down(double q);
  void adapt_toward(double target);

  ZipParams params_;
  ZipState state_;
};

/// Rolling-window detector for step changes in trade prices: fires when the
/// mean of the newest `short_window` trades departs from the mean of the
/// preceding `long_window` trades by more than k standard deviations.
class ShockDetector {
public:
  explicit ShockDetector(const AsadParams& p) : params_(p) {}

  /// Returns true when this trade completes a detection; history is then flushed.
  bool observe(double price);
  [[nodiscard]] std::size_t size() const noexcept { return prices_.size(); }
  [[nodiscard]] int fired() const noexcept { return fired_; }

private:
  AsadParams params_;
  std::deque<double> prices_;
  int fired_{0};
};

/// ZIP plus a shock detector that pulls the margin toward zero and drops
/// momentum when the trade-price level shifts.
class AsadTrader final : public ZipTrader {
public:
  AsadTrader(TraderId id, Role role, std::uint64_t seed, const ZipParams& zip,
             const AsadParams& asad);

  [[nodiscard]] std::unique_ptr<Agent> clone() const override {
    return std::make_unique<AsadTrader>(*this);
  }
  [[nodiscard]] std::string_view ticker() const noexcept override { return "ASAD"; }

  void respond(const MarketEvent& event, const MarketView& view) override;

  [[nodiscard]] const ShockDetector& detector() const noexcept { return detector_; }

private:
  AsadParams asad_;
  ShockDetector detector_;
};

}  // namespace cda::traders
