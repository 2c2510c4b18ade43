#pragma once

#include "cda/kernels/value_grid.hpp"
#include "cda/traders/agent.hpp"
#include "cda/traders/params.hpp"

#include <deque>
#include <utility>
#include <vector>

namespace cda::traders {

struct ShoutRecord {
  Side side;
  Ticks price;
  OrderId order;
  bool accepted;
};

/// The last `capacity` shouts seen on the market, each tagged with whether it
/// has traded yet.
class ShoutHistory {
public:
  explicit ShoutHistory(int capacity = 30) : capacity_(capacity) {}

  void push(Side side, Price price, OrderId order, bool accepted);
  void mark_accepted(OrderId order) noexcept;
  [[nodiscard]] const std::deque<ShoutRecord>& entries() const noexcept { return entries_; }
  [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }

private:
  int capacity_;
  std::deque<ShoutRecord> entries_;
};

/// Frequentist acceptance belief, piecewise-linear between observed prices.
///
/// For a bid at p: (accepted bids <= p + asks <= p) over that plus rejected
/// bids >= p. For an ask at p: (accepted asks >= p + bids >= p) over that plus
/// rejected asks <= p. Anchored at 0 and 1 at the ends of the price range.
class BeliefCurve {
public:
  static BeliefCurve build(const ShoutHistory& history, Side side, double prior = 0.5);

  [[nodiscard]] double at(Ticks price) const noexcept;
  /// Belief at lo, lo+1, ... for out.size() consecutive ticks.
  void sample(Ticks lo, std::span<double> out) const noexcept;

  [[nodiscard]] const std::vector<std::pair<Ticks, double>>& knots() const noexcept {
    return knots_;
  }
  [[nodiscard]] bool flat() const noexcept { return knots_.empty(); }
  [[nodiscard]] std::pair<Ticks, Ticks> observed_range() const noexcept { return observed_; }

private:
  std::vector<std::pair<Ticks, double>> knots_;
  double prior_{0.5};
  std::pair<Ticks, Ticks> observed_{0, 0};
};

double gd_belief(const ShoutHistory& history, Price price, Side side, double prior = 0.5);

/// Candidate quote prices with per-price acceptance belief and surplus.
struct GridProblem {
  std::vector<Ticks> prices;
  std::vector<double> belief;
  std::vector<double> surplus;
};

struct GdxChoice {
  std::size_t index;
  double value;
};

/// Solves V(m,k) = max_p b(p) (s(p) + g V(m-1,k-1)) + (1 - b(p)) g V(m,k-1)
/// with V(0,.) = V(.,0) = 0 for m = units, k = horizon and returns the
/// maximizing price. Exact ties go to the price nearest `tie_anchor`, else
/// to the lowest index. Empty when no price has positive value.
std::optional<GdxChoice> solve_gdx(const GridProblem& problem, double gamma, int units,
                                   int horizon, std::optional<Ticks> tie_anchor,
                                   kernels::ValueGridFn kernel = kernels::value_grid());

/// GDX: Gjerstad-Dickhaut belief learning with the touch clamps of the
/// modified GD trader and a discounted multi-step dynamic program.
class GdxTrader final : public Agent {
public:
  GdxTrader(TraderId id, Role role, std::uint64_t seed, const GdxParams& params);

  [[nodiscard]] std::unique_ptr<Agent> clone() const override {
    return std::make_unique<GdxTrader>(*this);
  }
  [[nodiscard]] std::string_view ticker() const noexcept override { return "GDX"; }

  void respond(const MarketEvent& event, const MarketView& view) override;
  void on_day_start(int day) override;

  [[nodiscard]] const ShoutHistory& history() const noexcept { return history_; }
  [[nodiscard]] int budget() const noexcept { return budget_; }
  [[nodiscard]] const GdxParams& params() const noexcept { return params_; }
  void set_grid_pad(Ticks pad) noexcept { params_.grid_pad = pad; }

  /// The grid this trader would optimize over for `view`.
  [[nodiscard]] GridProblem build_grid(const MarketView& view) const;

protected:
  std::optional<Price> compute_quote(const MarketView& view) override;

private:
  GdxParams params_;
  ShoutHistory history_;
  int budget_;
};

}  // namespace cda::traders
