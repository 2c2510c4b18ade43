#pragma once

#include "cda/session/session.hpp"

#include <optional>
#include <span>

namespace cda::metrics {

struct AlphaValue {
  double percent;
  double rms;  // same unit as the inputs
};

/// RMS deviation of trade prices from the equilibrium in force at each trade,
/// as a percentage of the mean in-force equilibrium. Empty with no trades.
std::optional<AlphaValue> smiths_alpha(std::span<const double> prices,
                                       std::span<const double> p0_at_trade);

/// 100 * realized / optimum; zero when the optimum is zero.
double efficiency(double realized, double optimum) noexcept;

/// RMS over traders of realized minus equilibrium-expected profit.
double profit_dispersion(std::span<const double> realized, std::span<const double> expected);

struct Efficiency {
  double global{0.0};
  std::map<std::string, double> by_strategy;
};

Efficiency allocative_efficiency(const session::SessionResult& r);

/// Fills every field of the bundle; currency fields are converted from ticks.
session::MetricsBundle compute_metrics(const session::SessionResult& r);

}  // namespace cda::metrics
