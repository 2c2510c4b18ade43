#pragma once

#include "cda/types.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cda::market {

/// Limit prices for one side, either an explicit list or a linear ramp
/// from `first` to `last` spread evenly over however many traders there are.
struct CurveSpec {
  std::optional<std::vector<double>> explicit_limits;  // currency
  double first{0.0};
  double last{0.0};

  [[nodiscard]] std::vector<Price> resolve(int n) const;
};

struct ScheduleSpec {
  std::string label;
  CurveSpec demand;  // buyers, listed from highest limit
  CurveSpec supply;  // sellers, listed from lowest limit
};

struct SupplyDemandSchedule {
  std::string label;
  std::vector<Price> buyer_limits;
  std::vector<Price> seller_limits;
};

/// Named schedules (M1..M4 built in, plus anything bound from config).
class ScheduleCatalog {
public:
  static ScheduleCatalog builtin();

  void bind(ScheduleSpec spec);
  [[nodiscard]] bool contains(const std::string& label) const;
  /// Throws std::out_of_range with a binding hint for unknown labels.
  [[nodiscard]] const ScheduleSpec& spec(const std::string& label) const;
  [[nodiscard]] SupplyDemandSchedule resolve(const std::string& label, int n_per_side) const;
  [[nodiscard]] std::vector<std::string> labels() const;

private:
  std::map<std::string, ScheduleSpec> specs_;
};

struct Equilibrium {
  double p0{0.0};            // ticks; may sit on a half tick
  int q0{0};
  Ticks max_surplus{0};      // ticks
};

/// Intersection of the demand and supply step curves. Empty when the
/// highest buyer limit is below the lowest seller limit.
std::optional<Equilibrium> equilibrium(std::span<const Price> buyer_limits,
                                       std::span<const Price> seller_limits);

inline std::optional<Equilibrium> equilibrium(const SupplyDemandSchedule& s) {
  return equilibrium(s.buyer_limits, s.seller_limits);
}

/// Shifts every limit by `offset_ticks`, clamping to the valid price range.
std::vector<Price> shifted(std::span<const Price> limits, Ticks offset_ticks);

}  // namespace cda::market
