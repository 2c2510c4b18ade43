#pragma once

#include "cda/market/schedule.hpp"
#include "cda/types.hpp"

#include <random>
#include <span>
#include <string>
#include <vector>

namespace cda::market {

enum class OffsetKind : std::uint8_t { None, Sin, GrowingSin, Saw, Square };

/// Time-varying shift F(t) added to every limit price. t is session seconds.
struct OffsetFunction {
  OffsetKind kind{OffsetKind::None};
  double c{0.0};
  double omega{0.0};

  /// Currency units.
  [[nodiscard]] double value(double t) const noexcept;
};

struct OffsetConstants {
  double c_sin{20.0};
  double c_square{20.0};
  double c_growing{0.05};
  double omega_growing{1.0 / 20.0};
};

enum class ShockCode : std::uint8_t { None, MS14, MS21, MS31, MS23, MS1231 };

struct ShockSegment {
  int start_day;
  std::string label;
};

class ShockTimetable {
public:
  ShockTimetable() = default;
  /// Throws std::invalid_argument unless start days strictly increase from day 1.
  explicit ShockTimetable(std::vector<ShockSegment> segments, ShockCode code = ShockCode::None);

  static ShockTimetable constant(std::string label);
  static ShockTimetable for_code(ShockCode code);

  [[nodiscard]] const std::string& schedule_for_day(int day) const;
  [[nodiscard]] const std::vector<ShockSegment>& segments() const noexcept { return segments_; }
  [[nodiscard]] ShockCode code() const noexcept { return code_; }

private:
  std::vector<ShockSegment> segments_;
  ShockCode code_{ShockCode::None};
};

enum class Replenishment : std::uint8_t { Periodic, Continuous };

struct ReplenishmentMode {
  Replenishment mode{Replenishment::Periodic};
  // Assignments per trader per day under CONTINUOUS.
  double lambda{1.0};
};

struct MarketEnv {
  std::string name;
  ScheduleCatalog catalog;
  ShockTimetable timetable;
  OffsetFunction offset;
  ReplenishmentMode replenishment;
};

/// Builds one of the named environments: M1-M4 (and any bound label such as
/// M5), M6-M9 (M1 plus an offset), or a shock code MS14/MS21/MS31/MS23/MS1231.
/// Throws std::out_of_range for labels the catalog cannot resolve.
MarketEnv make_market(const std::string& name, const ScheduleCatalog& catalog,
                      const OffsetConstants& constants = {},
                      ReplenishmentMode replenishment = {});

std::vector<std::string> named_markets();

/// Maps session ticks to session seconds.
struct SessionClock {
  int polls_per_day{2400};
  double day_length{300.0};

  [[nodiscard]] SimTime day_start(int day) const noexcept {
    return static_cast<SimTime>(day - 1) * polls_per_day;
  }
  [[nodiscard]] double seconds(SimTime t) const noexcept {
    return static_cast<double>(t) * day_length / polls_per_day;
  }
};

struct Assignment {
  Role role{Role::Buyer};
  Price limit{};
  int qty{1};
  SimTime issue_time{0};
  TraderId trader{0};
};

/// One day's assignments, sorted by issue time (ties in trader order).
/// Buyers and sellers are mapped to the day's limits by a fresh shuffle.
std::vector<Assignment> issue_assignments(const MarketEnv& env, std::span<const TraderId> buyers,
                                          std::span<const TraderId> sellers, int day,
                                          const SessionClock& clock, std::mt19937_64& rng);

/// The day's schedule with the offset evaluated at `t_seconds` applied.
SupplyDemandSchedule schedule_at(const MarketEnv& env, int day, int n_per_side, double t_seconds);

Ticks offset_ticks(const OffsetFunction& f, double t_seconds);

}  // namespace cda::market
