#include "cda/market/env.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cda::market {

double OffsetFunction::value(double t) const noexcept {
  switch (kind) {
    case OffsetKind::None:
      return 0.0;
    case OffsetKind::Sin:
      return c * std::sin(t / 30.0);
    case OffsetKind::GrowingSin:
      return c * t * (1.0 + std::sin(omega * t));
    case OffsetKind::Saw:
      return std::fmod(t, 75.0) / 2.0;
    case OffsetKind::Square: {
      const double s = std::sin(t / 30.0);
      return c * static_cast<double>((s > 0.0) - (s < 0.0));
    }
  }
  return 0.0;
}

Ticks offset_ticks(const OffsetFunction& f, double t_seconds) {
  return static_cast<Ticks>(std::llround(f.value(t_seconds) * kTicksPerUnit));
}

ShockTimetable::ShockTimetable(std::vector<ShockSegment> segments, ShockCode code)
    : segments_(std::move(segments)), code_(code) {
  if (segments_.empty() || segments_.front().start_day != 1)
    throw std::invalid_argument("shock timetable must start at day 1");
  for (std::size_t i = 1; i < segments_.size(); ++i)
    if (segments_[i].start_day <= segments_[i - 1].start_day)
      throw std::invalid_argument("shock start days must strictly increase");
}

ShockTimetable ShockTimetable::constant(std::string label) {
  return ShockTimetable({{1, std::move(label)}}, ShockCode::None);
}

ShockTimetable ShockTimetable::for_code(ShockCode code) {
  switch (code) {
    case ShockCode::MS14:
      return ShockTimetable({{1, "M1"}, {11, "M4"}}, code);
    case ShockCode::MS21:
      return ShockTimetable({{1, "M2"}, {11, "M1"}}, code);
    case ShockCode::MS31:
      return ShockTimetable({{1, "M3"}, {11, "M1"}}, code);
    case ShockCode::MS23:
      return ShockTimetable({{1, "M2"}, {11, "M3"}}, code);
    case ShockCode::MS1231:
      return ShockTimetable({{1, "M1"}, {6, "M2"}, {11, "M3"}, {16, "M1"}}, code);
    case ShockCode::None:
      break;
  }
  return constant("M1");
}

const std::string& ShockTimetable::schedule_for_day(int day) const {
  if (segments_.empty()) throw std::logic_error("empty shock timetable");
  const ShockSegment* cur = &segments_.front();
  for (const auto& s : segments_)
    if (s.start_day <= day) cur = &s;
  return cur->label;
}

MarketEnv make_market(const std::string& name, const ScheduleCatalog& catalog,
                      const OffsetConstants& k, ReplenishmentMode replenishment) {
  MarketEnv env;
  env.name = name;
  env.catalog = catalog;
  env.replenishment = replenishment;

  static const std::pair<const char*, ShockCode> shocks[] = {
      {"MS14", ShockCode::MS14}, {"MS21", ShockCode::MS21},   {"MS31", ShockCode::MS31},
      {"MS23", ShockCode::MS23}, {"MS1231", ShockCode::MS1231}};
  for (const auto& [code_name, code] : shocks) {
    if (name == code_name) {
      env.timetable = ShockTimetable::for_code(code);
      for (const auto& seg : env.timetable.segments()) (void)catalog.spec(seg.label);
      return env;
    }
  }

  struct OffsetMarket {
    const char* name;
    OffsetFunction f;
  };
  const OffsetMarket offsets[] = {
      {"M6", {OffsetKind::Sin, k.c_sin, 0.0}},
      {"M7", {OffsetKind::GrowingSin, k.c_growing, k.omega_growing}},
      {"M8", {OffsetKind::Saw, 0.0, 0.0}},
      {"M9", {OffsetKind::Square, k.c_square, 0.0}},
  };
  for (const auto& om : offsets) {
    if (name == om.name && !catalog.contains(name)) {
      env.timetable = ShockTimetable::constant("M1");
      env.offset = om.f;
      (void)catalog.spec("M1");
      return env;
    }
  }

  (void)catalog.spec(name);  // throws "<name> undefined; bind explicitly"
  env.timetable = ShockTimetable::constant(name);
  return env;
}

std::vector<std::string> named_markets() {
  return {"M1", "M2", "M3", "M4", "MS14", "MS21", "MS31", "MS23", "MS1231", "M6", "M7", "M8", "M9"};
}

SupplyDemandSchedule schedule_at(const MarketEnv& env, int day, int n_per_side, double t_seconds) {
  SupplyDemandSchedule s = env.catalog.resolve(env.timetable.schedule_for_day(day), n_per_side);
  const Ticks off = offset_ticks(env.offset, t_seconds);
  if (off != 0) {
    s.buyer_limits = shifted(s.buyer_limits, off);
    s.seller_limits = shifted(s.seller_limits, off);
  }
  return s;
}

std::vector<Assignment> issue_assignments(const MarketEnv& env, std::span<const TraderId> buyers,
                                          std::span<const TraderId> sellers, int day,
                                          const SessionClock& clock, std::mt19937_64& rng) {
  if (buyers.size() != sellers.size())
    throw std::invalid_argument("roster sides differ in size");
  const int n = static_cast<int>(buyers.size());
  const SupplyDemandSchedule base =
      env.catalog.resolve(env.timetable.schedule_for_day(day), n);
  if (static_cast<int>(base.buyer_limits.size()) != n ||
      static_cast<int>(base.seller_limits.size()) != n)
    throw std::invalid_argument("roster size does not match schedule size");

  const SimTime start = clock.day_start(day);
  const std::size_t total = 2 * static_cast<std::size_t>(n);
  std::vector<SimTime> times(total, start);
  if (env.replenishment.mode == Replenishment::Continuous) {
    const double lambda = env.replenishment.lambda;
    if (!(lambda > 0.0)) throw std::invalid_argument("replenishment lambda must be positive");
    if (std::isfinite(lambda)) {
      const double mean_gap = clock.polls_per_day / (static_cast<double>(total) * lambda);
      std::exponential_distribution<double> gap(1.0 / mean_gap);
      double t = 0.0;
      for (auto& ti : times) {
        t += gap(rng);
        const auto tick = std::min<SimTime>(static_cast<SimTime>(t), clock.polls_per_day - 1);
        ti = start + tick;
      }
      std::shuffle(times.begin(), times.end(), rng);
    }
  }

  std::vector<int> buyer_perm(static_cast<std::size_t>(n)), seller_perm(static_cast<std::size_t>(n));
  std::iota(buyer_perm.begin(), buyer_perm.end(), 0);
  std::iota(seller_perm.begin(), seller_perm.end(), 0);
  std::shuffle(buyer_perm.begin(), buyer_perm.end(), rng);
  std::shuffle(seller_perm.begin(), seller_perm.end(), rng);

  // Arrival slots are dealt alternately to buyers and sellers in shuffled order.
  std::vector<Assignment> out;
  out.reserve(total);
  std::size_t slot = 0;
  for (int i = 0; i < n; ++i) {
    for (Role role : {Role::Buyer, Role::Seller}) {
      Assignment a;
      a.role = role;
      a.issue_time = times[slot++];
      const auto k = static_cast<std::size_t>(i);
      const double secs = clock.seconds(a.issue_time);
      const Ticks off = offset_ticks(env.offset, secs);
      if (role == Role::Buyer) {
        a.trader = buyers[static_cast<std::size_t>(buyer_perm[k])];
        a.limit = clamp_price(base.buyer_limits[k].ticks() + off);
      } else {
        a.trader = sellers[static_cast<std::size_t>(seller_perm[k])];
        a.limit = clamp_price(base.seller_limits[k].ticks() + off);
      }
      out.push_back(a);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Assignment& x, const Assignment& y) {
    return x.issue_time < y.issue_time;
  });
  return out;
}

}  // namespace cda::market
