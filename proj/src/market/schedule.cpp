#include "cda/market/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace cda::market {

std::vector<Price> CurveSpec::resolve(int n) const {
  if (n < 1) throw std::invalid_argument("schedule side needs at least one trader");
  std::vector<Price> out;
  out.reserve(static_cast<std::size_t>(n));
  if (explicit_limits) {
    if (static_cast<int>(explicit_limits->size()) != n)
      throw std::invalid_argument("explicit limit list has " +
                                  std::to_string(explicit_limits->size()) + " entries, roster has " +
                                  std::to_string(n));
    for (double v : *explicit_limits) out.push_back(Price::from_currency(v));
  } else {
    const double lo = first * kTicksPerUnit;
    const double hi = last * kTicksPerUnit;
    for (int i = 0; i < n; ++i) {
      const double v = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
      out.push_back(Price(static_cast<Ticks>(std::llround(v))));
    }
  }
  for (const Price& p : out)
    if (!p.valid()) throw std::invalid_argument("schedule limit outside the valid price range");
  return out;
}

ScheduleCatalog ScheduleCatalog::builtin() {
  ScheduleCatalog c;
  // Equilibria: 30 for M1-M3, 40 for M4.
  c.bind({"M1", {std::nullopt, 45.0, 15.0}, {std::nullopt, 15.0, 45.0}});
  c.bind({"M2", {std::nullopt, 45.0, 15.0}, {std::nullopt, 30.0, 30.0}});
  c.bind({"M3", {std::nullopt, 30.0, 30.0}, {std::nullopt, 15.0, 45.0}});
  c.bind({"M4", {std::nullopt, 55.0, 25.0}, {std::nullopt, 10.0, 70.0}});
  return c;
}

void ScheduleCatalog::bind(ScheduleSpec spec) {
  std::string label = spec.label;
  specs_.insert_or_assign(std::move(label), std::move(spec));
}

bool ScheduleCatalog::contains(const std::string& label) const { return specs_.contains(label); }

const ScheduleSpec& ScheduleCatalog::spec(const std::string& label) const {
  auto it = specs_.find(label);
  if (it == specs_.end()) throw std::out_of_range(label + " undefined; bind explicitly");
  return it->second;
}

SupplyDemandSchedule ScheduleCatalog::resolve(const std::string& label, int n_per_side) const {
  const ScheduleSpec& s = spec(label);
  return {label, s.demand.resolve(n_per_side), s.supply.resolve(n_per_side)};
}

std::vector<std::string> ScheduleCatalog::labels() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : specs_) out.push_back(k);
  return out;
}

std::optional<Equilibrium> equilibrium(std::span<const Price> buyer_limits,
                                       std::span<const Price> seller_limits) {
  if (buyer_limits.empty() || seller_limits.empty())
    throw std::invalid_argument("equilibrium needs both sides non-empty");
  std::vector<Ticks> d, s;
  for (Price p : buyer_limits) d.push_back(p.ticks());
  for (Price p : seller_limits) s.push_back(p.ticks());
  std::sort(d.begin(), d.end(), std::greater<>());
  std::sort(s.begin(), s.end());
  if (d.front() < s.front()) return std::nullopt;

  Equilibrium eq;
  const std::size_t n = std::min(d.size(), s.size());
  std::size_t q = 0;
  while (q < n && d[q] >= s[q]) {
    eq.max_surplus += d[q] - s[q];
    ++q;
  }
  eq.q0 = static_cast<int>(q);
  // Clearing interval: no excluded trader wants in, no included one wants out.
  Ticks lo = s[q - 1];
  Ticks hi = d[q - 1];
  if (q < d.size()) lo = std::max(lo, d[q]);
  if (q < s.size()) hi = std::min(hi, s[q]);
  eq.p0 = 0.5 * static_cast<double>(lo + hi);
  return eq;
}

std::vector<Price> shifted(std::span<const Price> limits, Ticks offset_ticks) {
  std::vector<Price> out;
  out.reserve(limits.size());
  for (Price p : limits) out.push_back(clamp_price(p.ticks() + offset_ticks));
  return out;
}

}  // namespace cda::market
