#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace cda {

using Ticks = std::int64_t;
using TraderId = std::int32_t;
using OrderId = std::uint64_t;
// Integer event index. One poll of one trader advances it by one.
using SimTime = std::int64_t;

inline constexpr Ticks kTicksPerUnit = 100;
inline constexpr Ticks kMinTicks = 1;
inline constexpr Ticks kMaxTicks = 500 * kTicksPerUnit;

/// A quote or trade price: an exact number of 0.01 ticks in [0.01, 500.00].
class Price {
public:
  constexpr Price() = default;
  constexpr explicit Price(Ticks ticks) : ticks_(ticks) {}

  static Price from_currency_floor(double units) {
    return Price(static_cast<Ticks>(std::floor(units * kTicksPerUnit + 1e-9)));
  }
  static Price from_currency_ceil(double units) {
    return Price(static_cast<Ticks>(std::ceil(units * kTicksPerUnit - 1e-9)));
  }
  static Price from_currency(double units) {
    return Price(static_cast<Ticks>(std::llround(units * kTicksPerUnit)));
  }

  [[nodiscard]] constexpr Ticks ticks() const noexcept { return ticks_; }
  [[nodiscard]] constexpr double currency() const noexcept {
    return static_cast<double>(ticks_) / kTicksPerUnit;
  }
  [[nodiscard]] constexpr bool valid() const noexcept {
    return ticks_ >= kMinTicks && ticks_ <= kMaxTicks;
  }

  constexpr auto operator<=>(const Price&) const = default;

private:
  Ticks ticks_{0};
};

inline constexpr Price kPriceMin{kMinTicks};
inline constexpr Price kPriceMax{kMaxTicks};

constexpr Price clamp_price(Ticks t) noexcept {
  return Price(t < kMinTicks ? kMinTicks : (t > kMaxTicks ? kMaxTicks : t));
}

enum class Side : std::uint8_t { Bid, Ask };

constexpr Side opposite(Side s) noexcept { return s == Side::Bid ? Side::Ask : Side::Bid; }
constexpr std::string_view to_string(Side s) noexcept { return s == Side::Bid ? "BID" : "ASK"; }

// Traders are fixed-role: buyers only bid, sellers only ask.
enum class Role : std::uint8_t { Buyer, Seller };

constexpr Side side_of(Role r) noexcept { return r == Role::Buyer ? Side::Bid : Side::Ask; }
constexpr std::string_view to_string(Role r) noexcept { return r == Role::Buyer ? "BUYER" : "SELLER"; }

std::string format_currency(Ticks ticks);

}  // namespace cda
