#include "cda/traders/factory.hpp"

#include "cda/traders/aa.hpp"
#include "cda/traders/gdx.hpp"
#include "cda/traders/simple.hpp"
#include "cda/traders/zip.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace cda::traders {

namespace {
constexpr std::array<std::string_view, 7> kTickers{"ZIC", "SHVR", "ZIP", "ASAD", "GDX", "AA", "MAA"};
}

std::span<const std::string_view> known_tickers() noexcept { return kTickers; }

bool is_known_ticker(std::string_view ticker) noexcept {
  return std::find(kTickers.begin(), kTickers.end(), ticker) != kTickers.end();
}

std::unique_ptr<Agent> make_agent(std::string_view t, TraderId id, Role role, std::uint64_t seed,
                                  const StrategyParams& p) {
  if (t == "ZIC") return std::make_unique<ZicTrader>(id, role, seed);
  if (t == "SHVR") return std::make_unique<ShvrTrader>(id, role, seed);
  if (t == "ZIP") return std::make_unique<ZipTrader>(id, role, seed, p.zip);
  if (t == "ASAD") return std::make_unique<AsadTrader>(id, role, seed, p.zip, p.asad);
  if (t == "GDX") return std::make_unique<GdxTrader>(id, role, seed, p.gdx);
  if (t == "AA") return std::make_unique<AaTrader>(id, role, seed, p.aa, AaVariant::Classic);
  if (t == "MAA") return std::make_unique<AaTrader>(id, role, seed, p.aa, AaVariant::Micro);
  throw std::invalid_argument("unknown strategy ticker: " + std::string(t));
}

}  // namespace cda::traders
