#pragma once

#include "cda/traders/agent.hpp"
#include "cda/traders/params.hpp"

#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace cda::traders {

/// Tickers accepted by make_agent, in canonical order.
std::span<const std::string_view> known_tickers() noexcept;
bool is_known_ticker(std::string_view ticker) noexcept;

/// Throws std::invalid_argument for an unknown ticker.
std::unique_ptr<Agent> make_agent(std::string_view ticker, TraderId id, Role role,
                                  std::uint64_t seed, const StrategyParams& params = {});

}  // namespace cda::traders
