#pragma once

#include "cda/market/schedule.hpp"
#include "cda/session/session.hpp"
#include "cda/sweep/sweep.hpp"

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cda::config {

/// Anything wrong with the configuration or its overrides.
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct LatencySpec {
  std::vector<std::string> tickers{"AA", "ASAD", "GDX", "ZIP"};
  std::vector<std::string> markets{"M7", "M6", "M1", "MS23"};
  int per_side{5};
  int calls{500};
};

/// A parsed configuration file with overrides applied.
struct ArenaConfig {
  YAML::Node resolved;  // the document after overrides; echoed into the manifest
  std::vector<std::string> overrides;
  std::filesystem::path source;

  std::uint64_t seed{0};
  std::string market{"M1"};
  int n_days{20};
  double day_length{300.0};
  int polls_per_second{8};
  market::ReplenishmentMode replenishment;
  market::OffsetConstants offsets;
  market::ScheduleCatalog catalog{market::ScheduleCatalog::builtin()};
  std::vector<session::RosterEntry> buyers;
  std::vector<session::RosterEntry> sellers;
  bool record_tape{false};
  traders::StrategyParams strategies;

  sweep::SweepSpec sweep;
  LatencySpec latency;

  /// Throws ConfigError, e.g. for an unbound market label.
  [[nodiscard]] session::SessionConfig session_config() const;
  [[nodiscard]] sweep::SweepSpec sweep_spec() const;
};

/// Loads `path` (or the defaults when empty) and applies `key.path=value`
/// overrides, each value parsed as YAML. Throws ConfigError.
ArenaConfig load_config(const std::optional<std::filesystem::path>& path,
                        const std::vector<std::string>& overrides = {});
ArenaConfig load_config_text(const std::string& yaml, const std::vector<std::string>& overrides = {});

/// "GDX:8,ZIC:8" or a YAML list of {ticker, count} maps / "GDX:8" strings.
std::vector<session::RosterEntry> parse_roster(const YAML::Node& node);

/// A `schedules:` mapping of label -> {demand, supply}; each curve is
/// {first, last} or {limits: [...]}, in currency.
market::ScheduleCatalog load_schedules(const std::filesystem::path& path);
void bind_schedules(market::ScheduleCatalog& catalog, const YAML::Node& schedules);

}  // namespace cda::config
