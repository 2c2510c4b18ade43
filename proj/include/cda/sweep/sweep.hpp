#pragma once

#include "cda/market/env.hpp"
#include "cda/session/session.hpp"
#include "cda/sweep/ratios.hpp"
#include "cda/sweep/utest.hpp"

#include <json.hpp>

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cda::sweep {

struct SweepSpec {
  std::vector<std::string> strategies;  // at most four in the published tables, any number here
  int per_side{16};
  int trials{100};
  std::vector<std::string> markets;
  std::uint64_t base_seed{0};
  int workers{1};

  market::ScheduleCatalog catalog{market::ScheduleCatalog::builtin()};
  market::OffsetConstants offsets;
  market::ReplenishmentMode replenishment;
  int n_days{20};
  double day_length{300.0};
  int polls_per_second{8};
  traders::StrategyParams strategy_params;

  void validate() const;
  [[nodiscard]] std::uint64_t ratio_total() const;
  [[nodiscard]] std::uint64_t session_total() const;
  [[nodiscard]] std::uint64_t trading_day_total() const;
};

/// "969 ratios, 96,900 sessions, 1,938,000 trading days"
std::string dry_run_summary(const SweepSpec& spec);
/// 1938000 -> "1,938,000"
std::string group_thousands(std::uint64_t v);

struct CellKey {
  int market{0};
  int ratio{0};
  int trial{0};
  auto operator<=>(const CellKey&) const = default;
};

std::uint64_t cell_seed(std::uint64_t base, const CellKey& key) noexcept;

/// One finished session of the sweep.
struct CellRow {
  CellKey key;
  std::string market;
  Composition ratio;
  std::uint64_t seed{0};
  bool ok{true};
  std::string error;
  bool homogeneous{false};
  std::map<std::string, double> ae;  // strategies holding at least one slot
  double ae_global{0.0};
  std::optional<double> alpha;
  double pd{0.0};
  int n_trades{0};
  int negative_surplus_trades{0};
};

nlohmann::ordered_json to_json(const CellRow& row);
CellRow cell_from_json(const nlohmann::json& j);

struct StrategyStat {
  std::string market;
  std::string ticker;
  double ae_mean{0.0};
  double ae_sd{0.0};
  std::optional<double> alpha_mean;
  double pd_mean{0.0};
  int n_sessions{0};
};

struct UTestRow {
  std::string market;
  std::string a;
  std::string b;
  int n_a{0};
  int n_b{0};
  UTestResult test;
};

struct SweepTable {
  std::vector<std::string> strategies;
  std::vector<std::string> markets;
  std::vector<CellRow> cells;  // ok and failed, in cell order
  std::vector<StrategyStat> stats;
  std::vector<UTestRow> utests;
  std::uint64_t scheduled{0};
  std::uint64_t failed{0};
  std::uint64_t resumed{0};  // cells taken from the journal
  std::uint64_t trading_days{0};

  [[nodiscard]] const StrategyStat* stat(const std::string& market, const std::string& ticker) const;
  [[nodiscard]] const UTestRow* utest(const std::string& market, const std::string& a,
                                      const std::string& b) const;
  /// AE samples of one strategy in one market, in cell order.
  [[nodiscard]] std::vector<double> samples(const std::string& market,
                                            const std::string& ticker) const;
};

struct SweepOptions {
  /// Append-only journal of finished cells; empty disables journaling.
  std::filesystem::path journal;
  /// Reuse cells already present in the journal.
  bool resume{false};
  /// Called after each finished cell with (done, scheduled). Serialized.
  std::function<void(std::uint64_t, std::uint64_t)> progress;
};

/// The session a cell runs.
session::SessionConfig cell_config(const SweepSpec& spec, const CellKey& key,
                                   const std::vector<Composition>& ratios);

SweepTable run_sweep(const SweepSpec& spec, const SweepOptions& options = {});

/// Recomputes stats and U-tests from table.cells.
void aggregate(SweepTable& table);

void write_summary_csv(const SweepTable& t, std::ostream& out);
void write_stats_csv(const SweepTable& t, std::ostream& out);
void write_cells_jsonl(const SweepTable& t, std::ostream& out);
void write_utests_csv(const SweepTable& t, std::ostream& out);

/// Writes sweep_summary.csv, sweep_strategy_stats.csv, sweep_cells.jsonl and
/// utests.csv into `dir`.
void write_outputs(const SweepTable& t, const std::filesystem::path& dir);

}  // namespace cda::sweep
