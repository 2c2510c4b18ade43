// cda-arena: run sessions, sweeps and latency probes from a YAML config.
#include "cda/config/config.hpp"
#include "cda/kernels/value_grid.hpp"
#include "cda/market/env.hpp"
#include "cda/session/record.hpp"
#include "cda/sweep/latency.hpp"
#include "cda/sweep/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "1.0.0";

enum Exit { kOk = 0, kConfigError = 1, kRuntimeError = 2, kPartial = 3 };

struct Common {
  std::string config;
  std::string manifest;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string out;
};

ordered_json yaml_to_json(const YAML::Node& n) {
  switch (n.Type()) {
    case YAML::NodeType::Map: {
      ordered_json j = ordered_json::object();
      for (const auto& kv : n) j[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return j;
    }
    case YAML::NodeType::Sequence: {
      ordered_json j = ordered_json::array();
      for (const auto& x : n) j.push_back(yaml_to_json(x));
      return j;
    }
    case YAML::NodeType::Scalar: {
      const auto& s = n.Scalar();
      if (n.Tag() == "!") return s;  // quoted in the source
      if (s == "true" || s == "false") return s == "true";
      try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos == s.size()) return v;
      } catch (const std::exception&) {
      }
      try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos == s.size()) return v;
      } catch (const std::exception&) {
      }
      return s;
    }
    default:
      return nullptr;
  }
}

std::string now_iso() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

fs::path out_dir(const Common& c) {
  if (!c.out.empty()) return c.out;
  if (const char* env = std::getenv("CDA_ARENA_OUT"); env && *env) return env;
  return "out";
}

cda::config::ArenaConfig load(const Common& c) {
  std::vector<std::string> ov = c.overrides;
  if (c.seed) ov.push_back("seed=" + std::to_string(*c.seed));
  if (!c.manifest.empty()) {
    std::ifstream in(c.manifest);
    if (!in) throw cda::config::ConfigError("cannot read manifest " + c.manifest);
    ordered_json m;
    try {
      m = ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw cda::config::ConfigError("bad manifest: " + std::string(e.what()));
    }
    if (!m.contains("config")) throw cda::config::ConfigError("manifest has no config");
    return cda::config::load_config_text(m["config"].dump(), ov);
  }
  if (c.config.empty()) return cda::config::load_config(std::nullopt, ov);
  return cda::config::load_config(fs::path(c.config), ov);
}

struct Manifest {
  ordered_json doc;
  fs::path path;

  void write() const {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << doc.dump(2) << '\n';
  }
};

Manifest start_manifest(const std::string& command, const cda::config::ArenaConfig& cfg,
                        const fs::path& dir) {
  fs::create_directories(dir);
  Manifest m;
  m.path = dir / "run_manifest.json";
  m.doc["tool"] = "cda-arena";
  m.doc["version"] = kVersion;
  m.doc["command"] = command;
  m.doc["config_source"] = cfg.source.string();
  m.doc["overrides"] = cfg.overrides;
  m.doc["base_seed"] = cfg.seed;
  m.doc["simd"] = std::string(cda::kernels::isa_name(cda::kernels::active_isa()));
  m.doc["config"] = yaml_to_json(cfg.resolved);
  m.doc["started_at"] = now_iso();
  m.doc["finished_at"] = nullptr;
  m.doc["outputs"] = ordered_json::array();
  m.write();
  return m;
}

void finish_manifest(Manifest& m, const std::vector<fs::path>& outputs) {
  for (const auto& p : outputs) m.doc["outputs"].push_back(p.string());
  m.doc["finished_at"] = now_iso();
  m.write();
}

int cmd_session(const Common& c, bool tape) {
  auto cfg = load(c);
  if (tape) cfg.record_tape = true;
  const auto sc = cfg.session_config();
  const auto dir = out_dir(c);
  auto manifest = start_manifest("session", cfg, dir);

  const auto res = cda::session::run_session(sc);
  std::vector<fs::path> outputs{dir / "session.jsonl"};
  {
    std::ofstream f(outputs[0]);
    cda::session::write_jsonl(f, res);
  }
  if (cfg.record_tape) {
    outputs.push_back(dir / "tape.csv");
    std::ofstream f(outputs.back());
    cda::exchange::write_tape_csv(f, res.tape);
  }
  finish_manifest(manifest, outputs);
  if (!res.ok) {
    std::cerr << "session failed: " << res.error << '\n';
    return kRuntimeError;
  }
  std::cout << cda::session::to_json(res.metrics).dump(2) << '\n';
  return kOk;
}

int cmd_sweep(const Common& c, std::optional<int> workers, bool dry_run, bool resume) {
  auto cfg = load(c);
  if (workers) cfg.sweep.workers = *workers;
  const auto spec = cfg.sweep_spec();
  if (dry_run) {
    std::cout << cda::sweep::dry_run_summary(spec) << '\n';
    return kOk;
  }
  const auto dir = out_dir(c);
  auto manifest = start_manifest("sweep", cfg, dir);
  manifest.doc["scheduled_sessions"] = spec.session_total();
  manifest.doc["scheduled_trading_days"] = spec.trading_day_total();
  manifest.write();

  cda::sweep::SweepOptions opt;
  opt.journal = dir / "sweep_journal.jsonl";
  opt.resume = resume;
  std::uint64_t last_pct = 101;
  opt.progress = [&](std::uint64_t done, std::uint64_t total) {
    const std::uint64_t pct = done * 100 / std::max<std::uint64_t>(total, 1);
    if (pct != last_pct && pct % 10 == 0) {
      std::cerr << "sweep: " << done << "/" << total << " sessions\n";
      last_pct = pct;
    }
  };
  const auto table = cda::sweep::run_sweep(spec, opt);
  cda::sweep::write_outputs(table, dir);
  manifest.doc["failed_sessions"] = table.failed;
  manifest.doc["resumed_sessions"] = table.resumed;
  finish_manifest(manifest, {dir / "sweep_summary.csv", dir / "sweep_strategy_stats.csv",
                             dir / "sweep_cells.jsonl", dir / "utests.csv", opt.journal});
  {
    std::ifstream f(dir / "sweep_summary.csv");
    std::cout << f.rdbuf();
  }
  if (table.failed > 0) {
    std::cerr << table.failed << " sessions failed; see sweep_cells.jsonl\n";
    return kPartial;
  }
  return kOk;
}

int cmd_latency(const Common& c, std::optional<int> calls) {
  auto cfg = load(c);
  if (calls) cfg.latency.calls = *calls;
  if (cfg.latency.calls < 1) throw cda::config::ConfigError("--calls must be at least 1");
  const auto dir = out_dir(c);
  auto manifest = start_manifest("latency", cfg, dir);
  std::vector<cda::sweep::LatencyRow> rows;
  for (const auto& m : cfg.latency.markets) {
    cda::sweep::LatencyFixture fx;
    try {
      fx = cda::sweep::make_latency_fixture(m, cfg.latency.tickers, cfg.latency.per_side, cfg.seed,
                                            cfg.catalog, cfg.offsets, cfg.strategies);
    } catch (const std::out_of_range& e) {
      throw cda::config::ConfigError(e.what());
    }
    for (const auto& t : cfg.latency.tickers)
      rows.push_back({m, t, cda::sweep::latency_probe(t, fx, cfg.latency.calls)});
  }
  const auto path = dir / "latency.csv";
  {
    std::ofstream f(path);
    cda::sweep::write_latency_csv(rows, f);
  }
  finish_manifest(manifest, {path});
  cda::sweep::write_latency_csv(rows, std::cout);
  return kOk;
}

int cmd_schedules(const Common& c, int n) {
  auto cfg = load(c);
  if (n < 1) throw cda::config::ConfigError("--n must be at least 1");
  const auto dir = out_dir(c);
  fs::create_directories(dir);
  const auto path = dir / "schedules.csv";
  std::ofstream f(path);
  f << "market,side,rank,limit,p0\n";
  for (const auto& name : cda::market::named_markets()) {
    cda::market::MarketEnv env;
    try {
      env = cda::market::make_market(name, cfg.catalog, cfg.offsets);
    } catch (const std::out_of_range&) {
      continue;  // unbound labels such as M5
    }
    const auto s = cda::market::schedule_at(env, 1, n, 0.0);
    const auto eq = cda::market::equilibrium(s);
    char p0[32] = "";
    if (eq) std::snprintf(p0, sizeof p0, "%.2f", eq->p0 / cda::kTicksPerUnit);
    for (std::size_t i = 0; i < s.buyer_limits.size(); ++i)
      f << name << ",demand," << i + 1 << ',' << cda::format_currency(s.buyer_limits[i].ticks()) << ','
        << p0 << '\n';
    for (std::size_t i = 0; i < s.seller_limits.size(); ++i)
      f << name << ",supply," << i + 1 << ',' << cda::format_currency(s.seller_limits[i].ticks()) << ','
        << p0 << '\n';
  }
  std::cout << path.string() << '\n';
  return kOk;
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "YAML config file");
  app->add_option("--manifest", c.manifest, "Replay the config recorded in a run_manifest.json");
  app->add_option("--override", c.overrides, "key.path=value (repeatable)");
  app->add_option("--seed", c.seed, "Base seed");
  app->add_option("--out", c.out, "Output directory (default: $CDA_ARENA_OUT or ./out)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous double auction arena"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Common c;
  bool tape = false;
  std::optional<int> workers;
  bool dry_run = false;
  bool resume = false;
  std::optional<int> calls;
  int n = 16;

  auto* session = app.add_subcommand("session", "Run one market session");
  add_common(session, c);
  session->add_flag("--tape", tape, "Also write tape.csv");

  auto* sweep = app.add_subcommand("sweep", "Run every ratio composition over the configured markets");
  add_common(sweep, c);
  sweep->add_option("--workers", workers, "Worker threads");
  sweep->add_flag("--dry-run", dry_run, "Print the cell count only");
  sweep->add_flag("--resume", resume, "Skip cells already in the journal");

  auto* latency = app.add_subcommand("latency", "Time quote decisions per strategy");
  add_common(latency, c);
  latency->add_option("--calls", calls, "Quote calls per strategy and market");

  auto* schedules = app.add_subcommand("schedules", "Dump the M1-M9 curves as CSV");
  add_common(schedules, c);
  schedules->add_option("--n", n, "Traders per side");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*session) return cmd_session(c, tape);
    if (*sweep) return cmd_sweep(c, workers, dry_run, resume);
    if (*latency) return cmd_latency(c, calls);
    if (*schedules) return cmd_schedules(c, n);
  } catch (const cda::config::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kConfigError;
}
