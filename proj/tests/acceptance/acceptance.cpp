// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failures. Pass criterion names as arguments to run a subset.

#include "cda/config/config.hpp"
#include "cda/exchange/order_book.hpp"
#include "cda/market/schedule.hpp"
#include "cda/session/session.hpp"
#include "cda/sweep/latency.hpp"
#include "cda/sweep/ratios.hpp"
#include "cda/sweep/sweep.hpp"
#include "cda/sweep/utest.hpp"
#include "cda/traders/gdx.hpp"

#include "../support/oracles.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#ifndef CDA_SOURCE_DIR
#define CDA_SOURCE_DIR "."
#endif
#ifndef CDA_ARENA_BIN
#define CDA_ARENA_BIN "cda-arena"
#endif

using namespace cda;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr int kLobSequences = 1000;
constexpr int kLobMaxLen = 50;
constexpr int kSurplusSets = 500;
constexpr int kSurplusMaxSide = 16;
constexpr int kGdxFixtures = 100;
constexpr int kUSamplesPerPair = 200;
constexpr int kUMaxPooled = 10;
constexpr double kUNormalTol = 0.02;
constexpr int kZicSessions = 100;
constexpr double kZicP0 = 30.0;
constexpr double kZicRelTol = 0.10;
constexpr double kDominanceP = 0.05;
constexpr int kDominanceMinSignificant = 3;
constexpr double kStaticAeGap = 5.0;
constexpr double kStaticP = 0.05;
constexpr int kLatencyCalls = 500;
constexpr double kLatencyRatio = 3.0;

struct Outcome {
  bool pass;
  std::string detail;
};

const fs::path kSource = CDA_SOURCE_DIR;

fs::path work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "cda_acceptance";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------- combinatorics

Outcome ratio_accounting() {
  const auto r = sweep::enumerate_ratios(4, 16);
  sweep::SweepSpec s;
  s.strategies = {"AA", "ASAD", "GDX", "ZIC"};
  s.per_side = 16;
  s.trials = 100;
  s.n_days = 20;
  s.markets = {"M1"};
  const auto line = sweep::dry_run_summary(s);
  const bool ok = r.size() == 969 && s.trading_day_total() == 1938000 &&
                  line == "969 ratios, 96,900 sessions, 1,938,000 trading days";
  return {ok, std::to_string(r.size()) + " compositions; dry run: " + line};
}

Outcome lob_oracle() {
  std::mt19937_64 rng(20240);
  int mismatches = 0;
  long fills = 0;
  for (int rep = 0; rep < kLobSequences; ++rep) {
    const int traders = 2 + static_cast<int>(rng() % 8);
    const int len = 1 + static_cast<int>(rng() % kLobMaxLen);
    const int levels = 2 + static_cast<int>(rng() % 6);
    std::vector<oracle::Op> ops;
    for (int i = 0; i < len; ++i) {
      oracle::Op op;
      op.cancel = rng() % 10 == 0;
      op.order.id = static_cast<OrderId>(i + 1);
      op.order.trader = static_cast<TraderId>(rng() % static_cast<unsigned>(traders));
      op.order.side = rng() % 2 ? Side::Bid : Side::Ask;
      op.order.price = Price(3000 + static_cast<Ticks>(rng() % static_cast<unsigned>(levels)) * 10);
      op.order.qty = 1;
      op.order.time = i;
      ops.push_back(op);
    }
    exchange::OrderBook book(traders);
    std::vector<oracle::Fill> got;
    for (const auto& op : ops) {
      if (op.cancel) {
        book.cancel(op.order.trader, op.order.side, op.order.time);
        continue;
      }
      for (const auto& t : book.submit(op.order).trades)
        got.push_back({t.time, t.price.ticks(), t.qty, t.buyer, t.seller});
    }
    oracle::NaiveMatcher naive;
    const auto want = naive.run(ops);
    if (got != want) ++mismatches;
    fills += static_cast<long>(want.size());
  }
  return {mismatches == 0, std::to_string(kLobSequences) + " sequences, " + std::to_string(fills) +
                               " fills, " + std::to_string(mismatches) + " mismatches"};
}

Outcome max_surplus_oracle() {
  std::mt19937_64 rng(777);
  int bad = 0;
  for (int rep = 0; rep < kSurplusSets; ++rep) {
    const int nb = 1 + static_cast<int>(rng() % kSurplusMaxSide);
    const int ns = 1 + static_cast<int>(rng() % kSurplusMaxSide);
    // Coarse prices so ties are common.
    std::uniform_int_distribution<Ticks> p(10, 60);
    std::vector<Price> b(static_cast<std::size_t>(nb)), s(static_cast<std::size_t>(ns));
    for (auto& x : b) x = Price(p(rng) * 100);
    for (auto& x : s) x = Price(p(rng) * 100);
    const auto eq = market::equilibrium(b, s);
    const Ticks got = eq ? eq->max_surplus : 0;
    if (got != oracle::max_surplus_exhaustive(b, s)) ++bad;
  }
  return {bad == 0, std::to_string(kSurplusSets) + " limit sets, " + std::to_string(bad) + " mismatches"};
}

Outcome gdx_reduction() {
  std::mt19937_64 rng(31);
  int one_shot_bad = 0;
  int dp_bad = 0;
  for (int rep = 0; rep < kGdxFixtures; ++rep) {
    // Belief from a random shout history, grid from a random book.
    const Role role = rep % 2 ? Role::Buyer : Role::Seller;
    traders::GdxTrader t(0, role, 1, traders::GdxParams{});
    for (int i = 0; i < 30; ++i) {
      traders::MarketEvent e;
      e.kind = rng() % 3 ? traders::EventKind::Shout : traders::EventKind::Trade;
      e.side = rng() % 2 ? Side::Bid : Side::Ask;
      e.price = Price(2500 + static_cast<Ticks>(rng() % 1000));
      e.quote = e.price;
      e.order = static_cast<OrderId>(i + 1);
      e.resting_order = static_cast<OrderId>(rng() % (i + 1));
      t.respond(e, {});
    }
    market::Assignment a;
    a.role = role;
    a.limit = Price(role == Role::Buyer ? 3300 + static_cast<Ticks>(rng() % 500) : 2300 + static_cast<Ticks>(rng() % 500));
    t.assign(a);
    traders::MarketView v;
    const Ticks mid = 2800 + static_cast<Ticks>(rng() % 400);
    v.best_bid = Price(mid - 1 - static_cast<Ticks>(rng() % 50));
    v.best_ask = Price(mid + 1 + static_cast<Ticks>(rng() % 50));
    const auto g = t.build_grid(v);
    const Ticks anchor = role == Role::Buyer ? v.best_bid->ticks() : v.best_ask->ticks();

    std::optional<std::size_t> want;
    double best = 0.0;
    for (std::size_t i = 0; i < g.prices.size(); ++i) {
      const double val = g.belief[i] * g.surplus[i];
      if (val > best || (want && val == best &&
                         std::abs(g.prices[i] - anchor) < std::abs(g.prices[*want] - anchor))) {
        if (val > 0.0) {
          best = val;
          want = i;
        }
      }
    }
    const auto got = traders::solve_gdx(g, 0.0, 1, t.params().horizon, anchor);
    if (got.has_value() != want.has_value() || (got && got->index != *want)) ++one_shot_bad;

    // 5-price grid, n = 3 quotes left, discount 0.9.
    traders::GridProblem small;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 5; ++i) {
      small.prices.push_back(3000 + i * 25);
      small.belief.push_back(u(rng));
      small.surplus.push_back(std::floor(u(rng) * 600.0) - 50.0);
    }
    std::size_t arg = 0;
    const double v3 = oracle::bellman(small, 0.9, 1, 3, &arg);
    const auto s3 = traders::solve_gdx(small, 0.9, 1, 3, std::nullopt);
    if (v3 > 0.0 ? (!s3 || s3->index != arg || s3->value != v3) : s3.has_value()) ++dp_bad;
  }
  return {one_shot_bad == 0 && dp_bad == 0,
          std::to_string(kGdxFixtures) + " fixtures; one-shot mismatches " + std::to_string(one_shot_bad) +
              ", Bellman mismatches " + std::to_string(dp_bad)};
}

Outcome utest_oracle() {
  std::mt19937_64 rng(88);
  int bad = 0;
  int cases = 0;
  for (int na = 1; na < kUMaxPooled; ++na)
    for (int nb = 1; na + nb <= kUMaxPooled; ++nb)
      for (int rep = 0; rep < kUSamplesPerPair; ++rep) {
        const unsigned range = 2 + static_cast<unsigned>(rng() % 20);
        std::vector<double> a(static_cast<std::size_t>(na)), b(static_cast<std::size_t>(nb));
        for (auto& x : a) x = static_cast<double>(rng() % range);
        for (auto& x : b) x = static_cast<double>(rng() % range);
        const auto got = sweep::u_test(a, b);
        const auto want = oracle::u_enumerate(a, b);
        ++cases;
        if (got.u != want.u || std::abs(got.p_two_sided - want.p_two_sided) > 1e-9) ++bad;
      }
  double worst = 0.0;
  for (int rep = 0; rep < kUSamplesPerPair; ++rep) {
    std::vector<double> a(8), b(8);
    const unsigned shift = static_cast<unsigned>(rng() % 400);
    for (auto& x : a) x = static_cast<double>(rng() % 1000);
    for (auto& x : b) x = static_cast<double>(rng() % 1000 + shift);
    worst = std::max(worst, std::abs(sweep::u_test(a, b).p_two_sided - sweep::u_test_normal(a, b).p_two_sided));
  }
  return {bad == 0 && worst <= kUNormalTol,
          std::to_string(cases) + " exact cases, " + std::to_string(bad) + " mismatches; worst 8/8 normal gap " +
              fmt("%.4f", worst)};
}

// ---------------------------------------------------------------- market runs

Outcome zic_convergence() {
  double sum = 0.0;
  long n = 0;
  for (int s = 0; s < kZicSessions; ++s) {
    session::SessionConfig c;
    c.env = market::make_market("M1", market::ScheduleCatalog::builtin());
    c.buyers = {{"ZIC", 16}};
    c.sellers = {{"ZIC", 16}};
    c.n_days = 20;
    c.seed = 9000 + static_cast<std::uint64_t>(s);
    const auto r = session::run_session(c);
    if (!r.ok) return {false, "session failed: " + r.error};
    for (const auto& t : r.trades) {
      sum += static_cast<double>(t.price);
      ++n;
    }
  }
  const double mean = n ? sum / static_cast<double>(n) / kTicksPerUnit : 0.0;
  const bool ok = n > 0 && std::abs(mean - kZicP0) <= kZicRelTol * kZicP0;
  return {ok, std::to_string(kZicSessions) + " sessions, " + std::to_string(n) + " trades, mean price " +
                  fmt("%.3f", mean) + " (allowed " + fmt("%.1f", kZicP0 * (1 - kZicRelTol)) + ".." +
                  fmt("%.1f", kZicP0 * (1 + kZicRelTol)) + ")"};
}

std::map<std::string, sweep::SweepTable> g_tables;

const sweep::SweepTable& scaled(const std::string& name) {
  auto it = g_tables.find(name);
  if (it != g_tables.end()) return it->second;
  auto spec = config::load_config(kSource / "configs" / (name + ".yaml")).sweep_spec();
  spec.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const auto t0 = std::chrono::steady_clock::now();
  auto table = sweep::run_sweep(spec);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "  (" << name << ": " << table.scheduled << " sessions in " << fmt("%.0f", secs) << " s)\n";
  const auto dir = work_dir() / name;
  sweep::write_outputs(table, dir);
  return g_tables.emplace(name, std::move(table)).first->second;
}

Outcome scaled_dominance() {
  const auto& t = scaled("scaled_dominance");
  if (t.failed) return {false, std::to_string(t.failed) + " cells failed"};
  bool all_ahead = true;
  int significant = 0;
  std::string detail;
  for (const auto& m : t.markets) {
    const double g = t.stat(m, "GDX")->ae_mean;
    const double a = t.stat(m, "AA")->ae_mean;
    const auto test = sweep::u_test(t.samples(m, "GDX"), t.samples(m, "AA"));
    all_ahead = all_ahead && g > a;
    if (test.p_greater < kDominanceP) ++significant;
    detail += m + " GDX " + fmt("%.2f", g) + " AA " + fmt("%.2f", a) + " p " + fmt("%.2g", test.p_greater) + "; ";
  }
  detail += std::to_string(significant) + "/" + std::to_string(t.markets.size()) + " significant";
  return {all_ahead && significant >= kDominanceMinSignificant, detail};
}

Outcome static_nuance() {
  const auto& t = scaled("scaled_static");
  if (t.failed) return {false, std::to_string(t.failed) + " cells failed"};
  bool ok = true;
  std::string detail;
  for (const auto& m : t.markets) {
    const double g = t.stat(m, "GDX")->ae_mean;
    const double a = t.stat(m, "AA")->ae_mean;
    const auto test = sweep::u_test(t.samples(m, "AA"), t.samples(m, "GDX"));
    ok = ok && std::abs(a - g) <= kStaticAeGap && test.p_greater >= kStaticP;
    detail += m + " AA " + fmt("%.2f", a) + " GDX " + fmt("%.2f", g) + " p(AA>GDX) " + fmt("%.2g", test.p_greater) + "; ";
  }
  return {ok, detail};
}

Outcome loss_avoidance() {
  long cells = 0, trades = 0, negative = 0;
  for (const char* name : {"scaled_dominance", "scaled_static"}) {
    (void)scaled(name);
    std::ifstream in(work_dir() / name / "sweep_cells.jsonl");
    for (std::string line; std::getline(in, line);) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      ++cells;
      trades += j.at("n_trades").get<long>();
      negative += j.at("negative_surplus_trades").get<long>();
    }
  }
  return {cells > 0 && negative == 0, std::to_string(cells) + " cells, " + std::to_string(trades) +
                                          " trades, " + std::to_string(negative) + " below a limit"};
}

// ---------------------------------------------------------------- determinism

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int arena(const std::string& args) {
  const std::string cmd = std::string(CDA_ARENA_BIN) + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

Outcome determinism() {
  const auto dir = work_dir() / "determinism";
  const std::string cfg = (kSource / "configs" / "session_m1.yaml").string();
  std::string detail;
  bool ok = true;

  auto run = [&](const std::string& args) {
    if (arena(args) != 0) {
      ok = false;
      detail += "command failed: " + args + "; ";
    }
  };
  run("session --config '" + cfg + "' --tape --out '" + (dir / "s1").string() + "'");
  run("session --config '" + cfg + "' --tape --out '" + (dir / "s2").string() + "'");
  run("session --manifest '" + (dir / "s1" / "run_manifest.json").string() + "' --tape --out '" +
      (dir / "s3").string() + "'");
  for (const char* f : {"session.jsonl", "tape.csv"}) {
    const auto a = slurp(dir / "s1" / f);
    const bool same = !a.empty() && a == slurp(dir / "s2" / f) && a == slurp(dir / "s3" / f);
    ok = ok && same;
    detail += std::string(f) + (same ? " identical" : " DIFFERS") + "; ";
  }

  const std::string sweep_cfg = (kSource / "configs" / "scaled_dominance.yaml").string();
  const std::string shrink =
      " --override sweep.per_side=3 --override sweep.trials=2 --override environment.n_days=3"
      " --override 'sweep.markets=[MS14, M8]'";
  run("sweep --config '" + sweep_cfg + "'" + shrink + " --workers 1 --out '" + (dir / "w1").string() + "'");
  run("sweep --config '" + sweep_cfg + "'" + shrink + " --workers 8 --out '" + (dir / "w8").string() + "'");
  run("sweep --manifest '" + (dir / "w1" / "run_manifest.json").string() + "' --workers 8 --out '" +
      (dir / "w8m").string() + "'");
  for (const char* f : {"sweep_summary.csv", "sweep_strategy_stats.csv", "sweep_cells.jsonl", "utests.csv"}) {
    const auto a = slurp(dir / "w1" / f);
    const bool same = !a.empty() && a == slurp(dir / "w8" / f) && a == slurp(dir / "w8m" / f);
    ok = ok && same;
    detail += std::string(f) + (same ? " identical" : " DIFFERS") + "; ";
  }
  return {ok, "workers 1 vs 8 and manifest replay: " + detail};
}

// ---------------------------------------------------------------- latency

Outcome latency_direction() {
  const auto cfg = config::load_config(kSource / "configs" / "latency.yaml");
  const auto fx = sweep::make_latency_fixture("M1", {"AA", "ASAD", "GDX", "ZIP"}, cfg.latency.per_side,
                                              cfg.seed, cfg.catalog, cfg.offsets, cfg.strategies);
  const double gdx = sweep::latency_probe("GDX", fx, kLatencyCalls).median_us;
  bool ok = true;
  std::string detail = "GDX " + fmt("%.2f", gdx) + " us";
  for (const char* tk : {"AA", "ZIP", "ASAD"}) {
    const double m = sweep::latency_probe(tk, fx, kLatencyCalls).median_us;
    ok = ok && gdx >= kLatencyRatio * m;
    detail += std::string("; ") + tk + " " + fmt("%.2f", m) + " us (x" + fmt("%.1f", gdx / m) + ")";
  }
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"ratio_accounting", ratio_accounting},
      {"lob_oracle", lob_oracle},
      {"max_surplus_oracle", max_surplus_oracle},
      {"gdx_reduction", gdx_reduction},
      {"utest_oracle", utest_oracle},
      {"zic_convergence", zic_convergence},
      {"scaled_dominance", scaled_dominance},
      {"scaled_static", static_nuance},
      {"determinism", determinism},
      {"latency_direction", latency_direction},
      {"loss_avoidance", loss_avoidance},
  };
  std::set<std::string> only(argv + 1, argv + argc);
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() && !only.count(name)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " [" << fmt("%.1f", secs) << " s] " << o.detail
              << std::endl;
    failures += o.pass ? 0 : 1;
  }
  return failures;
}
