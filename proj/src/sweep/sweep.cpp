#include "cda/sweep/sweep.hpp"

#include "cda/seed.hpp"
#include "cda/traders/factory.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

namespace cda::sweep {

void SweepSpec::validate() const {
  if (strategies.empty()) throw std::invalid_argument("sweep needs at least one strategy");
  std::set<std::string> seen;
  for (const auto& s : strategies) {
    if (!traders::is_known_ticker(s)) throw std::invalid_argument("unknown strategy ticker: " + s);
    if (!seen.insert(s).second) throw std::invalid_argument("duplicate strategy: " + s);
  }
  if (per_side < 1) throw std::invalid_argument("per_side must be at least 1");
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (markets.empty()) throw std::invalid_argument("sweep needs at least one market");
  if (workers < 1) throw std::invalid_argument("workers must be at least 1");
  if (n_days < 1) throw std::invalid_argument("n_days must be at least 1");
  for (const auto& m : markets) {
    const auto env = market::make_market(m, catalog, offsets, replenishment);
    for (const auto& seg : env.timetable.segments()) (void)catalog.spec(seg.label);
  }
}

std::uint64_t SweepSpec::ratio_total() const {
  return ratio_count(static_cast<int>(strategies.size()), per_side);
}
std::uint64_t SweepSpec::session_total() const {
  return ratio_total() * static_cast<std::uint64_t>(trials) * markets.size();
}
std::uint64_t SweepSpec::trading_day_total() const {
  return session_total() * static_cast<std::uint64_t>(n_days);
}

std::string group_thousands(std::uint64_t v) {
  std::string s = std::to_string(v);
  for (int i = static_cast<int>(s.size()) - 3; i > 0; i -= 3) s.insert(static_cast<std::size_t>(i), ",");
  return s;
}

std::string dry_run_summary(const SweepSpec& spec) {
  return group_thousands(spec.ratio_total()) + " ratios, " + group_thousands(spec.session_total()) +
         " sessions, " + group_thousands(spec.trading_day_total()) + " trading days";
}

std::uint64_t cell_seed(std::uint64_t base, const CellKey& k) noexcept {
  return derive_seed(base, {static_cast<std::uint64_t>(k.market), static_cast<std::uint64_t>(k.ratio),
                            static_cast<std::uint64_t>(k.trial)});
}

session::SessionConfig cell_config(const SweepSpec& spec, const CellKey& key,
                                   const std::vector<Composition>& ratios) {
  session::SessionConfig c;
  c.env = market::make_market(spec.markets[static_cast<std::size_t>(key.market)], spec.catalog,
                              spec.offsets, spec.replenishment);
  const auto& ratio = ratios[static_cast<std::size_t>(key.ratio)];
  for (std::size_t i = 0; i < spec.strategies.size(); ++i) {
    if (ratio[i] == 0) continue;
    c.buyers.push_back({spec.strategies[i], ratio[i]});
    c.sellers.push_back({spec.strategies[i], ratio[i]});
  }
  c.n_days = spec.n_days;
  c.day_length = spec.day_length;
  c.polls_per_second = spec.polls_per_second;
  c.seed = cell_seed(spec.base_seed, key);
  c.strategies = spec.strategy_params;
  return c;
}

nlohmann::ordered_json to_json(const CellRow& r) {
  nlohmann::ordered_json j;
  j["market_index"] = r.key.market;
  j["ratio_index"] = r.key.ratio;
  j["trial"] = r.key.trial;
  j["market"] = r.market;
  j["ratio"] = r.ratio;
  j["seed"] = r.seed;
  j["ok"] = r.ok;
  if (!r.ok) j["error"] = r.error;
  j["homogeneous"] = r.homogeneous;
  j["ae"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.ae) j["ae"][k] = v;
  j["ae_global"] = r.ae_global;
  j["alpha"] = r.alpha ? nlohmann::ordered_json(*r.alpha) : nlohmann::ordered_json(nullptr);
  j["pd"] = r.pd;
  j["n_trades"] = r.n_trades;
  j["negative_surplus_trades"] = r.negative_surplus_trades;
  return j;
}

CellRow cell_from_json(const nlohmann::json& j) {
  CellRow r;
  r.key = {j.at("market_index").get<int>(), j.at("ratio_index").get<int>(), j.at("trial").get<int>()};
  r.market = j.at("market").get<std::string>();
  r.ratio = j.at("ratio").get<Composition>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.ok = j.at("ok").get<bool>();
  if (j.contains("error")) r.error = j.at("error").get<std::string>();
  r.homogeneous = j.at("homogeneous").get<bool>();
  for (const auto& [k, v] : j.at("ae").items()) r.ae[k] = v.get<double>();
  r.ae_global = j.at("ae_global").get<double>();
  if (!j.at("alpha").is_null()) r.alpha = j.at("alpha").get<double>();
  r.pd = j.at("pd").get<double>();
  r.n_trades = j.at("n_trades").get<int>();
  r.negative_surplus_trades = j.at("negative_surplus_trades").get<int>();
  return r;
}

namespace {

CellRow run_cell(const SweepSpec& spec, const CellKey& key, const std::vector<Composition>& ratios) {
  CellRow row;
  row.key = key;
  row.market = spec.markets[static_cast<std::size_t>(key.market)];
  row.ratio = ratios[static_cast<std::size_t>(key.ratio)];
  row.seed = cell_seed(spec.base_seed, key);
  int holders = 0;
  for (int k : row.ratio) holders += k > 0 ? 1 : 0;
  row.homogeneous = holders == 1;
  try {
    const auto res = session::run_session(cell_config(spec, key, ratios));
    row.ok = res.ok;
    row.error = res.error;
    if (res.ok) {
      row.ae = res.metrics.ae_by_strategy;
      row.ae_global = res.metrics.ae_global;
      row.alpha = res.metrics.alpha;
      row.pd = res.metrics.pd;
      row.n_trades = static_cast<int>(res.trades.size());
      row.negative_surplus_trades = res.negative_surplus_trades();
    }
  } catch (const std::exception& ex) {
    row.ok = false;
    row.error = ex.what();
  }
  return row;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

}  // namespace

const StrategyStat* SweepTable::stat(const std::string& market, const std::string& ticker) const {
  for (const auto& s : stats)
    if (s.market == market && s.ticker == ticker) return &s;
  return nullptr;
}

const UTestRow* SweepTable::utest(const std::string& market, const std::string& a,
                                  const std::string& b) const {
  for (const auto& u : utests)
    if (u.market == market && u.a == a && u.b == b) return &u;
  return nullptr;
}

std::vector<double> SweepTable::samples(const std::string& market, const std::string& ticker) const {
  std::vector<double> out;
  for (const auto& c : cells) {
    if (!c.ok || c.market != market) continue;
    if (auto it = c.ae.find(ticker); it != c.ae.end()) out.push_back(it->second);
  }
  return out;
}

void aggregate(SweepTable& t) {
  t.stats.clear();
  t.utests.clear();
  t.failed = 0;
  for (const auto& c : t.cells) t.failed += c.ok ? 0 : 1;

  for (const auto& m : t.markets) {
    for (const auto& s : t.strategies) {
      StrategyStat st;
      st.market = m;
      st.ticker = s;
      double sum = 0.0, pd = 0.0, alpha = 0.0;
      int n_alpha = 0;
      std::vector<double> ae;
      for (const auto& c : t.cells) {
        if (!c.ok || c.market != m) continue;
        auto it = c.ae.find(s);
        if (it == c.ae.end()) continue;
        ae.push_back(it->second);
        sum += it->second;
        pd += c.pd;
        if (c.alpha) {
          alpha += *c.alpha;
          ++n_alpha;
        }
      }
      st.n_sessions = static_cast<int>(ae.size());
      if (!ae.empty()) {
        const double n = static_cast<double>(ae.size());
        st.ae_mean = sum / n;
        st.pd_mean = pd / n;
        double ss = 0.0;
        for (double v : ae) ss += (v - st.ae_mean) * (v - st.ae_mean);
        st.ae_sd = ae.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
      }
      if (n_alpha > 0) st.alpha_mean = alpha / n_alpha;
      t.stats.push_back(st);
    }
    for (std::size_t i = 0; i < t.strategies.size(); ++i)
      for (std::size_t j = i + 1; j < t.strategies.size(); ++j) {
        const auto a = t.samples(m, t.strategies[i]);
        const auto b = t.samples(m, t.strategies[j]);
        if (a.empty() || b.empty()) continue;
        UTestRow u;
        u.market = m;
        u.a = t.strategies[i];
        u.b = t.strategies[j];
        u.n_a = static_cast<int>(a.size());
        u.n_b = static_cast<int>(b.size());
        u.test = u_test(a, b);
        t.utests.push_back(u);
      }
  }
}

SweepTable run_sweep(const SweepSpec& spec, const SweepOptions& opt) {
  spec.validate();
  const auto ratios = enumerate_ratios(static_cast<int>(spec.strategies.size()), spec.per_side);

  SweepTable table;
  table.strategies = spec.strategies;
  table.markets = spec.markets;
  table.scheduled = spec.session_total();
  table.trading_days = spec.trading_day_total();

  std::vector<CellKey> keys;
  for (int m = 0; m < static_cast<int>(spec.markets.size()); ++m)
    for (int r = 0; r < static_cast<int>(ratios.size()); ++r)
      for (int k = 0; k < spec.trials; ++k) keys.push_back({m, r, k});
  std::vector<std::optional<CellRow>> slots(keys.size());
  auto slot_of = [&](const CellKey& k) {
    return (static_cast<std::size_t>(k.market) * ratios.size() + static_cast<std::size_t>(k.ratio)) *
               static_cast<std::size_t>(spec.trials) +
           static_cast<std::size_t>(k.trial);
  };

  if (opt.resume && !opt.journal.empty() && std::filesystem::exists(opt.journal)) {
    std::ifstream in(opt.journal);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception&) {
        continue;  // a torn final line from an interrupted run
      }
      CellRow row = cell_from_json(j);
      const auto& k = row.key;
      if (k.market < 0 || k.market >= static_cast<int>(spec.markets.size()) || k.ratio < 0 ||
          k.ratio >= static_cast<int>(ratios.size()) || k.trial < 0 || k.trial >= spec.trials)
        continue;
      if (row.seed != cell_seed(spec.base_seed, k) ||
          row.market != spec.markets[static_cast<std::size_t>(k.market)])
        throw std::runtime_error("journal does not belong to this sweep: " + opt.journal.string());
      if (!row.ok) continue;  // failed cells are retried
      auto& slot = slots[slot_of(k)];
      if (!slot) ++table.resumed;
      slot = std::move(row);
    }
  }

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < keys.size(); ++i)
    if (!slots[i]) pending.push_back(i);

  std::ofstream journal;
  if (!opt.journal.empty()) {
    if (opt.journal.has_parent_path()) std::filesystem::create_directories(opt.journal.parent_path());
    journal.open(opt.journal, opt.resume ? std::ios::app : std::ios::trunc);
    if (!journal) throw std::runtime_error("cannot open journal " + opt.journal.string());
  }

  std::atomic<std::size_t> cursor{0};
  std::mutex mu;
  std::uint64_t done = table.resumed;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= pending.size()) return;
      const std::size_t s = pending[i];
      CellRow row = run_cell(spec, keys[s], ratios);
      std::lock_guard<std::mutex> lock(mu);
      if (journal.is_open()) journal << to_json(row).dump() << '\n' << std::flush;
      slots[s] = std::move(row);
      ++done;
      if (opt.progress) opt.progress(done, table.scheduled);
    }
  };
  const int n_workers = std::max(1, std::min<int>(spec.workers, static_cast<int>(pending.size())));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  table.cells.reserve(slots.size());
  for (auto& s : slots) table.cells.push_back(std::move(*s));
  aggregate(table);
  return table;
}

void write_summary_csv(const SweepTable& t, std::ostream& out) {
  out << "market";
  for (const auto& s : t.strategies) out << ',' << s;
  out << ",winner\n";
  auto row = [&](const std::string& label, const std::vector<std::optional<double>>& v) {
    out << label;
    double best = -1e300;
    for (const auto& x : v)
      if (x) best = std::max(best, *x);
    std::string winner;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out << ',' << num(v[i]);
      if (v[i] && std::abs(*v[i] - best) <= 1e-9) winner += (winner.empty() ? "" : "|") + t.strategies[i];
    }
    out << ',' << winner << '\n';
  };
  std::vector<double> sum(t.strategies.size(), 0.0);
  std::vector<int> cnt(t.strategies.size(), 0);
  for (const auto& m : t.markets) {
    std::vector<std::optional<double>> v;
    for (std::size_t i = 0; i < t.strategies.size(); ++i) {
      const auto* st = t.stat(m, t.strategies[i]);
      if (st && st->n_sessions > 0) {
        v.emplace_back(st->ae_mean);
        sum[i] += st->ae_mean;
        ++cnt[i];
      } else {
        v.emplace_back();
      }
    }
    row(m, v);
  }
  std::vector<std::optional<double>> avg;
  for (std::size_t i = 0; i < t.strategies.size(); ++i)
    avg.push_back(cnt[i] ? std::optional<double>(sum[i] / cnt[i]) : std::nullopt);
  row("Average", avg);
}

void write_stats_csv(const SweepTable& t, std::ostream& out) {
  out << "market,ticker,ae_mean,ae_sd,alpha_mean,pd_mean,n_sessions\n";
  for (const auto& s : t.stats)
    out << s.market << ',' << s.ticker << ',' << num(s.ae_mean) << ',' << num(s.ae_sd) << ','
        << num(s.alpha_mean) << ',' << num(s.pd_mean) << ',' << s.n_sessions << '\n';
}

void write_cells_jsonl(const SweepTable& t, std::ostream& out) {
  for (const auto& c : t.cells) out << to_json(c).dump() << '\n';
}

void write_utests_csv(const SweepTable& t, std::ostream& out) {
  out << "market,strategy_a,strategy_b,n_a,n_b,u,p_two_sided,p_a_greater,p_b_greater,method,degenerate\n";
  char buf[64];
  auto p = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return std::string(buf);
  };
  for (const auto& u : t.utests)
    out << u.market << ',' << u.a << ',' << u.b << ',' << u.n_a << ',' << u.n_b << ','
        << num(u.test.u) << ',' << p(u.test.p_two_sided) << ',' << p(u.test.p_greater) << ','
        << p(u.test.p_less) << ',' << (u.test.method == UMethod::Exact ? "exact" : "normal") << ','
        << (u.test.degenerate ? 1 : 0) << '\n';
}

void write_outputs(const SweepTable& t, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("sweep_summary.csv");
    write_summary_csv(t, f);
  }
  {
    auto f = open("sweep_strategy_stats.csv");
    write_stats_csv(t, f);
  }
  {
    auto f = open("sweep_cells.jsonl");
    write_cells_jsonl(t, f);
  }
  {
    auto f = open("utests.csv");
    write_utests_csv(t, f);
  }
}

}  // namespace cda::sweep
