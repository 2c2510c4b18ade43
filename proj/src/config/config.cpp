#include "cda/config/config.hpp"

#include "cda/traders/factory.hpp"

#include <fstream>
#include <sstream>

namespace cda::config {

namespace {

template <class T>
void read(const YAML::Node& n, const char* key, T& out) {
  if (!n || !n[key]) return;
  try {
    out = n[key].as<T>();
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::vector<std::string> split_list(const YAML::Node& n) {
  std::vector<std::string> out;
  if (n.IsSequence()) {
    for (const auto& x : n) out.push_back(x.as<std::string>());
    return out;
  }
  std::stringstream ss(n.as<std::string>());
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

market::CurveSpec parse_curve(const YAML::Node& n, const std::string& where) {
  market::CurveSpec c;
  if (!n || !n.IsMap()) throw ConfigError(where + " must be a map");
  if (n["limits"]) {
    c.explicit_limits = n["limits"].as<std::vector<double>>();
    if (c.explicit_limits->empty()) throw ConfigError(where + ".limits is empty");
  } else if (n["first"] && n["last"]) {
    c.first = n["first"].as<double>();
    c.last = n["last"].as<double>();
  } else {
    throw ConfigError(where + " needs 'limits' or 'first' and 'last'");
  }
  return c;
}

void set_at(YAML::Node node, const std::vector<std::string>& parts, std::size_t i,
            const YAML::Node& value, const std::string& key) {
  if (i + 1 == parts.size()) {
    node[parts[i]] = value;
    return;
  }
  const YAML::Node child = node[parts[i]];
  if (!child.IsDefined() || child.IsNull())
    node[parts[i]] = YAML::Node(YAML::NodeType::Map);
  else if (!child.IsMap())
    throw ConfigError("override '" + key + "' walks through a non-map");
  set_at(node[parts[i]], parts, i + 1, value, key);
}

void set_path(YAML::Node root, const std::string& key, const YAML::Node& value) {
  std::vector<std::string> parts;
  std::stringstream ss(key);
  std::string p;
  while (std::getline(ss, p, '.')) {
    if (p.empty()) throw ConfigError("bad override key '" + key + "'");
    parts.push_back(p);
  }
  if (parts.empty()) throw ConfigError("bad override key '" + key + "'");
  set_at(root, parts, 0, value, key);
}

void read_strategies(const YAML::Node& n, traders::StrategyParams& s) {
  if (!n) return;
  if (const auto z = n["ZIP"]) {
    read(z, "beta_lo", s.zip.beta_lo);
    read(z, "beta_hi", s.zip.beta_hi);
    read(z, "momentum", s.zip.momentum);
    read(z, "r_up_hi", s.zip.r_up_hi);
    read(z, "r_down_lo", s.zip.r_down_lo);
    read(z, "a_abs", s.zip.a_abs);
    read(z, "margin_lo", s.zip.margin_lo);
    read(z, "margin_hi", s.zip.margin_hi);
  }
  if (const auto a = n["ASAD"]) {
    read(a, "short_window", s.asad.short_window);
    read(a, "long_window", s.asad.long_window);
    read(a, "k", s.asad.k);
    read(a, "reset_factor", s.asad.reset_factor);
  }
  if (const auto g = n["GDX"]) {
    read(g, "window", s.gdx.window);
    read(g, "gamma", s.gdx.gamma);
    read(g, "horizon", s.gdx.horizon);
    read(g, "grid_pad", s.gdx.grid_pad);
    read(g, "prior", s.gdx.prior);
  }
  if (const auto a = n["AA"]) {
    read(a, "beta1", s.aa.beta1);
    read(a, "beta2", s.aa.beta2);
    read(a, "theta_min", s.aa.theta_min);
    read(a, "theta_max", s.aa.theta_max);
    read(a, "theta0", s.aa.theta0);
    read(a, "vol_window", s.aa.vol_window);
    read(a, "ewma_decay", s.aa.ewma_decay);
    read(a, "lambda_r", s.aa.lambda_r);
    read(a, "lambda_a", s.aa.lambda_a);
    read(a, "eta", s.aa.eta);
    read(a, "r0_spread", s.aa.r0_spread);
    read(a, "gamma_theta", s.aa.gamma_theta);
  }
  if (s.zip.beta_lo > s.zip.beta_hi || s.zip.margin_lo > s.zip.margin_hi)
    throw ConfigError("ZIP ranges must have lo <= hi");
  if (s.gdx.window < 1 || s.gdx.horizon < 1) throw ConfigError("GDX window and horizon must be >= 1");
  if (s.gdx.gamma < 0.0 || s.gdx.gamma > 1.0) throw ConfigError("GDX gamma must lie in [0, 1]");
  if (s.asad.short_window < 1 || s.asad.long_window < 2) throw ConfigError("ASAD windows too small");
  if (s.aa.vol_window < 1 || s.aa.eta <= 0.0) throw ConfigError("AA vol_window and eta must be positive");
}

ArenaConfig build(YAML::Node root, const std::vector<std::string>& overrides,
                  const std::filesystem::path& source) {
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  if (!root.IsMap()) throw ConfigError("config root must be a map");
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override must be key=value: " + o);
    YAML::Node v;
    try {
      v = YAML::Load(o.substr(eq + 1));
    } catch (const YAML::Exception& e) {
      throw ConfigError("bad override value in '" + o + "': " + e.what());
    }
    set_path(root, o.substr(0, eq), v);
  }

  ArenaConfig c;
  c.resolved = YAML::Clone(root);
  c.overrides = overrides;
  c.source = source;
  try {
    read(root, "seed", c.seed);
    const auto env = root["environment"];
    read(env, "market", c.market);
    read(env, "n_days", c.n_days);
    read(env, "day_length", c.day_length);
    read(env, "polls_per_second", c.polls_per_second);
    if (env && env["replenishment"]) {
      const auto mode = env["replenishment"].as<std::string>();
      if (mode == "periodic")
        c.replenishment.mode = market::Replenishment::Periodic;
      else if (mode == "continuous")
        c.replenishment.mode = market::Replenishment::Continuous;
      else
        throw ConfigError("replenishment must be 'periodic' or 'continuous'");
    }
    read(env, "lambda", c.replenishment.lambda);
    if (!(c.replenishment.lambda > 0.0)) throw ConfigError("lambda must be positive");
    if (env && env["offsets"]) {
      const auto o = env["offsets"];
      read(o, "c_sin", c.offsets.c_sin);
      read(o, "c_square", c.offsets.c_square);
      read(o, "c_growing", c.offsets.c_growing);
      read(o, "omega_growing", c.offsets.omega_growing);
    }
    if (env && env["schedules_file"]) {
      std::filesystem::path p = env["schedules_file"].as<std::string>();
      if (p.is_relative() && !source.empty()) {
        // Pin it so a manifest replayed from elsewhere finds the same file.
        p = std::filesystem::absolute(source.parent_path() / p).lexically_normal();
        c.resolved["environment"]["schedules_file"] = p.string();
      }
      c.catalog = load_schedules(p);
    }
    if (env && env["schedules"]) bind_schedules(c.catalog, env["schedules"]);

    const auto roster = root["roster"];
    if (roster && roster["buyers"]) c.buyers = parse_roster(roster["buyers"]);
    if (roster && roster["sellers"]) c.sellers = parse_roster(roster["sellers"]);
    if (c.buyers.empty()) c.buyers = {{"ZIC", 16}};
    if (c.sellers.empty()) c.sellers = c.buyers;
    read(root["session"], "record_tape", c.record_tape);

    read_strategies(root["strategies"], c.strategies);

    auto& s = c.sweep;
    s.strategies = {"AA", "ASAD", "GDX", "ZIC"};
    s.markets = {c.market};
    const auto sw = root["sweep"];
    if (sw && sw["strategies"]) s.strategies = split_list(sw["strategies"]);
    if (sw && sw["markets"]) s.markets = split_list(sw["markets"]);
    read(sw, "per_side", s.per_side);
    read(sw, "trials", s.trials);
    read(sw, "workers", s.workers);
    s.base_seed = c.seed;
    s.catalog = c.catalog;
    s.offsets = c.offsets;
    s.replenishment = c.replenishment;
    s.n_days = c.n_days;
    s.day_length = c.day_length;
    s.polls_per_second = c.polls_per_second;
    s.strategy_params = c.strategies;

    const auto lat = root["latency"];
    if (lat && lat["tickers"]) c.latency.tickers = split_list(lat["tickers"]);
    if (lat && lat["markets"]) c.latency.markets = split_list(lat["markets"]);
    read(lat, "per_side", c.latency.per_side);
    read(lat, "calls", c.latency.calls);
    for (const auto& t : c.latency.tickers)
      if (!traders::is_known_ticker(t)) throw ConfigError("unknown strategy ticker: " + t);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

}  // namespace

std::vector<session::RosterEntry> parse_roster(const YAML::Node& node) {
  std::vector<session::RosterEntry> out;
  auto parse_item = [&](const std::string& item) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("roster entry must be TICKER:COUNT: " + item);
    session::RosterEntry e;
    e.ticker = item.substr(0, colon);
    try {
      e.count = std::stoi(item.substr(colon + 1));
    } catch (const std::exception&) {
      throw ConfigError("bad roster count: " + item);
    }
    out.push_back(e);
  };
  if (node.IsSequence()) {
    for (const auto& x : node) {
      if (x.IsMap())
        out.push_back({x["ticker"].as<std::string>(), x["count"].as<int>()});
      else
        parse_item(x.as<std::string>());
    }
  } else {
    for (const auto& item : split_list(node)) parse_item(item);
  }
  for (const auto& e : out) {
    if (!traders::is_known_ticker(e.ticker)) throw ConfigError("unknown strategy ticker: " + e.ticker);
    if (e.count < 0) throw ConfigError("negative roster count for " + e.ticker);
  }
  return out;
}

void bind_schedules(market::ScheduleCatalog& catalog, const YAML::Node& schedules) {
  if (!schedules.IsMap()) throw ConfigError("schedules must be a map of label -> curves");
  for (const auto& kv : schedules) {
    const auto label = kv.first.as<std::string>();
    market::ScheduleSpec s;
    s.label = label;
    s.demand = parse_curve(kv.second["demand"], label + ".demand");
    s.supply = parse_curve(kv.second["supply"], label + ".supply");
    catalog.bind(std::move(s));
  }
}

market::ScheduleCatalog load_schedules(const std::filesystem::path& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path.string());
  } catch (const YAML::Exception& e) {
    throw ConfigError("cannot read schedules file " + path.string() + ": " + e.what());
  }
  market::ScheduleCatalog c;
  if (!root["schedules"]) throw ConfigError(path.string() + " has no 'schedules' map");
  bind_schedules(c, root["schedules"]);
  return c;
}

ArenaConfig load_config(const std::optional<std::filesystem::path>& path,
                        const std::vector<std::string>& overrides) {
  if (!path) return build(YAML::Node(YAML::NodeType::Map), overrides, {});
  YAML::Node root;
  try {
    root = YAML::LoadFile(path->string());
  } catch (const YAML::Exception& e) {
    throw ConfigError("cannot read config " + path->string() + ": " + e.what());
  }
  return build(root, overrides, *path);
}

ArenaConfig load_config_text(const std::string& yaml, const std::vector<std::string>& overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return build(root, overrides, {});
}

session::SessionConfig ArenaConfig::session_config() const {
  session::SessionConfig s;
  try {
    s.env = market::make_market(market, catalog, offsets, replenishment);
  } catch (const std::out_of_range& e) {
    throw ConfigError(e.what());
  }
  s.buyers = buyers;
  s.sellers = sellers;
  s.n_days = n_days;
  s.day_length = day_length;
  s.polls_per_second = polls_per_second;
  s.seed = seed;
  s.strategies = strategies;
  s.record_tape = record_tape;
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::out_of_range& e) {
    throw ConfigError(e.what());
  }
  return s;
}

sweep::SweepSpec ArenaConfig::sweep_spec() const {
  try {
    sweep.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::out_of_range& e) {
    throw ConfigError(e.what());
  }
  return sweep;
}

}  // namespace cda::config
