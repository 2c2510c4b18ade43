#include "cda/session/record.hpp"

namespace cda::session {

namespace {

double cur(double ticks) { return ticks / kTicksPerUnit; }

nlohmann::ordered_json opt(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

nlohmann::ordered_json to_json(const MetricsBundle& m) {
  nlohmann::ordered_json j;
  j["alpha"] = opt(m.alpha);
  j["alpha_rms"] = opt(m.alpha_rms);
  j["ae_global"] = m.ae_global;
  j["ae_by_strategy"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.ae_by_strategy) j["ae_by_strategy"][k] = v;
  j["pd"] = m.pd;
  auto& days = j["per_day"] = nlohmann::ordered_json::array();
  for (std::size_t d = 0; d < m.ae_by_day.size(); ++d)
    days.push_back({{"day", d + 1},
                    {"alpha", opt(m.alpha_by_day[d])},
                    {"ae", m.ae_by_day[d]},
                    {"pd", m.pd_by_day[d]}});
  return j;
}

nlohmann::ordered_json to_json(const SessionResult& r, bool include_tape) {
  nlohmann::ordered_json j;
  j["seed"] = r.seed;
  j["market"] = r.market;
  j["ok"] = r.ok;
  if (!r.ok) j["error"] = r.error;
  j["n_days"] = r.n_days;
  j["n_trades"] = r.trades.size();
  j["negative_surplus_trades"] = r.negative_surplus_trades();
  auto& traders = j["traders"] = nlohmann::ordered_json::array();
  for (const auto& t : r.traders)
    traders.push_back({{"id", t.id},
                       {"ticker", t.ticker},
                       {"role", std::string(to_string(t.role))},
                       {"profit", cur(static_cast<double>(t.profit))},
                       {"expected", cur(t.expected)},
                       {"trades", t.trades},
                       {"assignments", t.assignments}});
  auto& days = j["days"] = nlohmann::ordered_json::array();
  for (const auto& d : r.days)
    days.push_back({{"day", d.day},
                    {"schedule", d.schedule},
                    {"p0", d.p0 ? nlohmann::ordered_json(cur(*d.p0)) : nlohmann::ordered_json(nullptr)},
                    {"q0", d.q0},
                    {"max_surplus", cur(static_cast<double>(d.max_surplus))}});
  j["metrics"] = to_json(r.metrics);
  if (include_tape) {
    auto& tape = j["tape"] = nlohmann::ordered_json::array();
    for (const auto& e : r.tape) {
      if (e.kind == exchange::TapeKind::Trade)
        tape.push_back({{"time", e.time}, {"kind", "TRADE"}, {"price", e.price.currency()},
                        {"qty", e.qty}, {"buyer_id", e.buyer}, {"seller_id", e.seller}});
      else
        tape.push_back({{"time", e.time}, {"kind", "CANCEL"}, {"qty", e.qty}, {"trader_id", e.trader}});
    }
  }
  return j;
}

void write_jsonl(std::ostream& out, const SessionResult& r, bool include_tape) {
  out << to_json(r, include_tape).dump() << '\n';
}

}  // namespace cda::session
