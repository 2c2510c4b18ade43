#include "cda/traders/aa.hpp"
#include "cda/traders/factory.hpp"
#include "cda/traders/gdx.hpp"
#include "cda/traders/simple.hpp"
#include "cda/traders/zip.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <random>

using namespace cda;
using namespace cda::traders;

namespace {

market::Assignment assignment(TraderId id, Role role, double limit) {
  market::Assignment a;
  a.role = role;
  a.limit = Price::from_currency(limit);
  a.trader = id;
  return a;
}

MarketView book_view(std::optional<double> bid, std::optional<double> ask) {
  MarketView v;
  if (bid) {
    v.best_bid = Price::from_currency(*bid);
    v.bid_depth = 1;
  }
  if (ask) {
    v.best_ask = Price::from_currency(*ask);
    v.ask_depth = 1;
  }
  return v;
}

MarketEvent trade_at(double price, Side aggressor = Side::Bid) {
  MarketEvent e;
  e.kind = EventKind::Trade;
  e.price = Price::from_currency(price);
  e.quote = e.price;
  e.side = aggressor;
  return e;
}

MarketEvent shout_at(Side side, double price, OrderId order = 0) {
  MarketEvent e;
  e.kind = EventKind::Shout;
  e.side = side;
  e.price = Price::from_currency(price);
  e.order = order;
  return e;
}

}  // namespace

TEST_CASE("ZIC buyer draws stay within the limit and look uniform") {
  ZicTrader t(0, Role::Buyer, 77);
  t.assign(assignment(0, Role::Buyer, 30.0));
  std::vector<int> bins(30, 0);
  const MarketView v;
  for (int i = 0; i < 10000; ++i) {
    const auto q = t.quote(v);
    REQUIRE(q);
    REQUIRE(q->ticks() >= 1);
    REQUIRE(q->ticks() <= 3000);
    ++bins[static_cast<std::size_t>((q->ticks() - 1) / 100)];
  }
  double chi2 = 0.0;
  for (int b : bins) chi2 += (b - 10000.0 / 30) * (b - 10000.0 / 30) / (10000.0 / 30);
  CHECK(chi2 < 58.3);  // 29 dof, 0.1% upper tail
}

TEST_CASE("ZIC seller at the price ceiling always quotes the ceiling") {
  ZicTrader t(0, Role::Seller, 1);
  market::Assignment a;
  a.role = Role::Seller;
  a.limit = kPriceMax;
  t.assign(a);
  for (int i = 0; i < 100; ++i) CHECK(t.quote({}) == kPriceMax);
}

TEST_CASE("ZIC draw sequence is fixed by the seed") {
  ZicTrader a(0, Role::Buyer, 5), b(0, Role::Buyer, 5);
  a.assign(assignment(0, Role::Buyer, 30.0));
  b.assign(assignment(0, Role::Buyer, 30.0));
  for (int i = 0; i < 50; ++i) CHECK(a.quote({}) == b.quote({}));
}

TEST_CASE("shaver") {
  ShvrTrader b(0, Role::Buyer, 1);
  b.assign(assignment(0, Role::Buyer, 30.0));
  CHECK(b.quote(book_view(25.0, std::nullopt)) == Price(2501));
  CHECK(b.quote(book_view(std::nullopt, std::nullopt)) == Price(3000));

  ShvrTrader bound(0, Role::Buyer, 1);
  bound.assign(assignment(0, Role::Buyer, 25.0));
  CHECK_FALSE(bound.quote(book_view(25.0, std::nullopt)));

  ShvrTrader s(1, Role::Seller, 1);
  s.assign(assignment(1, Role::Seller, 20.0));
  CHECK(s.quote(book_view(std::nullopt, 31.0)) == Price(3099));
}

TEST_CASE("ZIP quote is limit times one plus margin") {
  ZipTrader s(0, Role::Seller, 1, ZipParams{});
  s.assign(assignment(0, Role::Seller, 20.0));
  s.set_margin(0.5);
  CHECK(s.quote({}) == Price(3000));

  ZipTrader b(1, Role::Buyer, 1, ZipParams{});
  b.assign(assignment(1, Role::Buyer, 30.0));
  b.set_margin(-0.2);
  CHECK(b.quote({}) == Price(2400));
}

TEST_CASE("ZIP margins are clamped to their sign") {
  ZipTrader s(0, Role::Seller, 1, ZipParams{});
  s.set_margin(-0.3);
  CHECK(s.state().margin == 0.0);
  ZipTrader b(1, Role::Buyer, 1, ZipParams{});
  b.set_margin(0.3);
  CHECK(b.state().margin == 0.0);
  b.set_margin(-5.0);
  CHECK(b.state().margin > -1.0);
}

TEST_CASE("ZIP seller raises its margin after a trade above its ask") {
  ZipTrader s(0, Role::Seller, 3, ZipParams{});
  s.assign(assignment(0, Role::Seller, 20.0));
  s.set_margin(0.2);
  const double before = s.state().margin;
  s.respond(trade_at(35.0), {});
  CHECK(s.state().margin > before);
}

TEST_CASE("ZIP buyer lowers its bid after a trade below it") {
  ZipTrader b(0, Role::Buyer, 3, ZipParams{});
  b.assign(assignment(0, Role::Buyer, 40.0));
  b.set_margin(-0.1);
  const double before = b.shout_price();
  b.respond(trade_at(30.0), {});
  CHECK(b.shout_price() < before);
}

TEST_CASE("ASAD tracks ZIP exactly without level shifts") {
  ZipTrader z(0, Role::Seller, 42, ZipParams{});
  AsadTrader a(0, Role::Seller, 42, ZipParams{}, AsadParams{});
  z.assign(assignment(0, Role::Seller, 20.0));
  a.assign(assignment(0, Role::Seller, 20.0));
  for (int i = 0; i < 200; ++i) {
    const double px = i % 2 == 0 ? 29.9 : 30.1;
    const auto e = i % 3 == 0 ? shout_at(Side::Ask, px) : trade_at(px);
    z.respond(e, {});
    a.respond(e, {});
    CHECK(z.state().margin == a.state().margin);
    CHECK(z.quote({}) == a.quote({}));
  }
  CHECK(a.detector().fired() == 0);
}

TEST_CASE("shock detector fires once on a sustained step") {
  ShockDetector d(AsadParams{});
  for (int i = 0; i < 25; ++i) CHECK_FALSE(d.observe(3000.0));
  int fired = 0;
  for (int i = 0; i < 10; ++i) fired += d.observe(5000.0) ? 1 : 0;
  CHECK(fired == 1);
  CHECK(d.fired() == 1);

  ShockDetector empty(AsadParams{});
  CHECK(empty.size() == 0);
  CHECK_FALSE(empty.observe(3000.0));
}

TEST_CASE("ASAD pulls its margin in when the detector fires") {
  AsadTrader a(0, Role::Seller, 2, ZipParams{}, AsadParams{});
  a.assign(assignment(0, Role::Seller, 20.0));
  for (int i = 0; i < 25; ++i) a.respond(trade_at(30.0), {});
  const double m = a.state().margin;
  a.respond(trade_at(50.0), {});
  CHECK(a.detector().fired() == 1);
  CHECK(a.state().margin < m + 1.0);
}

TEST_CASE("GD belief") {
  ShoutHistory empty;
  for (double p : {1.0, 30.0, 499.0}) CHECK(gd_belief(empty, Price::from_currency(p), Side::Bid) == 0.5);

  ShoutHistory h;
  h.push(Side::Ask, Price(3100), 1, false);
  h.push(Side::Bid, Price(2900), 2, true);
  h.push(Side::Bid, Price(3000), 3, false);
  const auto c = BeliefCurve::build(h, Side::Bid);
  CHECK(c.at(2900) == doctest::Approx(0.5));
  CHECK(c.at(3000) == doctest::Approx(0.5));
  CHECK(c.at(3050) == doctest::Approx(0.75));
  CHECK(c.at(3100) == doctest::Approx(1.0));
  CHECK(c.at(4000) == doctest::Approx(1.0));
  CHECK(c.at(kMinTicks) == doctest::Approx(0.0));

  const auto a = BeliefCurve::build(h, Side::Ask);
  // asks at 3000: accepted asks >= p (0) + bids >= p (1) over that + rejected asks <= p (0)
  CHECK(a.at(3000) == doctest::Approx(1.0));
  // at 3100: 0 + 0 over 0 + 1
  CHECK(a.at(3100) == doctest::Approx(0.0));
}

TEST_CASE("GD belief is monotone in price") {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<Ticks> px(2500, 3500);
  for (int rep = 0; rep < 50; ++rep) {
    ShoutHistory h;
    for (int i = 0; i < 30; ++i)
      h.push(rng() % 2 ? Side::Bid : Side::Ask, Price(px(rng)), static_cast<OrderId>(i), rng() % 3 == 0);
    const auto bid = BeliefCurve::build(h, Side::Bid);
    const auto ask = BeliefCurve::build(h, Side::Ask);
    double pb = -1.0, pa = 2.0;
    for (Ticks p = 2400; p <= 3600; p += 7) {
      CHECK(bid.at(p) >= pb - 1e-12);
      CHECK(ask.at(p) <= pa + 1e-12);
      pb = bid.at(p);
      pa = ask.at(p);
    }
    std::vector<double> s(1201);
    bid.sample(2400, s);
    for (std::size_t i = 0; i < s.size(); i += 13) CHECK(s[i] == bid.at(2400 + static_cast<Ticks>(i)));
  }
}

namespace {
GridProblem random_grid(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GridProblem g;
  for (std::size_t i = 0; i < n; ++i) {
    g.prices.push_back(2500 + static_cast<Ticks>(i) * 10);
    g.belief.push_back(u(rng));
    g.surplus.push_back(std::floor(u(rng) * 800.0) - 100.0);
  }
  return g;
}
}  // namespace

TEST_CASE("GDX with no discounting is the one-shot GD argmax") {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 100; ++rep) {
    const auto g = random_grid(rng, 40);
    std::size_t want = 0;
    double best = -INFINITY;
    for (std::size_t i = 0; i < g.prices.size(); ++i) {
      const double v = g.belief[i] * g.surplus[i];
      if (v > best) {
        best = v;
        want = i;
      }
    }
    const auto got = solve_gdx(g, 0.0, 1, 10, std::nullopt);
    const auto one = solve_gdx(g, 0.7, 1, 1, std::nullopt);
    if (best > 0.0) {
      REQUIRE(got);
      CHECK(got->index == want);
      REQUIRE(one);
      CHECK(one->index == want);
    } else {
      CHECK_FALSE(got);
    }
  }
}

TEST_CASE("GDX dynamic program equals plain Bellman recursion") {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 100; ++rep) {
    const auto g = random_grid(rng, 5);
    for (auto [m, k] : {std::pair{1, 3}, std::pair{2, 3}, std::pair{3, 3}}) {
      std::size_t arg = 0;
      const double v = oracle::bellman(g, 0.9, m, k, &arg);
      const auto got = solve_gdx(g, 0.9, m, k, std::nullopt);
      if (v > 0.0) {
        REQUIRE(got);
        CHECK(got->value == doctest::Approx(v).epsilon(1e-12));
        CHECK(got->index == arg);
      } else {
        CHECK_FALSE(got);
      }
    }
  }
}

TEST_CASE("GDX abstains when nothing has positive value") {
  GridProblem g{{3000, 3001}, {0.5, 0.5}, {0.0, -10.0}};
  CHECK_FALSE(solve_gdx(g, 0.9, 1, 5, std::nullopt));
}

TEST_CASE("GDX breaks exact ties toward the anchor") {
  GridProblem g{{2990, 3000, 3010}, {0.5, 0.5, 0.5}, {100.0, 100.0, 100.0}};
  CHECK(solve_gdx(g, 0.0, 1, 1, std::nullopt)->index == 0);
  CHECK(solve_gdx(g, 0.0, 1, 1, Ticks{3012})->index == 2);
}

TEST_CASE("GDX grid respects the touch") {
  GdxTrader t(0, Role::Buyer, 1, GdxParams{});
  t.assign(assignment(0, Role::Buyer, 35.0));
  const auto g = t.build_grid(book_view(29.0, 31.0));
  REQUIRE_FALSE(g.prices.empty());
  for (std::size_t i = 0; i < g.prices.size(); ++i) {
    CHECK(g.prices[i] <= 3500);
    if (g.prices[i] >= 3100) {
      CHECK(g.belief[i] == 1.0);
      CHECK(g.surplus[i] == 400.0);
    }
    if (g.prices[i] < 2900) CHECK(g.belief[i] == 0.0);
  }
  const auto q = t.quote(book_view(29.0, 31.0));
  REQUIRE(q);
  CHECK(q->ticks() <= 3500);
}

TEST_CASE("GDX quote budget shrinks by one per quote and resets each day") {
  GdxTrader t(0, Role::Seller, 1, GdxParams{});
  t.assign(assignment(0, Role::Seller, 20.0));
  CHECK(t.budget() == 10);
  for (int i = 0; i < 3; ++i) (void)t.quote(book_view(25.0, 35.0));
  CHECK(t.budget() == 7);
  for (int i = 0; i < 20; ++i) (void)t.quote(book_view(25.0, 35.0));
  CHECK(t.budget() == 1);
  t.on_day_start(2);
  CHECK(t.budget() == 10);
}

TEST_CASE("GDX history marks the resting order of a trade") {
  GdxTrader t(0, Role::Buyer, 1, GdxParams{});
  t.respond(shout_at(Side::Ask, 31.0, 7), {});
  auto e = trade_at(31.0);
  e.order = 8;
  e.resting_order = 7;
  e.quote = Price(3200);
  t.respond(e, {});
  const auto& h = t.history().entries();
  REQUIRE(h.size() == 2);
  CHECK(h[0].accepted);
  CHECK(h[1].accepted);
  CHECK(h[1].price == 3200);
}

TEST_CASE("AA target map boundaries") {
  AaTrader b(0, Role::Buyer, 1, AaParams{});
  b.assign(assignment(0, Role::Buyer, 40.0));
  CHECK(b.target(1.0, 3000.0) == doctest::Approx(4000.0));
  CHECK(b.target(-1.0, 3000.0) == doctest::Approx(0.0));
  CHECK(b.target(0.0, 3000.0) == doctest::Approx(3000.0));

  AaTrader s(1, Role::Seller, 1, AaParams{});
  s.assign(assignment(1, Role::Seller, 20.0));
  CHECK(s.target(1.0, 3000.0) == doctest::Approx(2000.0));
  CHECK(s.target(0.0, 3000.0) == doctest::Approx(3000.0));
  CHECK(s.target(-1.0, 3000.0) == doctest::Approx(static_cast<double>(kMaxTicks)));

  // Extramarginal: r >= 0 quotes the limit itself.
  AaTrader x(2, Role::Buyer, 1, AaParams{});
  x.assign(assignment(2, Role::Buyer, 25.0));
  CHECK(x.target(0.5, 3000.0) == doctest::Approx(2500.0));
}

TEST_CASE("AA aggressiveness inverts the target map") {
  AaTrader b(0, Role::Buyer, 1, AaParams{});
  b.assign(assignment(0, Role::Buyer, 40.0));
  for (double r : {-0.9, -0.4, 0.0, 0.3, 0.8}) CHECK(b.aggressiveness_for(b.target(r, 3000.0), 3000.0) == doctest::Approx(r).epsilon(1e-9));
  AaTrader s(1, Role::Seller, 1, AaParams{});
  s.assign(assignment(1, Role::Seller, 20.0));
  for (double r : {-0.9, -0.4, 0.0, 0.3, 0.8}) CHECK(s.aggressiveness_for(s.target(r, 3000.0), 3000.0) == doctest::Approx(r).epsilon(1e-9));
}

TEST_CASE("AA r stays in [-1, 1]") {
  AaTrader b(0, Role::Buyer, 9, AaParams{});
  CHECK(b.state().r >= -1.0);
  CHECK(b.state().r <= 0.0);
  b.set_aggressiveness(3.0);
  CHECK(b.state().r == 1.0);
  b.set_aggressiveness(-3.0);
  CHECK(b.state().r == -1.0);
  b.assign(assignment(0, Role::Buyer, 40.0));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> px(10.0, 60.0);
  for (int i = 0; i < 500; ++i) {
    b.respond(i % 2 ? trade_at(px(rng)) : shout_at(Side::Bid, px(rng)), {});
    CHECK(b.state().r >= -1.0);
    CHECK(b.state().r <= 1.0);
  }
}

TEST_CASE("AA equilibrium estimate") {
  AaTrader a(0, Role::Buyer, 1, AaParams{});
  CHECK_FALSE(a.estimate_equilibrium({}));
  a.respond(trade_at(30.0), {});
  CHECK(*a.estimate_equilibrium({}) == doctest::Approx(3000.0));

  AaTrader m(1, Role::Buyer, 1, AaParams{}, AaVariant::Micro);
  MarketView v = book_view(30.0, 32.0);
  v.microprice = 3050.0;
  CHECK(*m.estimate_equilibrium(v) == doctest::Approx(3050.0));
  m.respond(trade_at(29.0), {});
  m.respond(trade_at(31.0), {});
  const double fb = *m.estimate_equilibrium(book_view(30.0, std::nullopt));
  CHECK(fb > 2900.0);
  CHECK(fb < 3100.0);
  CHECK(fb == doctest::Approx((3100.0 + 0.9 * 2900.0) / 1.9));
}

TEST_CASE("AA seller backs off after a trade above its target") {
  AaParams p;
  AaTrader s(0, Role::Seller, 1, p);
  s.assign(assignment(0, Role::Seller, 20.0));
  s.set_aggressiveness(0.5);
  // p_hat becomes 30; the shout sits exactly at p_hat so r_shout = 0.
  s.respond(trade_at(30.0), {});
  const double delta = (1.0 - p.lambda_r) * 0.0 - p.lambda_a;
  CHECK(s.state().r == doctest::Approx(0.5 + p.beta1 * (delta - 0.5)));
}

TEST_CASE("AA buyer becomes more aggressive when bids above its target go unfilled") {
  AaParams p;
  AaTrader b(0, Role::Buyer, 1, p);
  b.assign(assignment(0, Role::Buyer, 40.0));
  b.respond(trade_at(30.0), {});
  b.set_aggressiveness(0.0);
  b.respond(shout_at(Side::Bid, 35.0), {});
  CHECK(b.state().r > 0.0);
}

TEST_CASE("AA quotes never cross the limit") {
  AaTrader b(0, Role::Buyer, 4, AaParams{});
  b.assign(assignment(0, Role::Buyer, 30.0));
  CHECK(b.quote(book_view(std::nullopt, std::nullopt))->ticks() <= 3000);
  b.respond(trade_at(35.0), {});
  CHECK(b.quote(book_view(28.0, 36.0))->ticks() <= 3000);
}

TEST_CASE("no strategy quotes through its limit") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> px(5.0, 60.0);
  for (const auto& tk : known_tickers()) {
    for (Role role : {Role::Buyer, Role::Seller}) {
      auto agent = make_agent(tk, 0, role, 17, StrategyParams{});
      CHECK(agent->ticker() == tk);
      for (int i = 0; i < 300; ++i) {
        if (i % 25 == 0) agent->assign(assignment(0, role, px(rng)));
        const double a = px(rng), b = px(rng);
        const auto v = book_view(std::min(a, b), std::max(a, b) + 0.01);
        if (i % 4 == 0) agent->respond(trade_at(px(rng)), v);
        if (i % 4 == 1) agent->respond(shout_at(role == Role::Buyer ? Side::Bid : Side::Ask, px(rng)), v);
        const auto q = agent->quote(v);
        if (!q) continue;
        const Ticks lim = agent->assignment()->limit.ticks();
        if (role == Role::Buyer)
          CHECK(q->ticks() <= lim);
        else
          CHECK(q->ticks() >= lim);
        CHECK(q->valid());
      }
    }
  }
  CHECK_THROWS_AS(make_agent("XYZ", 0, Role::Buyer, 1, StrategyParams{}), std::invalid_argument);
}

TEST_CASE("an idle trader abstains") {
  for (const auto& tk : known_tickers()) {
    auto agent = make_agent(tk, 0, Role::Buyer, 1, StrategyParams{});
    CHECK_FALSE(agent->quote(book_view(29.0, 31.0)));
  }
}

TEST_CASE("fills book surplus and retire the assignment") {
  ZicTrader b(0, Role::Buyer, 1);
  b.assign(assignment(0, Role::Buyer, 30.0));
  b.record_fill(Price(2500));
  CHECK(b.profit() == 500);
  CHECK_FALSE(b.active());
  CHECK_THROWS(b.record_fill(Price(2500)));
  CHECK_THROWS(b.assign(assignment(0, Role::Seller, 30.0)));
}

TEST_CASE("MAA follows a ramping microprice without lag, AA lags") {
  AaTrader classic(0, Role::Buyer, 1, AaParams{});
  AaTrader micro(1, Role::Buyer, 1, AaParams{}, AaVariant::Micro);
  classic.assign(assignment(0, Role::Buyer, 60.0));
  micro.assign(assignment(1, Role::Buyer, 60.0));
  for (int i = 0; i < 40; ++i) {
    const double truth = 3000.0 + 10.0 * i;
    MarketView v = book_view(truth / 100.0 - 0.01, truth / 100.0 + 0.01);
    v.microprice = truth;
    auto e = trade_at(truth / 100.0);
    classic.respond(e, v);
    micro.respond(e, v);
    const double ec = std::abs(*classic.state().p_hat - truth);
    const double em = std::abs(*micro.state().p_hat - truth);
    CHECK(em == 0.0);
    if (i > 0) CHECK(em < ec);
  }
}
