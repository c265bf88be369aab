#include <cmath>
#include <sstream>

#include "doctest.h"
#include "nsgame/error.hpp"
#include "nsgame/reptheory.hpp"
#include "nsgame/sim.hpp"

using namespace nsgame;

TEST_CASE("trial seeds") {
  CHECK(trial_seed(1, 0) == trial_seed(1, 0));
  CHECK(trial_seed(1, 0) != trial_seed(1, 1));
  CHECK(trial_seed(1, 0) != trial_seed(2, 0));
}

TEST_CASE("CHSH with a deterministic optimum") {
  Game g = builtin("chsh");
  auto cfg = SimConfig::product_of(classical_value(g).witness, 1, 42, 100000);
  auto r = simulate(g, cfg);
  std::size_t total = 0;
  for (auto c : r.histogram) total += c;
  CHECK(total == cfg.trials);
  const double mean = r.mean().get_d();
  CHECK(std::fabs(mean - 0.75) <= 3 * std::sqrt(0.25 / 1e5));
  CHECK(r.round_wins.size() == 1);
  CHECK(r.source == "product-of-witness");
}

TEST_CASE("determinism") {
  Game g = builtin("guess_other");
  auto cfg = SimConfig::product_of(ns_value(g).witness, 2, 7, 20000);
  auto a = simulate(g, cfg);
  auto b = simulate(g, cfg);
  auto s = simulate_serial(g, cfg);
  CHECK(a == b);
  CHECK(a == s);
  cfg.seed = 8;
  CHECK_FALSE(simulate(g, cfg) == a);
}

TEST_CASE("all-lose game") {
  Game g = make_game("lose", 2, {2, 2}, {2, 2}, {{{0, 0}, Rational(1)}}, {});
  auto cfg = SimConfig::product_of(Strategy::uniform(g.shape()), 3, 1, 1000);
  auto r = simulate(g, cfg);
  CHECK(r.histogram[0] == 1000);
  CHECK(r.mean() == 0);
  CHECK(r.tail(Rational(0)) == 0);
}

TEST_CASE("shape mismatch") {
  Game g = builtin("chsh");
  SimConfig cfg;
  cfg.n = 2;
  cfg.strategy = Strategy::uniform(g.shape());
  try {
    simulate(g, cfg);
    FAIL("expected shape_mismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::shape_mismatch);
  }
}

TEST_CASE("histogram output and distance") {
  Game g = builtin("guess_other");
  Strategy base = ns_value(g).witness;
  auto r = simulate(g, SimConfig::product_of(base, 2, 3, 5000));
  std::ostringstream out;
  write_histogram(out, r);
  CHECK(out.str().find("wbar 1/2 ") != std::string::npos);
  auto exact = exact_win_fraction_distribution(g, 2, product_strategy(base, 2));
  Rational d = histogram_distance(r, exact);
  CHECK(d.get_d() <= 5.0 / std::sqrt(5000.0));
}

TEST_CASE("empirical tail report") {
  Game g = builtin("guess_other");
  auto k = constants(g);
  auto r = simulate(g, SimConfig::product_of(ns_value(g).witness, 4, 11, 20000));
  auto rows = empirical_tail_report(r, g, k, {Rational(1, 10), Rational(1, 4), Rational(3, 4)});
  REQUIRE(rows.size() == 3);
  for (const auto& t : rows) {
    CHECK(ok(t.verdict));
    CHECK(ok(t.hoeffding_verdict));
    CHECK(t.ct_bound >= 8.0 * std::exp(-std::exp(k.log_mu) * 4));
    CHECK(t.frequency >= 0);
    CHECK(t.frequency <= 1);
  }
  CHECK(rows[2].frequency == 0);  // W-bar > 5/4 never happens
}

TEST_CASE("sampling without replacement") {
  auto r = sample_without_replacement_check(100, 30, Rational(1, 5), 20000, 5);
  CHECK(ok(r.verdict));
  CHECK(r.bound >= std::exp(-2.4));
  CHECK(sample_without_replacement_check(40, 40, Rational(1, 10), 2000, 5).hits == 0);
  CHECK(sample_without_replacement_check(40, 10, Rational(1), 2000, 5).hits == 0);
  try {
    sample_without_replacement_check(10, 11, Rational(1, 5), 10, 1);
    FAIL("expected k_too_large");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::k_too_large);
  }
  CHECK_THROWS_AS(sample_without_replacement_check(10, 5, Rational(0), 10, 1), Error);
}

TEST_CASE("azuma") {
  auto r = azuma_check(50, Rational(1, 5), Rational(1, 2), 20000, 9);
  CHECK(ok(r.verdict));
  CHECK(r.bound >= std::exp(-1.0));
  CHECK(r.trials == 20000);
}
