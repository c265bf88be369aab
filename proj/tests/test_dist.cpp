#include <cmath>
#include <random>

#include "doctest.h"
#include "nsgame/dist.hpp"
#include "nsgame/error.hpp"
#include "nsgame/random_instances.hpp"

using namespace nsgame;

TEST_CASE("variational distance") {
  auto u = JointDistribution::uniform({2, 3});
  CHECK(variational_distance(u, u) == 0);
  CHECK(variational_distance(JointDistribution::point_mass({2}, 0), JointDistribution::point_mass({2}, 1)) == 1);
  JointDistribution half({2}, {Rational(1, 2), Rational(1, 2)});
  CHECK(variational_distance(half, JointDistribution::point_mass({2}, 0)) == Rational(1, 2));
  CHECK_THROWS_AS(variational_distance(half, u), Error);
}

TEST_CASE("distribution validation") {
  CHECK_THROWS_AS(JointDistribution({2}, {Rational(1, 2), Rational(1, 3)}), Error);
  CHECK_THROWS_AS(JointDistribution({2}, {Rational(3, 2), Rational(-1, 2)}), Error);
}

TEST_CASE("marginals") {
  auto u = JointDistribution::uniform({2, 2});
  CHECK(marginal(u, {0, 1}) == u);
  CHECK(marginal(u, {0}) == JointDistribution::uniform({2}));

  JointDistribution a({2}, {Rational(1, 3), Rational(2, 3)});
  JointDistribution b({3}, {Rational(1, 6), Rational(1, 2), Rational(1, 3)});
  std::vector<Rational> t;
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t i = 0; i < 2; ++i) t.push_back(a[i] * b[j]);
  JointDistribution ab({2, 3}, t);
  CHECK(marginal(ab, {0}) == a);
  CHECK(marginal(ab, {1}) == b);
  // Reordering the kept components transposes the table.
  auto ba = marginal(ab, {1, 0});
  CHECK(ba.radices() == std::vector<std::size_t>{3, 2});
  CHECK(ba[1 + 3 * 1] == a[1] * b[1]);
}

TEST_CASE("conditioning") {
  auto u = JointDistribution::uniform({2, 2});
  CHECK(condition(u, Event::full(4)) == u);
  auto c = condition(u, Event{{1, 0, 1, 0}});  // first component = 0
  CHECK(c[0] == Rational(1, 2));
  CHECK(c[2] == Rational(1, 2));
  CHECK(c[1] == 0);
  try {
    condition(u, Event{{0, 0, 0, 0}});
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::zero_probability_event);
  }
}

TEST_CASE("marginal monotonicity on random instances") {
  std::mt19937_64 gen(2024);
  for (int i = 0; i < 100; ++i) {
    auto p = random_distribution(gen, {2, 3, 2});
    auto q = random_distribution(gen, {2, 3, 2});
    Rational d = variational_distance(p, q);
    CHECK(variational_distance(marginal(p, {0}), marginal(q, {0})) <= d);
    CHECK(variational_distance(marginal(p, {2, 1}), marginal(q, {2, 1})) <= d);
  }
}

TEST_CASE("holenstein gap") {
  SUBCASE("full event") {
    JointDistribution pt = JointDistribution::uniform({2});
    Kernel k{2, 2, {Rational(1, 2), Rational(1, 2), Rational(1, 3), Rational(2, 3)}};
    auto joint = conditionally_independent_joint(pt, {k}, 1000);
    auto r = holenstein_gap(pt, {k}, Event::full(joint.size()));
    CHECK(r.lhs == 0);
    CHECK(r.holds);
  }
  SUBCASE("constant T, U a fair bit, e = {U = 0}") {
    JointDistribution pt = JointDistribution::point_mass({1}, 0);
    Kernel k{1, 2, {Rational(1, 2), Rational(1, 2)}};
    auto r = holenstein_gap(pt, {k}, Event{{1, 0}});
    CHECK(r.lhs == Rational(1, 2));
    CHECK(r.rhs >= 1.0);
    CHECK(r.rhs < 1.0 + 1e-12);
    CHECK(r.event_probability == Rational(1, 2));
    CHECK(r.holds);
  }
  SUBCASE("random instances") {
    std::mt19937_64 gen(99);
    for (int i = 0; i < 50; ++i) {
      auto inst = random_holenstein_instance(gen);
      auto r = holenstein_gap(inst.p_t, inst.kernels, inst.event);
      CHECK(sgn(r.event_probability) > 0);
      CHECK(r.holds);
      CHECK(from_double(r.rhs) >= r.lhs);
    }
  }
}

TEST_CASE("tail formulas") {
  CHECK(hoeffding_bound(0.1, 100) == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(hoeffding_bound(0.1, 100) >= std::exp(-2.0));
  CHECK(azuma_bound(0.2, 50) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(azuma_bound(0.2, 50) >= std::exp(-1.0));
  CHECK(azuma_bound(0.0, 10) >= 1.0);
  CHECK_THROWS_AS(hoeffding_bound(0.1, 0), Error);
  CHECK_THROWS_AS(azuma_bound(0.1, 0), Error);
}
