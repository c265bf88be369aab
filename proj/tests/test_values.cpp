#include <cmath>

#include "doctest.h"
#include "nsgame/error.hpp"
#include "nsgame/sensitivity.hpp"
#include "nsgame/values.hpp"
#include "oracles.hpp"

using namespace nsgame;

namespace {

Game all_lose() { return make_game("lose", 2, {2, 2}, {2, 2}, {{{0, 0}, Rational(1)}}, {}); }

std::vector<Game> small_games() {
  return {builtin("chsh"), builtin("guess_other"), builtin("ghz3"), builtin("random_free"),
          builtin("random_free", {2, 3, 11}), all_lose()};
}

}  // namespace

TEST_CASE("classical value against brute force") {
  for (const Game& g : small_games()) {
    CAPTURE(g.name());
    Rational expect = oracle::brute_classical(g);
    auto par = classical_value(g);
    auto ser = classical_value_serial(g);
    CHECK(par.value == expect);
    CHECK(ser.value == expect);
    CHECK(par.witness == ser.witness);
    CHECK(par.kind == ValueKind::classical);
    CHECK(is_deterministic_local(par.witness));
    CHECK(game_value(g, par.witness) == expect);
  }
  CHECK(classical_value(builtin("chsh")).value == Rational(3, 4));
  CHECK(classical_value(all_lose()).value == 0);
}

TEST_CASE("classical cap") {
  CHECK(deterministic_tuple_count(builtin("chsh").shape(), 1000) == 4 * 4);  // 2^2 functions each
  try {
    classical_value(builtin("chsh"), 10);
    FAIL("expected cap error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::cap_exceeded);
  }
}

TEST_CASE("deterministic local test") {
  GameShape sh({2, 2}, {2, 2});
  CHECK(is_deterministic_local(Strategy::deterministic(sh, {0, 1, 2, 3})));      // a_i = x_i
  CHECK_FALSE(is_deterministic_local(Strategy::deterministic(sh, {0, 2, 0, 2})));  // a_2 = x_1
  CHECK_FALSE(is_deterministic_local(Strategy::uniform(sh)));
}

TEST_CASE("NS program structure for CHSH") {
  Game g = builtin("chsh");
  LinearProgram lp = build_ns_lp(g);
  CHECK(lp.num_vars == 16);
  CHECK(first_signaling_row(g) == 4);
  // per I: |A_I| * |X_I| * (|X_J| - 1) = 2 * 2 * 1, two subsets
  CHECK(lp.rows.size() == 4 + 8);
  for (std::size_t r = 0; r < 4; ++r) CHECK(lp.rows[r].terms.size() == 4);
  CHECK(signaling_subsets(3).size() == 6);
  CHECK(signaling_subsets(1).empty());
}

TEST_CASE("NS value") {
  CHECK(ns_value(builtin("chsh")).value == 1);
  CHECK(ns_value(builtin("guess_other")).value == Rational(1, 2));
  for (const Game& g : small_games()) {
    CAPTURE(g.name());
    auto v = ns_value(g);
    CHECK(v.value >= classical_value(g).value);
    CHECK(ns_value(g, NsRows::all_pairs).value == v.value);
    CHECK(game_value(g, v.witness) == v.value);
    CHECK(signaling_epsilon(v.witness).epsilon == 0);
    if (g.shape().question_sizes() == std::vector<std::size_t>{2, 2} &&
        g.shape().answer_sizes() == std::vector<std::size_t>{2, 2})
      CHECK(v.value == oracle::ns_vertex_value_binary(g));
  }
}

TEST_CASE("NS value with hint") {
  Game g = builtin("chsh");
  // PR box reaches the trivial bound.
  GameShape sh = g.shape();
  std::vector<Rational> q(sh.cells(), Rational(0));
  for (std::size_t x = 0; x < 4; ++x)
    for (std::size_t a = 0; a < 4; ++a)
      if (g.wins(x, a)) q[sh.cell(x, a)] = Rational(1, 2);
  Strategy pr(sh, q);
  auto v = ns_value_with_hint(g, pr);
  CHECK(v.value == 1);
  CHECK(v.witness == pr);
  // A weak hint falls back to the solver.
  Game go = builtin("guess_other");
  auto w = ns_value_with_hint(go, Strategy::uniform(go.shape()));
  CHECK(w.value == Rational(1, 2));
  CHECK_THROWS_AS(ns_value_with_hint(go, Strategy::uniform(repeat_shape(go.shape(), 2))), Error);
}

TEST_CASE("almost NS value") {
  Game g = builtin("guess_other");
  auto z = almost_ns_value(g, Rational(0));
  CHECK(z.value == Rational(1, 2));
  CHECK(z.kind == ValueKind::almost_ns);
  auto k = constants(g);
  Rational prev = z.value;
  for (Rational eps : {Rational(1, 100), Rational(1, 10), Rational(1, 4)}) {
    auto v = almost_ns_value(g, eps);
    CHECK(v.value >= prev);
    CHECK(v.value >= Rational(1, 2));
    CHECK(to_double_down(v.value) <= std::min(1.0, 0.5 + c_times_up(k, eps)));
    CHECK(signaling_epsilon(v.witness).epsilon <= eps);
    CHECK(game_value(g, v.witness) == v.value);
    prev = v.value;
  }
  CHECK_THROWS_AS(almost_ns_value(g, Rational(-1)), Error);
}

TEST_CASE("signaling epsilon") {
  GameShape sh({2, 2}, {2, 2});
  CHECK(signaling_epsilon(Strategy::uniform(sh)).epsilon == 0);
  CHECK(signaling_epsilon(Strategy::deterministic(sh, {0, 1, 2, 3})).epsilon == 0);
  // a_2 := x_1: player 2's marginal flips with player 1's question.
  auto r = signaling_epsilon(Strategy::deterministic(sh, {0, 2, 0, 2}));
  CHECK(r.epsilon == 1);
  CHECK(r.subset == std::vector<std::size_t>{1});
  CHECK(signaling_epsilon(Strategy::uniform(GameShape({3}, {2}))).epsilon == 0);
}

TEST_CASE("constants") {
  Game g = builtin("guess_other");
  auto k = constants(g);
  CHECK(k.delta_provenance == DeltaProvenance::hadamard);
  CHECK(k.num_questions == 4);
  CHECK(k.num_answers == 4);
  CHECK(k.pi_min == Rational(1, 4));
  CHECK(k.v_ns == Rational(1, 2));
  // c = 2 |X| |A|^2 Delta
  CHECK(k.c >= 2.0 * 4 * 16 * k.delta * (1 - 1e-12));
  CHECK(k.c == doctest::Approx(128.0 * k.delta).epsilon(1e-9));
  // c' = 3 * 2^m * c / pi_min
  CHECK(k.c_prime == doctest::Approx(3.0 * 4 * k.c * 4).epsilon(1e-9));
  CHECK(k.log_mu == doctest::Approx(-std::log(2.0 * 243.0) - 2 * k.log_c_prime).epsilon(1e-9));
  CHECK(k.one_minus_nu > 0.0);
  CHECK(k.nu <= 1.0);

  auto one = constants(builtin("chsh"));
  CHECK(one.v_ns == 1);
  CHECK(one.nu == 1.0);
  CHECK(one.one_minus_nu == 0.0);

  try {
    constants(all_lose());
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::no_complete_support);
  }
}

TEST_CASE("constants, exact delta") {
  Game g = builtin("chsh");
  auto k = constants(g, DeltaMode::exact_mode(2));
  CHECK(k.delta_provenance == DeltaProvenance::hadamard);  // cap below min(rows, cols)
  CHECK_FALSE(k.delta_note.empty());
  CHECK_FALSE(k.delta_exact.has_value());

  auto h = constants(g);
  CHECK(k.delta == h.delta);
}
