#include <random>
#include <sstream>

#include "doctest.h"
#include "nsgame/error.hpp"
#include "nsgame/lp.hpp"
#include "nsgame/random_instances.hpp"
#include "nsgame/sensitivity.hpp"
#include "nsgame/values.hpp"
#include "oracles.hpp"

using namespace nsgame;

namespace {

LinearProgram box_sum() {
  // max x + y, x + y <= 3/2, x <= 1, y <= 1, x, y >= 0
  LinearProgram lp(2);
  lp.objective = {Rational(1), Rational(1)};
  lp.nonnegative = {true, true};
  lp.add_row({{0, 1}, {1, 1}}, RowSense::le, Rational(3, 2));
  lp.add_row({{0, 1}}, RowSense::le, Rational(1));
  lp.add_row({{1, 1}}, RowSense::le, Rational(1));
  return lp;
}

SolveOptions guided() {
  SolveOptions o;
  o.exact_cell_limit = 0;
  return o;
}

Matrix mat(std::size_t r, std::size_t c, std::vector<int> v) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < v.size(); ++i) m.data[i] = v[i];
  return m;
}

}  // namespace

TEST_CASE("small programs") {
  LinearProgram one(1);
  one.objective = {Rational(1)};
  one.nonnegative = {true};
  one.add_row({{0, 1}}, RowSense::le, Rational(1));
  auto s = solve(one);
  CHECK(s.status == LpStatus::optimal);
  CHECK(s.value == 1);

  for (const auto& opt : {SolveOptions{}, guided()}) {
    auto b = solve(box_sum(), opt);
    CHECK(b.status == LpStatus::optimal);
    CHECK(b.value == Rational(3, 2));
    CHECK(verify_primal(box_sum(), b));
    CHECK(verify_dual(box_sum(), b));
  }
}

TEST_CASE("infeasible and unbounded") {
  LinearProgram inf(1);
  inf.nonnegative = {true};
  inf.add_row({{0, 1}}, RowSense::le, Rational(-1));
  CHECK(solve(inf).status == LpStatus::infeasible);
  CHECK(solve(inf, guided()).status == LpStatus::infeasible);

  LinearProgram unb(2);
  unb.objective = {Rational(1), Rational(0)};
  unb.add_row({{0, 1}, {1, -1}}, RowSense::le, Rational(1));
  CHECK(solve(unb).status == LpStatus::unbounded);
  CHECK(solve(unb, guided()).status == LpStatus::unbounded);
}

TEST_CASE("equality and ge rows, free variables") {
  // max -x - y, x - y = 1, x + y >= -3, free
  LinearProgram lp(2);
  lp.objective = {Rational(-1), Rational(-1)};
  lp.add_row({{0, 1}, {1, -1}}, RowSense::eq, Rational(1));
  lp.add_row({{0, 1}, {1, 1}}, RowSense::ge, Rational(-3));
  auto s = solve(lp);
  CHECK(s.status == LpStatus::optimal);
  CHECK(s.value == 3);
  CHECK(s.point[0] - s.point[1] == 1);
  CHECK(verify_dual(lp, s));
}

TEST_CASE("iteration cap") {
  SolveOptions o;
  o.iteration_cap = 1;
  try {
    solve(box_sum(), o);
    FAIL("expected cap_exceeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::cap_exceeded);
  }
  CHECK(default_iteration_cap(box_sum()) > 0);
}

TEST_CASE("strong duality on random programs") {
  std::mt19937_64 gen(5);
  int optimal = 0;
  for (int i = 0; i < 200; ++i) {
    LinearProgram lp = random_small_lp(gen);
    auto s = solve_exact(lp);
    auto g = solve(lp, guided());
    CHECK(s.status == g.status);
    if (s.status != LpStatus::optimal) continue;
    ++optimal;
    CHECK(s.value == g.value);
    CHECK(verify_primal(lp, s));
    CHECK(verify_dual(lp, s));
    auto d = solve_exact(dual_program(lp));
    REQUIRE(d.status == LpStatus::optimal);
    CHECK(d.value == -s.value);
  }
  CHECK(optimal > 20);
}

TEST_CASE("certify") {
  LinearProgram lp = box_sum();
  auto s = solve(lp);
  CHECK(certify(lp, s.point, s.dual).has_value());
  auto bad = s.point;
  bad[0] += 1;
  CHECK_FALSE(certify(lp, bad, s.dual).has_value());
  CHECK_FALSE(certify(lp, {Rational(0), Rational(0)}, s.dual).has_value());
}

TEST_CASE("NS program of guess_other against vertex enumeration") {
  Game g = builtin("guess_other");
  Rational expect = oracle::ns_vertex_value_binary(g);
  CHECK(expect == Rational(1, 2));
  LinearProgram lp = build_ns_lp(g);
  CHECK(solve(lp).value == expect);
  CHECK(solve(lp, guided()).value == expect);
  CHECK(solve_exact(lp).value == expect);
  CHECK(oracle::ns_vertex_value_binary(builtin("chsh")) == 1);
}

TEST_CASE("inequality form and text dump") {
  LinearProgram lp(2);
  lp.objective = {Rational(1), Rational(0)};
  lp.nonnegative = {true, false};
  lp.add_row({{0, 1}, {1, 1}}, RowSense::eq, Rational(1));
  lp.add_row({{1, 1}}, RowSense::ge, Rational(0));
  auto f = inequality_form(lp);
  CHECK(f.a.rows == 4);  // eq pair, negated ge, bound on x0
  CHECK(f.b.size() == 4);
  CHECK(f.origin.back() == lp.rows.size() + 0);
  std::ostringstream out;
  write_lp_text(out, lp, "t");
  CHECK(out.str().find("Subject To") != std::string::npos);
}

TEST_CASE("sensitivity constant") {
  CHECK(sensitivity_delta_exact(mat(2, 2, {1, 0, 0, 1}), 2) == 1);
  CHECK(sensitivity_delta_exact(mat(1, 1, {2}), 1) == Rational(1, 2));
  CHECK(sensitivity_delta_exact(mat(2, 2, {1, 1, 0, 1}), 2) == 1);
  CHECK(sensitivity_delta_exact(mat(2, 2, {0, 0, 0, 0}), 2) == 0);
  CHECK(max_abs_inverse_entry(mat(2, 2, {1, 1, 1, 1})) == -1);
  CHECK(max_abs_inverse_entry(mat(2, 2, {2, 1, 1, 1})) == 2);

  std::mt19937_64 gen(17);
  for (int i = 0; i < 40; ++i) {
    std::size_t r = 1 + gen() % 4, c = 1 + gen() % 4;
    Matrix m(r, c);
    for (auto& v : m.data) v = static_cast<long>(gen() % 5) - 2;
    Rational expect = oracle::delta_by_subsets(m, 3);
    CHECK(sensitivity_delta_exact(m, 3) == expect);
    CHECK(sensitivity_delta_exact_serial(m, 3) == expect);
  }
}

TEST_CASE("sensitivity budget") {
  Matrix m(6, 6);
  for (std::size_t i = 0; i < 6; ++i) m(i, i) = 1;
  CHECK(count_square_submatrices(6, 6, 6, 1'000'000) == 923);
  try {
    sensitivity_delta_exact(m, 6, 100);
    FAIL("expected budget error");
  } catch (const DeltaBudgetExceeded& e) {
    CHECK(e.kind() == ErrorKind::budget_exceeded);
    CHECK(e.partial_max == 1);
  }
}

TEST_CASE("hadamard bound") {
  CHECK(sensitivity_delta_hadamard(mat(2, 5, {1, 0, 1, -1, 0, 0, 1, 1, 1, 1})) >= 1.0);
  CHECK(sensitivity_delta_hadamard(mat(2, 5, {1, 0, 1, -1, 0, 0, 1, 1, 1, 1})) < 1.0 + 1e-12);
  Matrix five(5, 5);
  for (std::size_t i = 0; i < 5; ++i) five(i, i) = 1;
  CHECK(sensitivity_delta_hadamard(five) == doctest::Approx(16.0));
  CHECK(sensitivity_delta_hadamard(five) >= 16.0);
  // exact never exceeds the bound on -1/0/1 matrices
  std::mt19937_64 gen(3);
  for (int i = 0; i < 20; ++i) {
    Matrix m(4, 4);
    for (auto& v : m.data) v = static_cast<long>(gen() % 3) - 1;
    CHECK(to_double_down(sensitivity_delta_exact(m, 4)) <= sensitivity_delta_hadamard(m));
  }
}

TEST_CASE("sensitivity check") {
  LinearProgram lp(1);
  lp.objective = {Rational(1)};
  lp.nonnegative = {true};
  lp.add_row({{0, 1}}, RowSense::le, Rational(1));
  auto same = sensitivity_check(lp, {Rational(1)}, Rational(1));
  CHECK(same.diff == 0);
  CHECK(same.holds);
  auto r = sensitivity_check(lp, {Rational(2)}, Rational(1));
  CHECK(r.diff == 1);
  CHECK(r.bound == 1);
  CHECK(r.holds);

  // Tiny NS program: slack 1/100 on the non-signaling rows against 0.
  // Hadamard Delta bounds the exact one from above.
  Game g = builtin("guess_other");
  LinearProgram ns = build_ns_lp(g, Rational(1, 100));
  std::vector<Rational> b;
  for (std::size_t i = 0; i < ns.rows.size(); ++i) b.push_back(i < first_signaling_row(g) ? ns.rows[i].rhs : Rational(0));
  Rational delta = from_double(sensitivity_delta_hadamard(inequality_form(ns).a));
  auto k = sensitivity_check(ns, b, delta);
  CHECK(k.value == Rational(101, 200));
  CHECK(k.value_alt == Rational(1, 2));
  CHECK(k.holds);
}
