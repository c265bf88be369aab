#pragma once

// Independent reference computations for the tests. Deliberately naive:
// nothing here calls into the library's solvers.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <optional>
#include <vector>

#include "nsgame/game.hpp"
#include "nsgame/lp.hpp"
#include "nsgame/rational.hpp"

namespace oracle {

using nsgame::Game;
using nsgame::Matrix;
using nsgame::Rational;

// sum_x pi(x) sum_a q(a|x) V(x,a), straight from the definition.
inline Rational direct_value(const Game& g, const std::vector<Rational>& q) {
  const auto& sh = g.shape();
  Rational v = 0;
  for (std::size_t x = 0; x < sh.num_questions(); ++x)
    for (std::size_t a = 0; a < sh.num_answers(); ++a)
      if (g.wins(x, a)) v += g.pi(x) * q[x * sh.num_answers() + a];
  return v;
}

// Every player picks a function f_i : X_i -> A_i; recursion over all of them.
inline Rational brute_classical(const Game& g) {
  const auto& qs = g.shape().question_sizes();
  const auto& as = g.shape().answer_sizes();
  const std::size_t m = qs.size();
  std::vector<std::vector<std::size_t>> f(m);
  for (std::size_t i = 0; i < m; ++i) f[i].assign(qs[i], 0);
  Rational best = -1;
  std::vector<std::size_t> xd(m), ad(m);
  auto score = [&] {
    Rational v = 0;
    for (std::size_t x = 0; x < g.shape().num_questions(); ++x) {
      std::size_t rest = x, a = 0, mul = 1;
      for (std::size_t i = 0; i < m; ++i) {
        xd[i] = rest % qs[i];
        rest /= qs[i];
      }
      for (std::size_t i = 0; i < m; ++i) {
        a += f[i][xd[i]] * mul;
        mul *= as[i];
      }
      if (g.wins(x, a)) v += g.pi(x);
    }
    return v;
  };
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t xi) {
    if (i == m) {
      Rational v = score();
      if (v > best) best = v;
      return;
    }
    if (xi == qs[i]) return rec(i + 1, 0);
    for (std::size_t a = 0; a < as[i]; ++a) {
      f[i][xi] = a;
      rec(i, xi + 1);
    }
  };
  rec(0, 0);
  return best;
}

// Gaussian elimination over Q. Returns the solution of M z = r or nullopt
// when M is singular.
inline std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> m, std::vector<Rational> r) {
  const std::size_t k = m.size();
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t p = c;
    while (p < k && sgn(m[p][c]) == 0) ++p;
    if (p == k) return std::nullopt;
    std::swap(m[p], m[c]);
    std::swap(r[p], r[c]);
    for (std::size_t i = 0; i < k; ++i) {
      if (i == c || sgn(m[i][c]) == 0) continue;
      Rational f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < k; ++j) m[i][j] -= f * m[c][j];
      r[i] -= f * r[c];
    }
  }
  for (std::size_t i = 0; i < k; ++i) r[i] /= m[i][i];
  return r;
}

// Maximum of the game value over the vertices of the 2-player binary NS
// polytope, in Collins-Gisin coordinates
//   z = (pA(0|0), pA(0|1), pB(0|0), pB(0|1), p(00|00), p(00|10), p(00|01), p(00|11)).
// Each of the 16 probabilities p(ab|xy) is affine in z; vertices are the
// feasible points where 8 independent ones vanish.
inline Rational ns_vertex_value_binary(const Game& g) {
  // row = coefficients on z then constant.
  struct Affine {
    Rational c[9];
  };
  std::vector<Affine> prob(16);  // index cell(x, a) with x = x1 + 2 x2, a = a1 + 2 a2
  for (std::size_t x1 = 0; x1 < 2; ++x1)
    for (std::size_t x2 = 0; x2 < 2; ++x2) {
      const std::size_t x = x1 + 2 * x2;
      const std::size_t pa = x1, pb = 2 + x2, pj = 4 + x;
      auto& p00 = prob[x * 4 + 0];
      auto& p10 = prob[x * 4 + 1];  // a1 = 1, a2 = 0
      auto& p01 = prob[x * 4 + 2];
      auto& p11 = prob[x * 4 + 3];
      p00.c[pj] = 1;
      p01.c[pa] = 1;  // pA(0) - p00
      p01.c[pj] = -1;
      p10.c[pb] = 1;
      p10.c[pj] = -1;
      p11.c[8] = 1;
      p11.c[pa] = -1;
      p11.c[pb] = -1;
      p11.c[pj] = 1;
    }
  Affine obj;
  for (std::size_t cell = 0; cell < 16; ++cell)
    if (g.wins(cell / 4, cell % 4))
      for (int j = 0; j < 9; ++j) obj.c[j] += g.pi(cell / 4) * prob[cell].c[j];

  Rational best = -1;
  std::vector<int> pick(8);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == 8) {
      std::vector<std::vector<Rational>> m(8, std::vector<Rational>(8));
      std::vector<Rational> r(8);
      for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) m[i][j] = prob[pick[i]].c[j];
        r[i] = -prob[pick[i]].c[8];
      }
      auto z = solve_square(m, r);
      if (!z) return;
      for (const auto& p : prob) {
        Rational v = p.c[8];
        for (int j = 0; j < 8; ++j) v += p.c[j] * (*z)[j];
        if (sgn(v) < 0) return;
      }
      Rational v = obj.c[8];
      for (int j = 0; j < 8; ++j) v += obj.c[j] * (*z)[j];
      if (v > best) best = v;
      return;
    }
    for (int i = start; i <= 16 - (8 - depth); ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

// max |inverse entry| of a square matrix by Gauss-Jordan on [B | I]; -1 if singular.
inline Rational max_abs_inverse(const Matrix& b) {
  const std::size_t k = b.rows;
  std::vector<std::vector<Rational>> m(k, std::vector<Rational>(2 * k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) m[i][j] = b(i, j);
    m[i][k + i] = 1;
  }
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t p = c;
    while (p < k && sgn(m[p][c]) == 0) ++p;
    if (p == k) return -1;
    std::swap(m[p], m[c]);
    Rational inv = 1 / m[c][c];
    for (auto& v : m[c]) v *= inv;
    for (std::size_t i = 0; i < k; ++i) {
      if (i == c || sgn(m[i][c]) == 0) continue;
      Rational f = m[i][c];
      for (std::size_t j = 0; j < 2 * k; ++j) m[i][j] -= f * m[c][j];
    }
  }
  Rational best = 0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = k; j < 2 * k; ++j) best = std::max(best, Rational(abs(m[i][j])));
  return best;
}

// Delta by bitmask enumeration of row and column subsets.
inline Rational delta_by_subsets(const Matrix& a, std::size_t cap) {
  Rational best = 0;
  for (unsigned rm = 1; rm < (1u << a.rows); ++rm) {
    const std::size_t k = static_cast<std::size_t>(__builtin_popcount(rm));
    if (k > cap || k > a.cols) continue;
    for (unsigned cm = 1; cm < (1u << a.cols); ++cm) {
      if (static_cast<std::size_t>(__builtin_popcount(cm)) != k) continue;
      Matrix s(k, k);
      std::size_t i = 0;
      for (std::size_t r = 0; r < a.rows; ++r) {
        if (!(rm >> r & 1)) continue;
        std::size_t j = 0;
        for (std::size_t c = 0; c < a.cols; ++c)
          if (cm >> c & 1) s(i, j++) = a(r, c);
        ++i;
      }
      best = std::max(best, max_abs_inverse(s));
    }
  }
  return best;
}

}  // namespace oracle
