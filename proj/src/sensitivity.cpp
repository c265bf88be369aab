#include "nsgame/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "nsgame/rounding.hpp"

namespace nsgame {

namespace {

std::size_t binomial_saturating(std::size_t n, std::size_t k, std::size_t saturate) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > saturate) return saturate;
  }
  return static_cast<std::size_t>(r);
}

// Advances `idx` to the next k-combination of {0..n-1}; false when exhausted.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::vector<std::vector<std::size_t>> all_combinations(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  do out.push_back(idx);
  while (next_combination(idx, n));
  return out;
}

// Fraction-free Gauss-Jordan on [B | I]. On completion every diagonal entry
// equals the determinant of the row-permuted B and the right block is that
// determinant times B^{-1}; all divisions are exact.
template <typename Int>
bool fraction_free_inverse(std::vector<Int>& m, std::size_t k, Int& diag) {
  const std::size_t w = 2 * k;
  Int prev = 1;
  for (std::size_t p = 0; p < k; ++p) {
    std::size_t piv = p;
    while (piv < k && m[piv * w + p] == 0) ++piv;
    if (piv == k) return false;
    if (piv != p)
      for (std::size_t c = 0; c < w; ++c) std::swap(m[p * w + c], m[piv * w + c]);
    const Int pk = m[p * w + p];
    for (std::size_t i = 0; i < k; ++i) {
      if (i == p) continue;
      const Int f = m[i * w + p];
      for (std::size_t c = 0; c < w; ++c) {
        if (c == p) continue;
        m[i * w + c] = (pk * m[i * w + c] - f * m[p * w + c]) / prev;
      }
      m[i * w + p] = 0;
    }
    prev = pk;
  }
  diag = m[(k - 1) * w + (k - 1)];
  return diag != 0;
}

// Row i of the eliminated block is diag_i * (row i of B'^{-1}); column j of
// B^{-1} = B'^{-1} D picks up the scale of source row j.
template <typename Int>
Rational max_entry_from(const std::vector<Int>& m, std::size_t k, const std::vector<BigInt>& row_scale) {
  const std::size_t w = 2 * k;
  Rational best = 0;
  for (std::size_t i = 0; i < k; ++i) {
    Rational d;
    if constexpr (std::is_same_v<Int, BigInt>)
      d = Rational(m[i * w + i]);
    else
      d = Rational(BigInt(static_cast<long>(m[i * w + i])));
    for (std::size_t j = 0; j < k; ++j) {
      Rational e;
      if constexpr (std::is_same_v<Int, BigInt>)
        e = Rational(m[i * w + k + j]);
      else
        e = Rational(BigInt(static_cast<long>(m[i * w + k + j])));
      if (sgn(e) == 0) continue;
      Rational v = abs(e * row_scale[j] / d);
      if (v > best) best = v;
    }
  }
  return best;
}

struct PreparedMatrix {
  std::vector<BigInt> entries;   // row-scaled integers
  std::vector<BigInt> row_scale;  // per row of the source matrix
  bool small = false;             // int64 elimination cannot overflow
};

PreparedMatrix prepare(const Matrix& a, std::size_t size_cap) {
  PreparedMatrix p;
  p.entries.resize(a.rows * a.cols);
  p.row_scale.resize(a.rows);
  BigInt max_abs = 0;
  for (std::size_t i = 0; i < a.rows; ++i) {
    BigInt l = 1;
    for (std::size_t j = 0; j < a.cols; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).get_den_mpz_t());
    p.row_scale[i] = l;
    for (std::size_t j = 0; j < a.cols; ++j) {
      Rational v = a(i, j) * l;
      p.entries[i * a.cols + j] = v.get_num();
      BigInt m = abs(v.get_num());
      if (m > max_abs) max_abs = m;
    }
  }
  // Intermediates are minors bounded by h^k k^(k/2); products of two must fit.
  const double k = static_cast<double>(std::max<std::size_t>(size_cap, 1));
  const double log2_minor = k * std::log2(std::max(1.0, max_abs.get_d())) + 0.5 * k * std::log2(k);
  p.small = 2.0 * log2_minor + 2.0 < 62.0;
  return p;
}

template <typename Int>
Rational submatrix_max(const PreparedMatrix& pm, std::size_t cols, const std::vector<std::size_t>& rs,
                       const std::vector<std::size_t>& cs, std::vector<Int>& work) {
  const std::size_t k = rs.size(), w = 2 * k;
  work.assign(k * w, Int(0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const BigInt& v = pm.entries[rs[i] * cols + cs[j]];
      if constexpr (std::is_same_v<Int, BigInt>)
        work[i * w + j] = v;
      else
        work[i * w + j] = static_cast<Int>(v.get_si());
    }
    work[i * w + k + i] = 1;
  }
  Int diag;
  if (!fraction_free_inverse(work, k, diag)) return Rational(-1);
  std::vector<BigInt> scale(k);
  for (std::size_t j = 0; j < k; ++j) scale[j] = pm.row_scale[rs[j]];
  return max_entry_from(work, k, scale);
}

Rational one_submatrix(const PreparedMatrix& pm, std::size_t cols, const std::vector<std::size_t>& rs,
                       const std::vector<std::size_t>& cs) {
  if (pm.small) {
    std::vector<std::int64_t> work;
    return submatrix_max(pm, cols, rs, cs, work);
  }
  std::vector<BigInt> work;
  return submatrix_max(pm, cols, rs, cs, work);
}

Rational enumerate(const Matrix& a, std::size_t size_cap, std::size_t budget, bool parallel) {
  const std::size_t cap = std::min({size_cap, a.rows, a.cols});
  const std::size_t total = count_square_submatrices(a.rows, a.cols, cap, std::numeric_limits<std::size_t>::max());
  PreparedMatrix pm = prepare(a, cap);
  Rational best = 0;

  if (total > budget) {
    // Partial max in enumeration order, then report.
    std::size_t examined = 0;
    for (std::size_t k = 1; k <= cap && examined < budget; ++k) {
      std::vector<std::size_t> rs(k);
      for (std::size_t i = 0; i < k; ++i) rs[i] = i;
      do {
        std::vector<std::size_t> cs(k);
        for (std::size_t i = 0; i < k; ++i) cs[i] = i;
        do {
          Rational v = one_submatrix(pm, a.cols, rs, cs);
          if (v > best) best = v;
          ++examined;
        } while (examined < budget && next_combination(cs, a.cols));
      } while (examined < budget && next_combination(rs, a.rows));
    }
    throw DeltaBudgetExceeded(best, examined, total);
  }

  for (std::size_t k = 1; k <= cap; ++k) {
    auto row_sets = all_combinations(a.rows, k);
    auto col_sets = all_combinations(a.cols, k);
    const long long n = static_cast<long long>(row_sets.size());
    std::vector<Rational> local(row_sets.size(), Rational(0));
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
    for (long long ri = 0; ri < n; ++ri) {
      Rational m = 0;
      for (const auto& cs : col_sets) {
        Rational v = one_submatrix(pm, a.cols, row_sets[static_cast<std::size_t>(ri)], cs);
        if (v > m) m = v;
      }
      local[static_cast<std::size_t>(ri)] = m;
    }
    for (const auto& v : local)
      if (v > best) best = v;
  }
  return best;
}

}  // namespace

std::size_t count_square_submatrices(std::size_t rows, std::size_t cols, std::size_t size_cap,
                                     std::size_t saturate) {
  std::size_t total = 0;
  for (std::size_t k = 1; k <= std::min({size_cap, rows, cols}); ++k) {
    std::size_t r = binomial_saturating(rows, k, saturate), c = binomial_saturating(cols, k, saturate);
    unsigned __int128 prod = static_cast<unsigned __int128>(r) * c;
    if (prod >= saturate || total >= saturate - static_cast<std::size_t>(prod)) return saturate;
    total += static_cast<std::size_t>(prod);
  }
  return total;
}

Rational sensitivity_delta_exact(const Matrix& a, std::size_t size_cap, std::size_t budget) {
  if (size_cap < 1) throw Error(ErrorKind::invalid_argument, "size_cap must be >= 1");
  return enumerate(a, size_cap, budget, true);
}

Rational sensitivity_delta_exact_serial(const Matrix& a, std::size_t size_cap, std::size_t budget) {
  if (size_cap < 1) throw Error(ErrorKind::invalid_argument, "size_cap must be >= 1");
  return enumerate(a, size_cap, budget, false);
}

Rational max_abs_inverse_entry(const Matrix& b) {
  if (b.rows != b.cols || b.rows == 0) throw Error(ErrorKind::shape_mismatch, "square matrix required");
  PreparedMatrix pm = prepare(b, b.rows);
  std::vector<std::size_t> idx(b.rows);
  for (std::size_t i = 0; i < b.rows; ++i) idx[i] = i;
  return one_submatrix(pm, b.cols, idx, idx);
}

namespace {

std::pair<double, double> hadamard_inputs(const Matrix& a) {
  double h = 0.0;
  for (const auto& v : a.data) {
    if (v.get_den() != 1) throw Error(ErrorKind::non_integer_entries, "entry " + to_string(v) + " is not an integer");
    h = std::max(h, to_double_up(Rational(abs(v))));
  }
  const double k = static_cast<double>(std::min(a.rows, a.cols));
  return {std::max(h, 1.0), k};
}

}  // namespace

double sensitivity_delta_hadamard_log(const Matrix& a) {
  auto [h, k] = hadamard_inputs(a);
  if (k <= 1.0) return 0.0;
  double km1 = k - 1.0;
  double v = km1 * std::log(h) + 0.5 * km1 * std::log(km1);
  return rounding::up(v, 4);
}

double sensitivity_delta_hadamard(const Matrix& a) {
  auto [h, k] = hadamard_inputs(a);
  if (k <= 1.0) return 1.0;
  double km1 = k - 1.0;
  // Exact for integer-valued results (e.g. k=5 gives 16); otherwise bumped.
  double v = std::pow(h, km1) * std::pow(km1, 0.5 * km1);
  if (v == std::floor(v) && v < 9e15) {
    // pow is correctly rounded for these small integer cases on glibc.
    return v;
  }
  return rounding::up(v, 4);
}

SensitivityReport sensitivity_check(const LinearProgram& lp, const std::vector<Rational>& b_alt,
                                    const Rational& delta) {
  if (b_alt.size() != lp.rows.size()) throw Error(ErrorKind::shape_mismatch, "b_alt must have one entry per row");
  LinearProgram alt = lp;
  for (std::size_t i = 0; i < alt.rows.size(); ++i) alt.rows[i].rhs = b_alt[i];
  LpSolution s1 = solve(lp), s2 = solve(alt);
  if (s1.status != LpStatus::optimal || s2.status != LpStatus::optimal)
    throw Error(ErrorKind::invalid_argument,
                "sensitivity check needs finite optima (got " + to_string(s1.status) + ", " + to_string(s2.status) + ")");
  SensitivityReport rep;
  rep.value = s1.value;
  rep.value_alt = s2.value;
  rep.diff = abs(s2.value - s1.value);
  Rational c1 = 0;
  for (const auto& c : lp.objective) c1 += abs(c);
  Rational db = 0;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    Rational d = abs(b_alt[i] - lp.rows[i].rhs);
    if (d > db) db = d;
  }
  rep.bound = Rational(static_cast<unsigned long>(lp.num_vars)) * delta * c1 * db;
  rep.holds = rep.diff <= rep.bound;
  return rep;
}

}  // namespace nsgame
