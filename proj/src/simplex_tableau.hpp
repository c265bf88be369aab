#pragma once

// Dense two-phase tableau simplex shared by the exact (mpq) and the
// double-precision guidance solver. Internal to the lp module.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "nsgame/error.hpp"
#include "nsgame/lp.hpp"

namespace nsgame::detail {

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

/// LinearProgram rewritten as  max cost.z, M z = rhs >= 0, z >= 0.
struct StandardForm {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::vector<LpTerm>> row_terms;  // normalised, rhs >= 0
  std::vector<Rational> rhs;
  std::vector<Rational> cost;
  std::vector<int> row_sign;                   // +1 or -1 applied to the source row
  std::vector<std::size_t> identity_col;       // column equal to e_r initially
  std::vector<bool> artificial;
  std::vector<std::size_t> plus_col, minus_col;  // per source variable
};

StandardForm standard_form(const LinearProgram& lp);

template <typename S>
struct ScalarOps;

template <>
struct ScalarOps<Rational> {
  static constexpr bool exact = true;
  static bool positive(const Rational& v) { return sgn(v) > 0; }
  static bool pivotable(const Rational& v) { return sgn(v) > 0; }
  static bool zero(const Rational& v) { return sgn(v) == 0; }
  static Rational from(const Rational& r) { return r; }
};

template <>
struct ScalarOps<double> {
  static constexpr bool exact = false;
  static constexpr double opt_tol = 1e-9;
  static constexpr double piv_tol = 1e-9;
  static constexpr double zero_tol = 1e-12;
  static bool positive(double v) { return v > opt_tol; }
  static bool pivotable(double v) { return v > piv_tol; }
  static bool zero(double v) { return std::fabs(v) <= zero_tol; }
  static double from(const Rational& r) { return r.get_d(); }
};

enum class PhaseResult { optimal, unbounded, iteration_cap };

template <typename S>
class Tableau {
  using Ops = ScalarOps<S>;

 public:
  Tableau(const StandardForm& sf, std::size_t iteration_cap, std::size_t bit_cap)
      : sf_(sf), rows_(sf.rows), cols_(sf.cols), width_(sf.cols + 1), cap_(iteration_cap), bit_cap_(bit_cap) {
    t_.assign(rows_ * width_, S(0));
    for (std::size_t r = 0; r < rows_; ++r) {
      for (const auto& term : sf.row_terms[r]) at(r, term.var) = Ops::from(term.coef);
      at(r, cols_) = Ops::from(sf.rhs[r]);
    }
    basis_ = sf.identity_col;
    d_.assign(width_, S(0));
  }

  /// Phase 1 (minimise artificial mass) then phase 2. Returns the final
  /// status; infeasibility is reported through `infeasible()`.
  PhaseResult run() {
    // Phase 1 objective: -sum of artificials.
    std::vector<S> cost1(cols_, S(0));
    bool any_artificial = false;
    for (std::size_t c = 0; c < cols_; ++c)
      if (sf_.artificial[c]) {
        cost1[c] = S(-1);
        any_artificial = true;
      }
    if (any_artificial) {
      price(cost1);
      PhaseResult res = iterate(/*phase_two=*/false);
      if (res == PhaseResult::iteration_cap) return res;
      // Remaining artificial mass = d_[cols_] (= -z of the phase 1 program).
      if (Ops::positive(d_[cols_])) {
        infeasible_ = true;
        return PhaseResult::optimal;
      }
      drive_out_artificials();
    }
    std::vector<S> cost2(cols_);
    for (std::size_t c = 0; c < cols_; ++c) cost2[c] = Ops::from(sf_.cost[c]);
    price(cost2);
    return iterate(/*phase_two=*/true);
  }

  bool infeasible() const { return infeasible_; }
  std::size_t iterations() const { return iterations_; }
  const std::vector<std::size_t>& basis() const { return basis_; }

  /// Values of the standard-form columns.
  std::vector<S> column_values() const {
    std::vector<S> z(cols_, S(0));
    for (std::size_t r = 0; r < rows_; ++r) z[basis_[r]] = at(r, cols_);
    return z;
  }

  /// Duals of the normalised rows: y_r = cost(id) - d(id) with cost(id) = 0.
  std::vector<S> row_duals() const {
    std::vector<S> y(rows_);
    for (std::size_t r = 0; r < rows_; ++r) y[r] = -d_[sf_.identity_col[r]];
    return y;
  }

  std::size_t unbounded_column() const { return unbounded_col_; }

 private:
  S& at(std::size_t r, std::size_t c) { return t_[r * width_ + c]; }
  const S& at(std::size_t r, std::size_t c) const { return t_[r * width_ + c]; }

  void price(const std::vector<S>& cost) {
    for (std::size_t c = 0; c < cols_; ++c) d_[c] = cost[c];
    d_[cols_] = S(0);
    for (std::size_t r = 0; r < rows_; ++r) {
      const S& cb = cost[basis_[r]];
      if (Ops::zero(cb)) continue;
      for (std::size_t c = 0; c < width_; ++c)
        if (!Ops::zero(at(r, c))) d_[c] -= cb * at(r, c);
    }
  }

  std::size_t choose_entering(bool phase_two) const {
    std::size_t best = npos;
    for (std::size_t c = 0; c < cols_; ++c) {
      if (phase_two && sf_.artificial[c]) continue;
      if (!Ops::positive(d_[c])) continue;
      if constexpr (Ops::exact) {
        return c;  // smallest index
      } else {
        if (bland_mode_) return c;
        if (best == npos || d_[c] > d_[best]) best = c;
      }
    }
    return best;
  }

  std::size_t choose_leaving(std::size_t col) const {
    std::size_t best = npos;
    S best_ratio{};
    for (std::size_t r = 0; r < rows_; ++r) {
      const S& a = at(r, col);
      if (!Ops::pivotable(a)) continue;
      S ratio = at(r, cols_) / a;
      if (best == npos) {
        best = r;
        best_ratio = ratio;
        continue;
      }
      if constexpr (Ops::exact) {
        if (ratio < best_ratio || (ratio == best_ratio && basis_[r] < basis_[best])) {
          best = r;
          best_ratio = ratio;
        }
      } else {
        const double slack = 1e-12 * std::max(1.0, std::fabs(best_ratio));
        if (ratio < best_ratio - slack) {
          best = r;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + slack) {
          bool take = bland_mode_ ? basis_[r] < basis_[best] : a > at(best, col);
          if (take) {
            best = r;
            best_ratio = std::min(ratio, best_ratio);
          }
        }
      }
    }
    return best;
  }

  void pivot(std::size_t pr, std::size_t pc) {
    if constexpr (Ops::exact) {
      if (bit_size(at(pr, pc)) > bit_cap_)
        throw Error(ErrorKind::numeric_overflow_cap, "pivot exceeds " + std::to_string(bit_cap_) + " bits");
    }
    const S inv = S(1) / at(pr, pc);
    std::vector<std::size_t> nz;
    for (std::size_t c = 0; c < width_; ++c) {
      S& v = at(pr, c);
      if (Ops::zero(v)) {
        if constexpr (!Ops::exact) v = 0.0;
        continue;
      }
      v *= inv;
      nz.push_back(c);
    }
    at(pr, pc) = S(1);

    const long long nrows = static_cast<long long>(rows_);
#pragma omp parallel for schedule(static) if (nrows * static_cast<long long>(nz.size()) > 200000)
    for (long long ri = 0; ri < nrows; ++ri) {
      const std::size_t r = static_cast<std::size_t>(ri);
      if (r == pr) continue;
      S f = at(r, pc);
      if (Ops::zero(f)) continue;
      eliminate(&t_[r * width_], &t_[pr * width_], f, nz);
      at(r, pc) = S(0);
    }
    S f = d_[pc];
    if (!Ops::zero(f)) {
      eliminate(d_.data(), &t_[pr * width_], f, nz);
      d_[pc] = S(0);
    }
    basis_[pr] = pc;
  }

  static void eliminate(S* target, const S* source, const S& f, const std::vector<std::size_t>& nz) {
    if constexpr (Ops::exact) {
      mpq_class tmp;
      for (std::size_t c : nz) {
        mpq_mul(tmp.get_mpq_t(), f.get_mpq_t(), source[c].get_mpq_t());
        mpq_sub(target[c].get_mpq_t(), target[c].get_mpq_t(), tmp.get_mpq_t());
      }
    } else {
      for (std::size_t c : nz) {
        double v = target[c] - f * source[c];
        target[c] = std::fabs(v) <= Ops::zero_tol ? 0.0 : v;
      }
    }
  }

  PhaseResult iterate(bool phase_two) {
    bland_mode_ = false;
    std::size_t degenerate_run = 0;
    for (;;) {
      if (iterations_ >= cap_) return PhaseResult::iteration_cap;
      std::size_t col = choose_entering(phase_two);
      if (col == npos) return PhaseResult::optimal;
      std::size_t row = choose_leaving(col);
      if (row == npos) {
        unbounded_col_ = col;
        return PhaseResult::unbounded;
      }
      if constexpr (!Ops::exact) {
        bool degenerate = at(row, cols_) <= Ops::zero_tol;
        degenerate_run = degenerate ? degenerate_run + 1 : 0;
        bland_mode_ = degenerate_run > 50;
        if (at(row, cols_) < 0.0) at(row, cols_) = 0.0;
      }
      pivot(row, col);
      ++iterations_;
    }
  }

  void drive_out_artificials() {
    for (std::size_t r = 0; r < rows_; ++r) {
      if (!sf_.artificial[basis_[r]]) continue;
      std::size_t best = npos;
      for (std::size_t c = 0; c < cols_; ++c) {
        if (sf_.artificial[c] || Ops::zero(at(r, c))) continue;
        if constexpr (Ops::exact) {
          best = c;
          break;
        } else {
          if (std::fabs(at(r, c)) > 1e-7 && (best == npos || std::fabs(at(r, c)) > std::fabs(at(r, best)))) best = c;
        }
      }
      // No candidate: the row is redundant and its artificial stays basic at 0.
      if (best != npos) {
        pivot(r, best);
        ++iterations_;
      }
    }
  }

  const StandardForm& sf_;
  std::size_t rows_, cols_, width_;
  std::size_t cap_;
  std::size_t bit_cap_;
  std::vector<S> t_;
  std::vector<S> d_;
  std::vector<std::size_t> basis_;
  std::size_t iterations_ = 0;
  std::size_t unbounded_col_ = npos;
  bool infeasible_ = false;
  bool bland_mode_ = false;
};

}  // namespace nsgame::detail
