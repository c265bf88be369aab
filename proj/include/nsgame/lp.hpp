#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nsgame/rational.hpp"

namespace nsgame {

enum class RowSense { le, eq, ge };

struct LpTerm {
  std::size_t var;
  Rational coef;
};

struct LpRow {
  std::vector<LpTerm> terms;
  RowSense sense = RowSense::le;
  Rational rhs;
};

/// maximize objective . x subject to rows; each variable is either free or
/// bounded below by zero.
struct LinearProgram {
  std::size_t num_vars = 0;
  std::vector<Rational> objective;
  std::vector<LpRow> rows;
  std::vector<bool> nonnegative;

  explicit LinearProgram(std::size_t n = 0) : num_vars(n), objective(n, Rational(0)), nonnegative(n, false) {}

  std::size_t add_row(std::vector<LpTerm> terms, RowSense sense, Rational rhs);
  void validate() const;
};

enum class LpStatus { optimal, infeasible, unbounded };
enum class SolvePath { exact_simplex, float_guided, certificate };

std::string to_string(LpStatus s);

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Rational value;
  std::vector<Rational> point;
  /// Row duals (max-form sign convention: >= 0 on le rows, <= 0 on ge rows).
  /// Together with `point` this certifies optimality.
  std::vector<Rational> dual;
  /// Basic columns of the internal standard form at termination.
  std::vector<std::size_t> basis;
  std::size_t iterations = 0;
  SolvePath path = SolvePath::exact_simplex;
};

struct SolveOptions {
  /// Tableaux with at most this many cells go straight to the exact solver.
  std::size_t exact_cell_limit = 200'000;
  /// Bit size (numerator + denominator) of a pivot beyond which the exact
  /// solver gives up with NumericOverflowCap.
  std::size_t bit_cap = 1u << 16;
  /// Overrides the default 10 * (rows + cols)^2 iteration limit when nonzero.
  std::size_t iteration_cap = 0;
  /// Denominator bound for rational reconstruction of float solutions.
  std::int64_t max_denominator = 1'000'000'000;
};

/// Exact optimum. Small programs use the rational tableau simplex with the
/// smallest-index rule; larger ones are guided by a double-precision run whose
/// primal/dual pair is reconstructed as rationals and certified exactly. If
/// certification fails the exact solver runs from scratch.
LpSolution solve(const LinearProgram& lp, const SolveOptions& options = {});
/// As above; when the float vertex does not snap, `primal_hint` (a known
/// feasible point) is paired with the reconstructed dual instead.
LpSolution solve(const LinearProgram& lp, const SolveOptions& options, const std::vector<Rational>& primal_hint);

/// Rational tableau simplex, smallest-index (Bland) pivoting throughout.
LpSolution solve_exact(const LinearProgram& lp, const SolveOptions& options = {});

/// Double-precision estimate only; never used for verdicts.
double solve_estimate(const LinearProgram& lp, LpStatus* status = nullptr);

/// Optimal solution from a caller-supplied primal point and dual vector,
/// when both pass the exact checks and their objectives agree; nullopt
/// otherwise. No pivoting.
std::optional<LpSolution> certify(const LinearProgram& lp, std::vector<Rational> point, std::vector<Rational> dual);

/// Default iteration limit 10 * (rows + cols)^2 of the internal standard form.
std::size_t default_iteration_cap(const LinearProgram& lp);

/// Exact checks of an optimal solution.
bool verify_primal(const LinearProgram& lp, const LpSolution& sol);
bool verify_dual(const LinearProgram& lp, const LpSolution& sol);

/// Dual program written as a maximisation of -b.y; its optimum is the
/// negated primal optimum.
LinearProgram dual_program(const LinearProgram& lp);

/// Dense rational matrix, row-major.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Rational> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, Rational(0)) {}
  Rational& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// max{c x : A x <= b} form: equality rows become row pairs, >= rows are
/// negated, and nonnegativity bounds become -x_j <= 0 rows.
struct InequalityForm {
  Matrix a;
  std::vector<Rational> b;
  /// For each row of `a`, the index of the originating LinearProgram row, or
  /// rows.size() + j for the bound row of variable j.
  std::vector<std::size_t> origin;
};

InequalityForm inequality_form(const LinearProgram& lp);

/// Text dump (objective / subject to / bounds sections) with p/q coefficients.
void write_lp_text(std::ostream& out, const LinearProgram& lp, const std::string& name = "nsgame");

}  // namespace nsgame
