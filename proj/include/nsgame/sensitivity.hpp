#pragma once

#include <cstddef>
#include <vector>

#include "nsgame/error.hpp"
#include "nsgame/lp.hpp"
#include "nsgame/rational.hpp"

namespace nsgame {

inline constexpr std::size_t kDefaultDeltaSizeCap = 6;
inline constexpr std::size_t kDefaultDeltaBudget = 1'000'000;

/// Thrown when the submatrix count exceeds the enumeration budget; carries
/// the maximum over the submatrices examined before stopping.
class DeltaBudgetExceeded : public Error {
 public:
  DeltaBudgetExceeded(Rational partial, std::size_t examined, std::size_t total)
      : Error(ErrorKind::budget_exceeded, "examined " + std::to_string(examined) + " of " +
                                              std::to_string(total) + " submatrices"),
        partial_max(std::move(partial)),
        examined(examined) {}

  Rational partial_max;
  std::size_t examined;
};

/// Number of square submatrices of dimension 1..size_cap, saturating at
/// `saturate`.
std::size_t count_square_submatrices(std::size_t rows, std::size_t cols, std::size_t size_cap,
                                     std::size_t saturate);

/// max |(B^{-1})_ij| over nonsingular square submatrices B (arbitrary row and
/// column subsets) of dimension <= size_cap; 0 if none is nonsingular.
/// OpenMP-parallel over row subsets; the reduction is a max, so the result
/// does not depend on the schedule.
Rational sensitivity_delta_exact(const Matrix& a, std::size_t size_cap = kDefaultDeltaSizeCap,
                                 std::size_t budget = kDefaultDeltaBudget);

/// Single-threaded reference enumeration with the same contract.
Rational sensitivity_delta_exact_serial(const Matrix& a, std::size_t size_cap = kDefaultDeltaSizeCap,
                                        std::size_t budget = kDefaultDeltaBudget);

/// max |(B^{-1})_ij| for one square matrix via fraction-free Gauss-Jordan;
/// nullopt-like: returns -1 when B is singular.
Rational max_abs_inverse_entry(const Matrix& b);

/// Upper bound on the exact value for integer matrices:
/// h^(k-1) * (k-1)^((k-1)/2), k = min(rows, cols), h = max |entry|
/// (h = 1 for -1/0/1 matrices). Rounded up.
double sensitivity_delta_hadamard(const Matrix& a);

/// Natural log of the same bound (for dimensions where the bound overflows).
double sensitivity_delta_hadamard_log(const Matrix& a);

struct SensitivityReport {
  Rational value;      // optimum with the original rhs
  Rational value_alt;  // optimum with the perturbed rhs
  Rational diff;       // |value_alt - value|
  Rational bound;      // n * delta * ||c||_1 * ||b'' - b'||_inf
  bool holds = false;
};

/// Solves the program with its own rhs and with `b_alt` (one entry per row)
/// and compares the change with the sensitivity bound. Throws
/// Error(invalid_argument) if either program is not finite-optimal.
SensitivityReport sensitivity_check(const LinearProgram& lp, const std::vector<Rational>& b_alt,
                                    const Rational& delta);

}  // namespace nsgame
