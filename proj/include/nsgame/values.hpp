#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nsgame/game.hpp"
#include "nsgame/lp.hpp"
#include "nsgame/rational.hpp"
#include "nsgame/sensitivity.hpp"

namespace nsgame {

enum class ValueKind { classical, ns, almost_ns };

std::string to_string(ValueKind kind);

struct ValueResult {
  Rational value;
  Strategy witness;
  ValueKind kind = ValueKind::ns;
  Rational slack;  // epsilon for almost_ns, otherwise 0
};

/// Nonempty proper player subsets I as sorted index lists, in bitmask order.
std::vector<std::vector<std::size_t>> signaling_subsets(std::size_t players);

inline constexpr std::size_t kDefaultClassicalCap = 10'000'000;

/// Number of deterministic local strategy tuples, prod_i |A_i|^|X_i|
/// (saturating at cap + 1).
std::size_t deterministic_tuple_count(const GameShape& shape, std::size_t cap);

/// Exact maximum over deterministic local tuples (f_1, ..., f_m). OpenMP over
/// tuple ranges; ties go to the smallest tuple encoding.
ValueResult classical_value(const Game& g, std::size_t cap = kDefaultClassicalCap);

/// Single-threaded reference enumeration.
ValueResult classical_value_serial(const Game& g, std::size_t cap = kDefaultClassicalCap);

/// True iff every row is a point mass and player i's answer depends only on x_i.
bool is_deterministic_local(const Strategy& s);

enum class NsRows {
  /// Slack 0: each marginal equated to the one at x'_J = (0, ..., 0).
  canonical_reference,
  /// Every pair (x_J, x'_J): equalities for slack 0, ordered-pair
  /// inequalities |diff| <= slack otherwise.
  all_pairs,
};

/// Variables are q(a|x) at GameShape::cell(x, a), all nonnegative. Rows:
/// one normalisation per x, then the non-signaling rows per subset I.
/// A positive slack always uses all ordered pairs.
LinearProgram build_ns_lp(const Game& g, const Rational& slack = Rational(0),
                          NsRows rows = NsRows::canonical_reference);

/// Index of the first non-signaling row in build_ns_lp output.
inline std::size_t first_signaling_row(const Game& g) { return g.shape().num_questions(); }

ValueResult ns_value(const Game& g, const SolveOptions& options = {});
ValueResult ns_value(const Game& g, NsRows rows, const SolveOptions& options = {});
/// Tries `hint` first: if it reaches the trivial upper bound
/// sum_x pi(x) max_a V(x,a), the bound's dual certifies it exactly and no
/// simplex runs. Otherwise falls back to ns_value.
ValueResult ns_value_with_hint(const Game& g, const Strategy& hint, const SolveOptions& options = {});
ValueResult almost_ns_value(const Game& g, const Rational& epsilon, const SolveOptions& options = {});

struct SignalingReport {
  Rational epsilon;
  std::vector<std::size_t> subset;  // I (0-based players)
  std::size_t a_i = 0;              // flat index over A_I
  std::size_t x_i = 0;              // flat index over X_I
  std::size_t x_j = 0;              // flat index over X_J
  std::size_t x_j_prime = 0;
};

/// Exact max over I, a_I, x_I and pairs (x_J, x'_J) of the marginal
/// difference. Zero for 1-player shapes.
SignalingReport signaling_epsilon(const Strategy& s);

enum class DeltaProvenance { exact, hadamard };

std::string to_string(DeltaProvenance p);

struct DeltaMode {
  bool exact = false;
  std::size_t size_cap = kDefaultDeltaSizeCap;
  std::size_t budget = kDefaultDeltaBudget;

  static DeltaMode hadamard() { return DeltaMode{}; }
  static DeltaMode exact_mode(std::size_t cap, std::size_t budget = kDefaultDeltaBudget) {
    return DeltaMode{true, cap, budget};
  }
};

/// Floats are outward-rounded in the direction that keeps downstream bounds
/// sound: c, c' and nu rounded up, mu rounded down. Each also has a natural
/// log so that values far outside double range stay usable.
struct ConstantsReport {
  std::string game;
  std::size_t players = 0;
  std::size_t num_questions = 0;  // |X|
  std::size_t num_answers = 0;    // |A|
  Rational pi_min;
  Rational v_ns;
  DeltaProvenance delta_provenance = DeltaProvenance::hadamard;
  std::optional<Rational> delta_exact;
  std::string delta_note;  // why exact mode fell back, if it did
  std::size_t matrix_rows = 0, matrix_cols = 0;
  double delta = 0.0, log_delta = 0.0;
  double c = 0.0, log_c = 0.0;
  double c_prime = 0.0, log_c_prime = 0.0;
  double mu = 0.0, log_mu = 0.0;
  double nu = 0.0, log_nu = 0.0;
  double one_minus_nu = 0.0;  // rounded down
};

/// Upper bound on c * eps, eps >= 0.
double c_times_up(const ConstantsReport& k, const Rational& eps);

/// Requires complete support (Error no_complete_support otherwise). `v_ns`
/// may be supplied to skip the LP solve.
ConstantsReport constants(const Game& g, const DeltaMode& mode = DeltaMode::hadamard(),
                          const std::optional<Rational>& v_ns = std::nullopt);

}  // namespace nsgame
