#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nsgame/game.hpp"
#include "nsgame/rational.hpp"
#include "nsgame/report.hpp"
#include "nsgame/values.hpp"

namespace nsgame {

struct BoundReport {
  std::string game;
  std::size_t n = 0;
  Rational t;                // (v_ns + delta) n, before rounding up to a round count
  Rational delta;            // as requested
  Rational delta_used;       // after clamping to 1 - v_ns
  bool clamped = false;
  std::string warning;
  double bound = 0.0;        // rounded up
  double log_bound = 0.0;    // natural log, rounded up
  double mu = 0.0;           // inputs echoed from the constants
  double nu = 0.0;
  DeltaProvenance provenance = DeltaProvenance::hadamard;
  std::optional<Rational> target;
  bool vacuous = false;      // bound >= 1
  Verdict verdict = Verdict::pass;
};

/// 8 exp(-delta^4 mu n), delta clamped to 1 - v_ns. Errors: NonPositiveDelta,
/// NoCompleteSupport, invalid_argument for n = 0.
BoundReport concentration_bound(const Game& g, const Rational& delta, std::size_t n, const ConstantsReport& k);

/// 8 nu^n.
BoundReport pr_bound(const Game& g, std::size_t n, const ConstantsReport& k);

/// Smallest integer >= t.
std::size_t threshold_rounds(const Rational& t);

/// ns_value(threshold_repeat(g, n, t)). Thresholds t <= 0 and t > n give
/// 1 and 0 without building the program; otherwise the product of the base
/// game's NS witness is tried as a certificate before the simplex runs.
ValueResult exact_repeated_ns_value(const Game& g, std::size_t n, const Rational& t, const SolveOptions& options = {});

/// Attaches target = exact_repeated_ns_value(g, n, ceil((v_ns + delta) n))
/// to the concentration bound; verdict is target <= min(1, bound).
BoundReport ct_consistency(const Game& g, const Rational& delta, std::size_t n, const ConstantsReport& k);

struct MainLemmaReport {
  std::size_t n = 0;
  std::vector<std::size_t> s;  // conditioned rounds, 0-based
  std::string event;           // textual event, e.g. W1&W2
  Rational event_probability;
  Rational lhs;                // mean over V not in S of Pr[W_V = 1 | E]
  double rhs = 0.0;            // rounded up
  std::vector<Rational> per_round;  // Pr[W_V = 1 | E] for V not in S, in order
  std::optional<std::size_t> best_round;  // minimising V (corollary form)
  Rational best_value;
  Verdict verdict = Verdict::pass;
  std::string log_base = "2";
};

/// Exact verification for a strategy on G^n. The event is the conjunction of
/// per-round wins over `s`. Errors: ZeroProbabilityEvent, SignalingStrategy,
/// NoCompleteSupport, ShapeMismatch, IndexOutOfRange for rounds >= n.
/// S covering every round leaves no V and is reported vacuous.
MainLemmaReport verify_main_lemma(const Game& g, std::size_t n, const Strategy& strategy,
                                  const std::vector<std::size_t>& s, const ConstantsReport& k);

/// Same with an arbitrary event over the repeated cells (x, a), indexed by
/// GameShape::cell of the repeated shape.
MainLemmaReport verify_main_lemma(const Game& g, std::size_t n, const Strategy& strategy,
                                  const std::vector<std::size_t>& s, const std::vector<std::uint8_t>& event,
                                  const ConstantsReport& k);

/// Pr[W-bar = j/n] for j = 0..n under pi^n and the strategy.
std::vector<Rational> exact_win_fraction_distribution(const Game& g, std::size_t n, const Strategy& strategy);

}  // namespace nsgame
