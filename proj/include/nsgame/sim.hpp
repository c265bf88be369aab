#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nsgame/game.hpp"
#include "nsgame/rational.hpp"
#include "nsgame/report.hpp"
#include "nsgame/values.hpp"

namespace nsgame {

/// Recorded in every report header.
inline constexpr const char* kGeneratorName = "mt19937_64/splitmix64(seed,trial)";

/// Per-trial 64-bit seed: splitmix64 finaliser over (seed, trial).
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

struct SimConfig {
  std::uint64_t seed = 1;
  std::size_t trials = 100000;
  std::size_t n = 1;
  Strategy strategy;             // on the n-fold repetition
  std::string source = "table";  // "product-of-witness" or "table"

  /// Plays `base` independently in each of n rounds.
  static SimConfig product_of(const Strategy& base, std::size_t n, std::uint64_t seed, std::size_t trials);
};

struct SimResult {
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t n = 0;
  std::string source;
  std::vector<std::size_t> histogram;     // trials with W-bar = j/n, j = 0..n
  std::vector<std::size_t> round_wins;    // per round

  Rational mean() const;
  /// Fraction of trials with W-bar > threshold.
  Rational tail(const Rational& threshold) const;
  bool operator==(const SimResult&) const = default;
};

/// OpenMP over trials; identical output for any thread count.
SimResult simulate(const Game& g, const SimConfig& cfg);
SimResult simulate_serial(const Game& g, const SimConfig& cfg);

/// `wbar p/q count` per nonempty bucket.
void write_histogram(std::ostream& out, const SimResult& r);

/// Total variation between the empirical W-bar histogram and an exact
/// distribution over j = 0..n.
Rational histogram_distance(const SimResult& r, const std::vector<Rational>& exact);

struct TailRow {
  Rational delta;
  Rational frequency;        // empirical Pr[W-bar > v_ns + delta]
  double ct_bound = 0.0;     // 8 exp(-delta^4 mu n), rounded up
  double hoeffding = 0.0;    // exp(-2 delta^2 n), rounded up
  double standard_error = 0.0;
  Verdict verdict = Verdict::pass;            // frequency <= ct_bound + 3 SE
  Verdict hoeffding_verdict = Verdict::pass;  // frequency <= hoeffding + 3 SE
};

std::vector<TailRow> empirical_tail_report(const SimResult& r, const Game& g, const ConstantsReport& k,
                                           const std::vector<Rational>& deltas);

struct TailCheck {
  std::size_t trials = 0;
  std::size_t hits = 0;
  double frequency = 0.0;
  double bound = 0.0;
  double standard_error = 0.0;  // at the bound's probability
  Verdict verdict = Verdict::pass;
};

/// Random fair 0/1 words of length n, K positions drawn without replacement:
/// frequency of D-bar <= w-bar - eps against exp(-2 eps^2 K).
/// Errors: KTooLarge (K > n), NonPositiveEpsilon, invalid_argument (K = 0).
TailCheck sample_without_replacement_check(std::size_t word_length, std::size_t k, const Rational& epsilon,
                                           std::size_t trials, std::uint64_t seed);

/// Supermartingale M_k = sum_j (B_j - p), B_j ~ Bernoulli(q_j) with q_j = p
/// while M_{j-1} <= 0 and p/2 otherwise: frequency of M_K > eps K against
/// exp(-eps^2 K / 2).
TailCheck azuma_check(std::size_t k, const Rational& epsilon, const Rational& p, std::size_t trials,
                      std::uint64_t seed);

}  // namespace nsgame
