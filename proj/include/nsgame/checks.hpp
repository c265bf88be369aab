#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "nsgame/game.hpp"
#include "nsgame/rational.hpp"
#include "nsgame/report.hpp"
#include "nsgame/values.hpp"

namespace nsgame {

struct CheckLine {
  std::string name;  // single token, usable in the machine line
  Rational lhs;
  double rhs = 0.0;  // rounded up
  Verdict verdict = Verdict::pass;
  std::string note;
};

struct SuiteOptions {
  std::size_t n = 2;
  std::uint64_t seed = 1;
  std::size_t trials = 100000;
  DeltaMode delta_mode = DeltaMode::hadamard();
};

/// robustness | sandwich | main-lemma | dist | all. Unknown names throw
/// Error(unknown_name).
std::vector<CheckLine> run_suite(const std::string& suite, const Game& g, const SuiteOptions& options = {});

const std::vector<std::string>& suite_names();

/// lhs <= rhs with rhs >= 1 reported vacuous (lhs is a probability).
Verdict probability_verdict(const Rational& lhs, double rhs_up);

}  // namespace nsgame
