#pragma once

#include <string>

#include "nsgame/rational.hpp"

namespace nsgame {

enum class Round { up, down };

/// Float literal tagged with its rounding direction: `~up:1.2500000000000002e-01`.
std::string float_literal(double v, Round dir);

enum class Verdict { pass, fail, vacuous };

std::string to_string(Verdict v);

/// A verdict only fails on `fail`; vacuous checks hold trivially.
inline bool ok(Verdict v) { return v != Verdict::fail; }

/// `check <name> lhs=<p/q> rhs=<float> verdict=<pass|fail|vacuous>`
std::string machine_line(const std::string& name, const Rational& lhs, double rhs, Verdict v);

}  // namespace nsgame
