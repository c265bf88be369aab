#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "nsgame/dist.hpp"
#include "nsgame/lp.hpp"
#include "nsgame/rational.hpp"

namespace nsgame {

/// Uniform in [0, range) by rejection; independent of the standard library's
/// distribution implementations so instances are portable.
std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t range);

/// Integer weights in 0..max_weight, normalised (retried until nonzero).
JointDistribution random_distribution(std::mt19937_64& gen, std::vector<std::size_t> radices,
                                      std::uint64_t max_weight = 9);

struct HolensteinInstance {
  JointDistribution p_t;
  std::vector<Kernel> kernels;
  Event event;  // over conditionally_independent_joint(p_t, kernels)
};

/// T and each U_l over 1..max_symbols symbols, L in 1..max_l, event with
/// positive probability.
HolensteinInstance random_holenstein_instance(std::mt19937_64& gen, std::size_t max_symbols = 3,
                                              std::size_t max_l = 3);

/// max c.x s.t. A x <= b, x free; entries of A and c in {-1, 0, 1}, b in -3..3.
/// May be infeasible or unbounded.
LinearProgram random_small_lp(std::mt19937_64& gen, std::size_t max_vars = 5, std::size_t max_rows = 8);

/// Random rational in [-limit, limit] with denominator dividing `den`.
Rational random_perturbation(std::mt19937_64& gen, const Rational& limit, std::uint64_t den = 100);

}  // namespace nsgame
