#include "nsgame/random_instances.hpp"

#include <limits>

namespace nsgame {

std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t range) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % range;
  for (;;) {
    std::uint64_t v = gen();
    if (v < limit) return v % range;
  }
}

JointDistribution random_distribution(std::mt19937_64& gen, std::vector<std::size_t> radices,
                                      std::uint64_t max_weight) {
  std::size_t size = 1;
  for (auto r : radices) size *= r;
  std::vector<std::uint64_t> w(size);
  std::uint64_t total = 0;
  while (total == 0) {
    total = 0;
    for (auto& v : w) {
      v = uniform_below(gen, max_weight + 1);
      total += v;
    }
  }
  std::vector<Rational> table;
  table.reserve(size);
  for (auto v : w) {
    Rational r(static_cast<unsigned long>(v), static_cast<unsigned long>(total));
    r.canonicalize();
    table.push_back(r);
  }
  return JointDistribution(std::move(radices), std::move(table));
}

HolensteinInstance random_holenstein_instance(std::mt19937_64& gen, std::size_t max_symbols, std::size_t max_l) {
  const std::size_t t_size = 1 + uniform_below(gen, max_symbols);
  const std::size_t l = 1 + uniform_below(gen, max_l);
  JointDistribution p_t = random_distribution(gen, {t_size});
  std::vector<Kernel> kernels;
  std::size_t joint = t_size;
  for (std::size_t i = 0; i < l; ++i) {
    Kernel k;
    k.t_size = t_size;
    k.u_size = 1 + uniform_below(gen, max_symbols);
    for (std::size_t t = 0; t < t_size; ++t) {
      JointDistribution row = random_distribution(gen, {k.u_size});
      k.table.insert(k.table.end(), row.table().begin(), row.table().end());
    }
    joint *= k.u_size;
    kernels.push_back(std::move(k));
  }
  JointDistribution full = conditionally_independent_joint(p_t, kernels, 10'000'000);
  Event e;
  for (;;) {
    e.indicator.assign(joint, 0);
    for (auto& b : e.indicator) b = static_cast<std::uint8_t>(uniform_below(gen, 2));
    if (sgn(probability(full, e)) > 0) break;
  }
  return HolensteinInstance{std::move(p_t), std::move(kernels), std::move(e)};
}

LinearProgram random_small_lp(std::mt19937_64& gen, std::size_t max_vars, std::size_t max_rows) {
  const std::size_t n = 1 + uniform_below(gen, max_vars);
  const std::size_t m = 1 + uniform_below(gen, max_rows);
  LinearProgram lp(n);
  for (std::size_t j = 0; j < n; ++j) lp.objective[j] = static_cast<long>(uniform_below(gen, 3)) - 1;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<LpTerm> terms;
    for (std::size_t j = 0; j < n; ++j) {
      long v = static_cast<long>(uniform_below(gen, 3)) - 1;
      if (v != 0) terms.push_back({j, Rational(v)});
    }
    lp.add_row(std::move(terms), RowSense::le, Rational(static_cast<long>(uniform_below(gen, 7)) - 3));
  }
  return lp;
}

Rational random_perturbation(std::mt19937_64& gen, const Rational& limit, std::uint64_t den) {
  // Uniform over the grid {k / den} intersected with [-limit, limit].
  Rational scaled = limit * static_cast<unsigned long>(den);
  BigInt top;
  mpz_fdiv_q(top.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  const std::uint64_t span = 2 * top.get_ui() + 1;
  long k = static_cast<long>(uniform_below(gen, span)) - static_cast<long>(top.get_ui());
  Rational r(k, static_cast<unsigned long>(den));
  r.canonicalize();
  return r;
}

}  // namespace nsgame
