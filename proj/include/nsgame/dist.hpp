#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nsgame/rational.hpp"
#include "nsgame/tuple_index.hpp"

namespace nsgame {

/// Exact probability table over a product of finite components.
class JointDistribution {
 public:
  JointDistribution(std::vector<std::size_t> radices, std::vector<Rational> table);

  const TupleIndexer& indexer() const noexcept { return index_; }
  const std::vector<std::size_t>& radices() const noexcept { return index_.radices(); }
  const std::vector<Rational>& table() const noexcept { return table_; }
  const Rational& operator[](std::size_t i) const { return table_[i]; }
  std::size_t size() const noexcept { return table_.size(); }

  bool operator==(const JointDistribution& o) const { return radices() == o.radices() && table_ == o.table_; }

  static JointDistribution uniform(std::vector<std::size_t> radices);
  static JointDistribution point_mass(std::vector<std::size_t> radices, std::size_t at);

 private:
  TupleIndexer index_;
  std::vector<Rational> table_;
};

/// Indicator table over the same product space as a distribution.
struct Event {
  std::vector<std::uint8_t> indicator;

  static Event full(std::size_t size) { return Event{std::vector<std::uint8_t>(size, 1)}; }
};

Rational probability(const JointDistribution& p, const Event& e);

Rational variational_distance(const JointDistribution& p, const JointDistribution& q);

/// Keeps the listed components (in the given order) and sums out the rest.
JointDistribution marginal(const JointDistribution& p, const std::vector<std::size_t>& keep);

JointDistribution condition(const JointDistribution& p, const Event& e);

/// Conditional table P(u|t), row-major in t.
struct Kernel {
  std::size_t t_size = 0;
  std::size_t u_size = 0;
  std::vector<Rational> table;

  const Rational& operator()(std::size_t t, std::size_t u) const { return table[t * u_size + u]; }
};

/// P_T * prod_l P_{U_l|T} over components (T, U_1, ..., U_L).
JointDistribution conditionally_independent_joint(const JointDistribution& p_t, const std::vector<Kernel>& kernels,
                                                  std::size_t cap);

struct HolensteinReport {
  Rational lhs;
  double rhs = 0.0;  // rounded up
  Rational event_probability;
  bool holds = false;
};

/// Sum over l of || P_{T U_l | e} - P_{T|e} P_{U_l|T} || against
/// sqrt(L log2(1/Pr[e])). `e` indexes the joint built by
/// conditionally_independent_joint.
HolensteinReport holenstein_gap(const JointDistribution& p_t, const std::vector<Kernel>& kernels, const Event& e,
                                std::size_t cap = 10'000'000);

/// exp(-2 eps^2 K), rounded up. eps > 0, K >= 1.
double hoeffding_bound(double epsilon, std::int64_t k);

/// exp(-eps^2 K / 2), rounded up. eps >= 0, K >= 1.
double azuma_bound(double epsilon, std::int64_t k);

}  // namespace nsgame
