#include "nsgame/dist.hpp"

#include <algorithm>
#include <string>

#include "nsgame/error.hpp"
#include "nsgame/rounding.hpp"

namespace nsgame {

JointDistribution::JointDistribution(std::vector<std::size_t> radices, std::vector<Rational> table)
    : index_(std::move(radices)), table_(std::move(table)) {
  if (table_.size() != index_.size()) throw Error(ErrorKind::shape_mismatch, "distribution table size mismatch");
  Rational total = 0;
  for (const auto& v : table_) {
    if (sgn(v) < 0) throw Error(ErrorKind::invalid_argument, "negative probability");
    total += v;
  }
  if (total != 1) throw Error(ErrorKind::sum_not_one, "distribution sums to " + to_string(total));
}

JointDistribution JointDistribution::uniform(std::vector<std::size_t> radices) {
  TupleIndexer idx(radices);
  Rational p(1, idx.size());
  p.canonicalize();
  return JointDistribution(std::move(radices), std::vector<Rational>(idx.size(), p));
}

JointDistribution JointDistribution::point_mass(std::vector<std::size_t> radices, std::size_t at) {
  TupleIndexer idx(radices);
  if (at >= idx.size()) throw Error(ErrorKind::index_out_of_range, "point mass index");
  std::vector<Rational> t(idx.size(), Rational(0));
  t[at] = 1;
  return JointDistribution(std::move(radices), std::move(t));
}

Rational probability(const JointDistribution& p, const Event& e) {
  if (e.indicator.size() != p.size()) throw Error(ErrorKind::shape_mismatch, "event size mismatch");
  Rational total = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (e.indicator[i]) total += p[i];
  return total;
}

Rational variational_distance(const JointDistribution& p, const JointDistribution& q) {
  if (p.radices() != q.radices()) throw Error(ErrorKind::shape_mismatch, "distributions over different spaces");
  Rational total = 0;
  for (std::size_t i = 0; i < p.size(); ++i) total += abs(p[i] - q[i]);
  return total / 2;
}

JointDistribution marginal(const JointDistribution& p, const std::vector<std::size_t>& keep) {
  if (keep.empty()) throw Error(ErrorKind::empty_subset, "marginal over no components");
  const auto& radices = p.radices();
  std::vector<bool> used(radices.size(), false);
  std::vector<std::size_t> out_radices;
  for (std::size_t c : keep) {
    if (c >= radices.size()) throw Error(ErrorKind::index_out_of_range, "component " + std::to_string(c));
    if (used[c]) throw Error(ErrorKind::invalid_argument, "component listed twice");
    used[c] = true;
    out_radices.push_back(radices[c]);
  }
  TupleIndexer out_idx(out_radices);
  std::vector<Rational> out(out_idx.size(), Rational(0));
  std::vector<std::size_t> digits(radices.size()), kept(keep.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (sgn(p[i]) == 0) continue;
    p.indexer().decode_into(i, digits);
    for (std::size_t k = 0; k < keep.size(); ++k) kept[k] = digits[keep[k]];
    out[out_idx.encode(kept)] += p[i];
  }
  return JointDistribution(std::move(out_radices), std::move(out));
}

JointDistribution condition(const JointDistribution& p, const Event& e) {
  Rational pe = probability(p, e);
  if (sgn(pe) == 0) throw Error(ErrorKind::zero_probability_event, "conditioning on a null event");
  std::vector<Rational> out(p.size(), Rational(0));
  for (std::size_t i = 0; i < p.size(); ++i)
    if (e.indicator[i]) out[i] = p[i] / pe;
  return JointDistribution(p.radices(), std::move(out));
}

JointDistribution conditionally_independent_joint(const JointDistribution& p_t, const std::vector<Kernel>& kernels,
                                                  std::size_t cap) {
  const std::size_t nt = p_t.size();
  std::vector<std::size_t> radices{nt};
  for (const auto& k : kernels) {
    if (k.t_size != nt || k.table.size() != k.t_size * k.u_size)
      throw Error(ErrorKind::shape_mismatch, "kernel does not match P_T");
    for (std::size_t t = 0; t < nt; ++t) {
      Rational row = 0;
      for (std::size_t u = 0; u < k.u_size; ++u) {
        if (sgn(k(t, u)) < 0) throw Error(ErrorKind::invalid_argument, "negative kernel entry");
        row += k(t, u);
      }
      if (row != 1) throw Error(ErrorKind::sum_not_one, "kernel row sums to " + to_string(row));
    }
    radices.push_back(k.u_size);
  }
  TupleIndexer idx(radices);
  checked_product(radices, cap);
  std::vector<Rational> table(idx.size());
  std::vector<std::size_t> digits(radices.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    idx.decode_into(i, digits);
    Rational v = p_t[digits[0]];
    for (std::size_t l = 0; l < kernels.size() && sgn(v) != 0; ++l) v *= kernels[l](digits[0], digits[l + 1]);
    table[i] = v;
  }
  return JointDistribution(std::move(radices), std::move(table));
}

HolensteinReport holenstein_gap(const JointDistribution& p_t, const std::vector<Kernel>& kernels, const Event& e,
                                std::size_t cap) {
  JointDistribution joint = conditionally_independent_joint(p_t, kernels, cap);
  HolensteinReport rep;
  rep.event_probability = probability(joint, e);
  if (sgn(rep.event_probability) == 0) throw Error(ErrorKind::zero_probability_event, "Pr[e] = 0");
  JointDistribution cond = condition(joint, e);
  JointDistribution t_given_e = marginal(cond, {0});
  rep.lhs = 0;
  for (std::size_t l = 0; l < kernels.size(); ++l) {
    JointDistribution tu = marginal(cond, {0, l + 1});
    const Kernel& k = kernels[l];
    std::vector<Rational> ref(tu.size());
    for (std::size_t t = 0; t < k.t_size; ++t)
      for (std::size_t u = 0; u < k.u_size; ++u) ref[t + u * k.t_size] = t_given_e[t] * k(t, u);
    rep.lhs += variational_distance(tu, JointDistribution(tu.radices(), std::move(ref)));
  }
  Rational inv = 1 / rep.event_probability;
  double log_term = log2_up(inv);
  rep.rhs = rounding::sqrt_up(rounding::mul_up(static_cast<double>(kernels.size()), log_term));
  rep.holds = rep.lhs <= from_double(rep.rhs);
  return rep;
}

double hoeffding_bound(double epsilon, std::int64_t k) {
  if (!(epsilon > 0.0)) throw Error(ErrorKind::non_positive_epsilon, "epsilon must be > 0");
  if (k < 1) throw Error(ErrorKind::invalid_argument, "K must be >= 1");
  double exponent = rounding::mul_down(rounding::mul_down(2.0 * epsilon, epsilon), static_cast<double>(k));
  return std::min(1.0, rounding::exp_up(-exponent));
}

double azuma_bound(double epsilon, std::int64_t k) {
  if (epsilon < 0.0) throw Error(ErrorKind::non_positive_epsilon, "epsilon must be >= 0");
  if (k < 1) throw Error(ErrorKind::invalid_argument, "K must be >= 1");
  double exponent = rounding::mul_down(rounding::mul_down(epsilon, epsilon), static_cast<double>(k)) / 2.0;
  return std::min(1.0, rounding::exp_up(-exponent));
}

}  // namespace nsgame
