#include "nsgame/sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include "nsgame/dist.hpp"
#include "nsgame/error.hpp"
#include "nsgame/random_instances.hpp"
#include "nsgame/reptheory.hpp"
#include "nsgame/rounding.hpp"

namespace nsgame {

using u128 = unsigned __int128;

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SimConfig SimConfig::product_of(const Strategy& base, std::size_t n, std::uint64_t seed, std::size_t trials) {
  SimConfig cfg;
  cfg.seed = seed;
  cfg.trials = trials;
  cfg.n = n;
  cfg.strategy = product_strategy(base, n);
  cfg.source = "product-of-witness";
  return cfg;
}

Rational SimResult::mean() const {
  if (trials == 0 || n == 0) return Rational(0);
  BigInt won = 0;
  for (std::size_t j = 0; j < histogram.size(); ++j) won += BigInt(static_cast<unsigned long>(j)) * histogram[j];
  Rational r(won, BigInt(static_cast<unsigned long>(trials)) * static_cast<unsigned long>(n));
  r.canonicalize();
  return r;
}

Rational SimResult::tail(const Rational& threshold) const {
  if (trials == 0) return Rational(0);
  std::size_t hits = 0;
  for (std::size_t j = 0; j < histogram.size(); ++j) {
    Rational w(static_cast<unsigned long>(j), static_cast<unsigned long>(n));
    w.canonicalize();
    if (w > threshold) hits += histogram[j];
  }
  Rational r(static_cast<unsigned long>(hits), static_cast<unsigned long>(trials));
  r.canonicalize();
  return r;
}

namespace {

// ceil(c * 2^64) for c in [0, 1].
u128 scaled_threshold(const Rational& c) {
  BigInt num = c.get_num();
  num <<= 64;
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), c.get_den_mpz_t());
  BigInt hi = q >> 64;
  BigInt lo = q - (hi << 64);
  u128 v = static_cast<u128>(hi.get_ui()) << 64;
  // get_ui is 64 bits on LP64.
  return v | static_cast<u128>(lo.get_ui());
}

// Inverse-CDF tables: draw u uniform in [0, 2^64), take the first entry whose
// threshold exceeds u.
struct Sampler {
  std::vector<u128> x_cdf;
  std::vector<std::size_t> x_index;
  std::vector<std::size_t> row_begin;  // per repeated question
  std::vector<u128> a_cdf;
  std::vector<std::size_t> a_index;
  std::vector<std::size_t> xs, as;     // split_rounds tables
  std::size_t n = 0;

  Sampler(const Game& g, const SimConfig& cfg) : n(cfg.n) {
    const auto& shape = cfg.strategy.shape();
    if (!(shape == repeat_shape(g.shape(), cfg.n)))
      throw Error(ErrorKind::shape_mismatch, "strategy shape does not match the " + std::to_string(cfg.n) +
                                                 "-fold repetition of '" + g.name() + "'");
    xs = split_rounds(g.shape().question_sizes(), n);
    as = split_rounds(g.shape().answer_sizes(), n);
    Rational cum = 0;
    for (std::size_t x = 0; x < shape.num_questions(); ++x) {
      Rational p = 1;
      for (std::size_t l = 0; l < n; ++l) p *= g.pi(xs[x * n + l]);
      if (sgn(p) == 0) continue;
      cum += p;
      x_cdf.push_back(scaled_threshold(cum));
      x_index.push_back(x);
    }
    row_begin.assign(shape.num_questions() + 1, 0);
    for (std::size_t x = 0; x < shape.num_questions(); ++x) {
      row_begin[x] = a_cdf.size();
      Rational c = 0;
      for (std::size_t a = 0; a < shape.num_answers(); ++a) {
        const Rational& q = cfg.strategy(x, a);
        if (sgn(q) == 0) continue;
        c += q;
        a_cdf.push_back(scaled_threshold(c));
        a_index.push_back(a);
      }
    }
    row_begin[shape.num_questions()] = a_cdf.size();
  }

  static std::size_t pick(const u128* begin, const u128* end, std::uint64_t u) {
    return static_cast<std::size_t>(std::upper_bound(begin, end, static_cast<u128>(u)) - begin);
  }

  // Rounds won in one trial, as a bit mask over rounds.
  std::uint64_t play(std::mt19937_64& gen, const Game& g) const {
    const std::size_t x = x_index[pick(x_cdf.data(), x_cdf.data() + x_cdf.size(), gen())];
    const u128* rb = a_cdf.data() + row_begin[x];
    const u128* re = a_cdf.data() + row_begin[x + 1];
    const std::size_t a = a_index[row_begin[x] + pick(rb, re, gen())];
    std::uint64_t mask = 0;
    for (std::size_t l = 0; l < n; ++l)
      if (g.wins(xs[x * n + l], as[a * n + l])) mask |= std::uint64_t{1} << l;
    return mask;
  }
};

SimResult empty_result(const SimConfig& cfg) {
  if (cfg.trials == 0) throw Error(ErrorKind::invalid_argument, "trials must be >= 1");
  if (cfg.n == 0 || cfg.n > 63) throw Error(ErrorKind::invalid_argument, "n must be in 1..63");
  SimResult r;
  r.seed = cfg.seed;
  r.trials = cfg.trials;
  r.n = cfg.n;
  r.source = cfg.source;
  r.histogram.assign(cfg.n + 1, 0);
  r.round_wins.assign(cfg.n, 0);
  return r;
}

void record(std::uint64_t mask, std::size_t n, std::vector<std::size_t>& hist, std::vector<std::size_t>& rounds) {
  hist[static_cast<std::size_t>(std::popcount(mask))]++;
  for (std::size_t l = 0; l < n; ++l)
    if (mask & (std::uint64_t{1} << l)) rounds[l]++;
}

}  // namespace

SimResult simulate_serial(const Game& g, const SimConfig& cfg) {
  SimResult r = empty_result(cfg);
  Sampler sampler(g, cfg);
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    std::mt19937_64 gen(trial_seed(cfg.seed, t));
    record(sampler.play(gen, g), cfg.n, r.histogram, r.round_wins);
  }
  return r;
}

SimResult simulate(const Game& g, const SimConfig& cfg) {
  SimResult r = empty_result(cfg);
  Sampler sampler(g, cfg);
  const long long trials = static_cast<long long>(cfg.trials);
#pragma omp parallel
  {
    std::vector<std::size_t> hist(cfg.n + 1, 0), rounds(cfg.n, 0);
#pragma omp for schedule(static)
    for (long long t = 0; t < trials; ++t) {
      std::mt19937_64 gen(trial_seed(cfg.seed, static_cast<std::uint64_t>(t)));
      record(sampler.play(gen, g), cfg.n, hist, rounds);
    }
#pragma omp critical
    {
      for (std::size_t j = 0; j <= cfg.n; ++j) r.histogram[j] += hist[j];
      for (std::size_t l = 0; l < cfg.n; ++l) r.round_wins[l] += rounds[l];
    }
  }
  return r;
}

void write_histogram(std::ostream& out, const SimResult& r) {
  for (std::size_t j = 0; j < r.histogram.size(); ++j) {
    if (r.histogram[j] == 0) continue;
    // Unreduced j/n keeps one denominator per dump.
    out << "wbar " << j << "/" << r.n << " " << r.histogram[j] << "\n";
  }
}

Rational histogram_distance(const SimResult& r, const std::vector<Rational>& exact) {
  if (exact.size() != r.histogram.size())
    throw Error(ErrorKind::shape_mismatch, "exact distribution has " + std::to_string(exact.size()) + " buckets");
  Rational total = 0;
  for (std::size_t j = 0; j < exact.size(); ++j) {
    Rational emp(static_cast<unsigned long>(r.histogram[j]), static_cast<unsigned long>(r.trials));
    emp.canonicalize();
    total += abs(emp - exact[j]);
  }
  return total / 2;
}

namespace {

double standard_error_at(double p, std::size_t trials) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return rounding::sqrt_up(rounding::div_up(rounding::mul_up(p, 1.0 - p), static_cast<double>(trials)));
}

// frequency <= bound + 3 SE, with a bound of 1 or more counted vacuous.
Verdict tail_verdict(const Rational& frequency, double bound, double se) {
  if (bound >= 1.0) return Verdict::vacuous;
  const double limit = rounding::add_up(bound, rounding::mul_up(3.0, se));
  return frequency <= from_double(limit) ? Verdict::pass : Verdict::fail;
}

TailCheck finish(std::size_t hits, std::size_t trials, double bound) {
  TailCheck c;
  c.trials = trials;
  c.hits = hits;
  c.frequency = static_cast<double>(hits) / static_cast<double>(trials);
  c.bound = bound;
  c.standard_error = standard_error_at(std::min(bound, 1.0), trials);
  Rational f(static_cast<unsigned long>(hits), static_cast<unsigned long>(trials));
  f.canonicalize();
  c.verdict = tail_verdict(f, bound, c.standard_error);
  return c;
}

}  // namespace

std::vector<TailRow> empirical_tail_report(const SimResult& r, const Game& g, const ConstantsReport& k,
                                           const std::vector<Rational>& deltas) {
  std::vector<TailRow> rows;
  for (const auto& delta : deltas) {
    TailRow row;
    row.delta = delta;
    row.frequency = r.tail(k.v_ns + delta);
    row.ct_bound = concentration_bound(g, delta, r.n, k).bound;
    row.hoeffding = hoeffding_bound(to_double_down(delta), static_cast<std::int64_t>(r.n));
    row.standard_error = standard_error_at(std::min(row.ct_bound, 1.0), r.trials);
    row.verdict = tail_verdict(row.frequency, row.ct_bound, row.standard_error);
    row.hoeffding_verdict =
        tail_verdict(row.frequency, row.hoeffding, standard_error_at(std::min(row.hoeffding, 1.0), r.trials));
    rows.push_back(std::move(row));
  }
  return rows;
}

TailCheck sample_without_replacement_check(std::size_t word_length, std::size_t k, const Rational& epsilon,
                                           std::size_t trials, std::uint64_t seed) {
  if (k > word_length)
    throw Error(ErrorKind::k_too_large, "K = " + std::to_string(k) + " exceeds word length " + std::to_string(word_length));
  if (k == 0) throw Error(ErrorKind::invalid_argument, "K must be >= 1");
  if (trials == 0) throw Error(ErrorKind::invalid_argument, "trials must be >= 1");
  if (sgn(epsilon) <= 0) throw Error(ErrorKind::non_positive_epsilon, "epsilon must be > 0");
  const double bound = hoeffding_bound(to_double_down(epsilon), static_cast<std::int64_t>(k));
  // D-bar <= w-bar - eps  <=>  D n <= w K - eps K n.
  const Rational shift = epsilon * static_cast<unsigned long>(k) * static_cast<unsigned long>(word_length);
  std::size_t hits = 0;
  std::vector<std::uint8_t> word(word_length);
  std::vector<std::size_t> idx(word_length);
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 gen(trial_seed(seed, t));
    std::size_t w = 0;
    for (std::size_t i = 0; i < word_length; i += 64) {
      std::uint64_t bits = gen();
      for (std::size_t b = 0; b < 64 && i + b < word_length; ++b) {
        word[i + b] = static_cast<std::uint8_t>((bits >> b) & 1u);
        w += word[i + b];
      }
    }
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::size_t d = 0;
    for (std::size_t j = 0; j < k; ++j) {
      std::size_t pick = j + static_cast<std::size_t>(uniform_below(gen, word_length - j));
      std::swap(idx[j], idx[pick]);
      d += word[idx[j]];
    }
    Rational lhs(static_cast<unsigned long>(d * word_length));
    Rational rhs = Rational(static_cast<unsigned long>(w * k)) - shift;
    if (lhs <= rhs) ++hits;
  }
  return finish(hits, trials, bound);
}

TailCheck azuma_check(std::size_t k, const Rational& epsilon, const Rational& p, std::size_t trials,
                      std::uint64_t seed) {
  if (k == 0) throw Error(ErrorKind::invalid_argument, "K must be >= 1");
  if (trials == 0) throw Error(ErrorKind::invalid_argument, "trials must be >= 1");
  if (sgn(epsilon) < 0) throw Error(ErrorKind::non_positive_epsilon, "epsilon must be >= 0");
  if (sgn(p) <= 0 || p > 1) throw Error(ErrorKind::invalid_argument, "p must be in (0, 1]");
  const double bound = azuma_bound(to_double_down(epsilon), static_cast<std::int64_t>(k));
  const u128 full = scaled_threshold(p);
  const u128 half = scaled_threshold(p / 2);
  // M_K > eps K  <=>  sum B > (p + eps) K.
  const Rational target = (p + epsilon) * static_cast<unsigned long>(k);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 gen(trial_seed(seed, t));
    std::size_t sum = 0;
    for (std::size_t j = 0; j < k; ++j) {
      // M_{j} <= 0  <=>  sum <= p j
      const bool below = Rational(static_cast<unsigned long>(sum)) <= p * static_cast<unsigned long>(j);
      if (static_cast<u128>(gen()) < (below ? full : half)) ++sum;
    }
    if (Rational(static_cast<unsigned long>(sum)) > target) ++hits;
  }
  return finish(hits, trials, bound);
}

}  // namespace nsgame
