#include "nsgame/reptheory.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "nsgame/error.hpp"
#include "nsgame/rounding.hpp"

namespace nsgame {

namespace {

void require_complete_support(const Game& g) {
  if (!has_complete_support(g).complete)
    throw Error(ErrorKind::no_complete_support, "game '" + g.name() + "' has pi(x) = 0 somewhere");
}

const double kLn8Up = rounding::up(std::log(8.0));

}  // namespace

std::size_t threshold_rounds(const Rational& t) {
  if (sgn(t) <= 0) return 0;
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
  return q.get_ui();
}

BoundReport concentration_bound(const Game& g, const Rational& delta, std::size_t n, const ConstantsReport& k) {
  if (n == 0) throw Error(ErrorKind::invalid_argument, "n must be >= 1");
  if (sgn(delta) <= 0) throw Error(ErrorKind::non_positive_delta, "delta must be > 0, got " + to_string(delta));
  require_complete_support(g);
  BoundReport r;
  r.game = g.name();
  r.n = n;
  r.delta = delta;
  r.mu = k.mu;
  r.nu = k.nu;
  r.provenance = k.delta_provenance;
  const Rational gap = 1 - k.v_ns;
  r.delta_used = delta;
  if (delta > gap) {
    r.delta_used = gap;
    r.clamped = true;
    r.warning = "delta " + to_string(delta) + " clamped to 1 - v_ns = " + to_string(gap);
  }
  r.t = (k.v_ns + delta) * static_cast<unsigned long>(n);

  Rational d4n = r.delta_used * r.delta_used * r.delta_used * r.delta_used * static_cast<unsigned long>(n);
  double exponent = 0.0;  // lower bound on delta^4 mu n
  if (sgn(d4n) > 0) {
    const double lo = to_double_down(d4n);
    if (lo > 0.0) exponent = rounding::exp_down(rounding::down(rounding::log_down(lo) + k.log_mu));
  }
  r.log_bound = rounding::add_up(kLn8Up, -exponent);
  r.bound = rounding::exp_up(r.log_bound);
  r.vacuous = r.bound >= 1.0;
  r.verdict = r.vacuous ? Verdict::vacuous : Verdict::pass;
  return r;
}

BoundReport pr_bound(const Game& g, std::size_t n, const ConstantsReport& k) {
  if (n == 0) throw Error(ErrorKind::invalid_argument, "n must be >= 1");
  require_complete_support(g);
  BoundReport r;
  r.game = g.name();
  r.n = n;
  r.mu = k.mu;
  r.nu = k.nu;
  r.provenance = k.delta_provenance;
  r.t = Rational(static_cast<unsigned long>(n));
  r.log_bound = rounding::add_up(kLn8Up, rounding::mul_up(static_cast<double>(n), k.log_nu));
  r.bound = rounding::exp_up(r.log_bound);
  r.vacuous = r.bound >= 1.0;
  r.verdict = r.vacuous ? Verdict::vacuous : Verdict::pass;
  return r;
}

ValueResult exact_repeated_ns_value(const Game& g, std::size_t n, const Rational& t, const SolveOptions& options) {
  if (n == 0) throw Error(ErrorKind::invalid_argument, "n must be >= 1");
  ValueResult base = ns_value(g, options);
  Strategy hint = product_strategy(base.witness, n);
  const std::size_t rounds = threshold_rounds(t);
  // Constant predicates: every strategy attains the same value.
  if (rounds == 0) return ValueResult{Rational(1), std::move(hint), ValueKind::ns, Rational(0)};
  if (rounds > n) return ValueResult{Rational(0), std::move(hint), ValueKind::ns, Rational(0)};
  Game rep = threshold_repeat(g, n, Rational(static_cast<unsigned long>(rounds)));
  return ns_value_with_hint(rep, hint, options);
}

BoundReport ct_consistency(const Game& g, const Rational& delta, std::size_t n, const ConstantsReport& k) {
  BoundReport r = concentration_bound(g, delta, n, k);
  ValueResult v = exact_repeated_ns_value(g, n, Rational(static_cast<unsigned long>(threshold_rounds(r.t))));
  r.target = v.value;
  const Rational cap = r.bound >= 1.0 ? Rational(1) : from_double(r.bound);
  if (v.value > cap)
    r.verdict = Verdict::fail;
  else
    r.verdict = r.vacuous ? Verdict::vacuous : Verdict::pass;
  return r;
}

namespace {

struct JointScan {
  Rational event_probability;
  std::vector<Rational> won_and_event;  // per round
};

// Walks every (x, a) of the repeated game with positive weight.
template <typename InEvent>
JointScan scan_joint(const Game& g, std::size_t n, const Strategy& strategy, InEvent in_event) {
  const auto& base = g.shape();
  const auto& shape = strategy.shape();
  auto xs = split_rounds(base.question_sizes(), n);
  auto as = split_rounds(base.answer_sizes(), n);
  std::vector<Rational> pi_n(shape.num_questions());
  for (std::size_t x = 0; x < shape.num_questions(); ++x) {
    Rational p = 1;
    for (std::size_t l = 0; l < n; ++l) p *= g.pi(xs[x * n + l]);
    pi_n[x] = p;
  }
  JointScan out;
  out.event_probability = 0;
  out.won_and_event.assign(n, Rational(0));
  Rational p;
  for (std::size_t x = 0; x < shape.num_questions(); ++x) {
    if (sgn(pi_n[x]) == 0) continue;
    for (std::size_t a = 0; a < shape.num_answers(); ++a) {
      const Rational& q = strategy(x, a);
      if (sgn(q) == 0) continue;
      std::uint64_t mask = 0;
      for (std::size_t l = 0; l < n; ++l)
        if (g.wins(xs[x * n + l], as[a * n + l])) mask |= std::uint64_t{1} << l;
      if (!in_event(shape.cell(x, a), mask)) continue;
      p = pi_n[x] * q;
      out.event_probability += p;
      for (std::size_t l = 0; l < n; ++l)
        if (mask & (std::uint64_t{1} << l)) out.won_and_event[l] += p;
    }
  }
  return out;
}

void check_repeated_strategy(const Game& g, std::size_t n, const Strategy& strategy) {
  if (n == 0) throw Error(ErrorKind::invalid_argument, "n must be >= 1");
  if (n > 63) throw Error(ErrorKind::cap_exceeded, "at most 63 rounds are supported");
  if (!(strategy.shape() == repeat_shape(g.shape(), n)))
    throw Error(ErrorKind::shape_mismatch, "strategy shape does not match the " + std::to_string(n) + "-fold repetition");
}

std::vector<std::size_t> normalise_rounds(const std::vector<std::size_t>& s, std::size_t n) {
  std::vector<std::size_t> out = s;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (std::size_t v : out)
    if (v >= n) throw Error(ErrorKind::index_out_of_range, "round " + std::to_string(v + 1) + " > n");
  return out;
}

template <typename InEvent>
MainLemmaReport main_lemma_core(const Game& g, std::size_t n, const Strategy& strategy, std::vector<std::size_t> s,
                                std::string event_text, const ConstantsReport& k, InEvent in_event) {
  check_repeated_strategy(g, n, strategy);
  require_complete_support(g);
  SignalingReport sig = signaling_epsilon(strategy);
  if (sgn(sig.epsilon) != 0)
    throw Error(ErrorKind::signaling_strategy, "strategy signals with epsilon " + to_string(sig.epsilon));

  MainLemmaReport r;
  r.n = n;
  r.s = std::move(s);
  r.event = std::move(event_text);
  JointScan scan = scan_joint(g, n, strategy, in_event);
  if (sgn(scan.event_probability) == 0) throw Error(ErrorKind::zero_probability_event, "Pr[E] = 0 for " + r.event);
  r.event_probability = scan.event_probability;

  std::vector<bool> in_s(n, false);
  for (std::size_t v : r.s) in_s[v] = true;
  const std::size_t free_rounds = n - r.s.size();
  if (free_rounds == 0) {
    r.lhs = 0;
    r.rhs = to_double_up(k.v_ns);
    r.verdict = Verdict::vacuous;
    return r;
  }
  Rational sum = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (in_s[v]) continue;
    Rational c = scan.won_and_event[v] / scan.event_probability;
    if (!r.best_round || c < r.best_value) {
      r.best_round = v;
      r.best_value = c;
    }
    sum += c;
    r.per_round.push_back(std::move(c));
  }
  r.lhs = sum / static_cast<unsigned long>(free_rounds);

  using namespace rounding;
  double term = 0.0;
  if (scan.event_probability != 1) {
    const double bits = log2_up(1 / scan.event_probability);
    const double root = sqrt_up(div_up(bits, static_cast<double>(free_rounds)));
    if (root > 0.0) term = exp_up(add_up(k.log_c_prime, log_up(root)));
  }
  r.rhs = add_up(to_double_up(k.v_ns), term);
  // lhs is a probability, so rhs >= 1 holds trivially.
  if (r.rhs >= 1.0)
    r.verdict = Verdict::vacuous;
  else
    r.verdict = r.lhs > from_double(r.rhs) ? Verdict::fail : Verdict::pass;
  return r;
}

std::string conjunction_text(const std::vector<std::size_t>& s) {
  if (s.empty()) return "true";
  std::string t;
  for (std::size_t v : s) t += (t.empty() ? "" : "&") + std::string("W") + std::to_string(v + 1);
  return t;
}

}  // namespace

MainLemmaReport verify_main_lemma(const Game& g, std::size_t n, const Strategy& strategy,
                                  const std::vector<std::size_t>& s, const ConstantsReport& k) {
  auto rounds = normalise_rounds(s, n);
  std::uint64_t need = 0;
  for (std::size_t v : rounds) need |= std::uint64_t{1} << v;
  std::string text = conjunction_text(rounds);
  return main_lemma_core(g, n, strategy, std::move(rounds), std::move(text), k,
                         [need](std::size_t, std::uint64_t mask) { return (mask & need) == need; });
}

MainLemmaReport verify_main_lemma(const Game& g, std::size_t n, const Strategy& strategy,
                                  const std::vector<std::size_t>& s, const std::vector<std::uint8_t>& event,
                                  const ConstantsReport& k) {
  if (event.size() != strategy.shape().cells())
    throw Error(ErrorKind::shape_mismatch, "event table has " + std::to_string(event.size()) + " cells, expected " +
                                               std::to_string(strategy.shape().cells()));
  return main_lemma_core(g, n, strategy, normalise_rounds(s, n), "indicator", k,
                         [&event](std::size_t cell, std::uint64_t) { return event[cell] != 0; });
}

std::vector<Rational> exact_win_fraction_distribution(const Game& g, std::size_t n, const Strategy& strategy) {
  check_repeated_strategy(g, n, strategy);
  std::vector<Rational> dist(n + 1, Rational(0));
  const auto& shape = strategy.shape();
  auto xs = split_rounds(g.shape().question_sizes(), n);
  auto as = split_rounds(g.shape().answer_sizes(), n);
  for (std::size_t x = 0; x < shape.num_questions(); ++x) {
    Rational px = 1;
    for (std::size_t l = 0; l < n; ++l) px *= g.pi(xs[x * n + l]);
    if (sgn(px) == 0) continue;
    for (std::size_t a = 0; a < shape.num_answers(); ++a) {
      const Rational& q = strategy(x, a);
      if (sgn(q) == 0) continue;
      std::size_t won = 0;
      for (std::size_t l = 0; l < n; ++l) won += g.wins(xs[x * n + l], as[a * n + l]) ? 1 : 0;
      dist[won] += px * q;
    }
  }
  return dist;
}

}  // namespace nsgame
