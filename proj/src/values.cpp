#include "nsgame/values.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nsgame/error.hpp"
#include "nsgame/rounding.hpp"

namespace nsgame {

std::string to_string(ValueKind kind) {
  switch (kind) {
    case ValueKind::classical: return "classical";
    case ValueKind::ns: return "ns";
    case ValueKind::almost_ns: return "almost-ns";
  }
  return "unknown";
}

std::string to_string(DeltaProvenance p) { return p == DeltaProvenance::exact ? "exact" : "hadamard"; }

std::vector<std::vector<std::size_t>> signaling_subsets(std::size_t players) {
  std::vector<std::vector<std::size_t>> out;
  if (players < 2) return out;
  const std::size_t full = (std::size_t{1} << players) - 1;
  for (std::size_t mask = 1; mask < full; ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < players; ++i)
      if (mask & (std::size_t{1} << i)) s.push_back(i);
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------- classical

std::size_t deterministic_tuple_count(const GameShape& shape, std::size_t cap) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < shape.players(); ++i)
    for (std::size_t x = 0; x < shape.question_sizes()[i]; ++x) {
      if (total > cap / shape.answer_sizes()[i]) return cap + 1;
      total *= shape.answer_sizes()[i];
    }
  return total;
}

namespace {

// Deterministic tuple t: digit (i, x_i) of the mixed radix with player 0 and
// question 0 least significant holds f_i(x_i).
struct TupleLayout {
  std::vector<std::size_t> radices;  // answer size per (i, x_i) digit
  std::vector<std::size_t> offset;   // first digit of player i
};

TupleLayout tuple_layout(const GameShape& shape) {
  TupleLayout t;
  for (std::size_t i = 0; i < shape.players(); ++i) {
    t.offset.push_back(t.radices.size());
    for (std::size_t x = 0; x < shape.question_sizes()[i]; ++x) t.radices.push_back(shape.answer_sizes()[i]);
  }
  return t;
}

// pi scaled to integers over a common denominator.
struct ScaledPi {
  std::vector<std::int64_t> weight;
  BigInt denominator;
  bool fits = false;
};

ScaledPi scale_pi(const Game& g) {
  ScaledPi s;
  BigInt l = 1;
  for (const auto& p : g.pi()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), p.get_den_mpz_t());
  s.denominator = l;
  s.fits = l.fits_slong_p() && l < (BigInt(1) << 62);
  if (!s.fits) return s;
  for (const auto& p : g.pi()) {
    Rational w = p * l;
    s.weight.push_back(w.get_num().get_si());
  }
  return s;
}

class TupleScorer {
 public:
  explicit TupleScorer(const Game& g) : g_(g), layout_(tuple_layout(g.shape())), pi_(scale_pi(g)) {
    const auto& shape = g.shape();
    x_digits_.resize(shape.num_questions() * shape.players());
    for (std::size_t x = 0; x < shape.num_questions(); ++x)
      for (std::size_t i = 0; i < shape.players(); ++i) x_digits_[x * shape.players() + i] = shape.questions().digit(x, i);
  }

  // Answer tuple chosen at every x by the tuple with digits `f`.
  void answers(const std::vector<std::size_t>& f, std::vector<std::size_t>& out) const {
    const auto& shape = g_.shape();
    const std::size_t m = shape.players();
    out.resize(shape.num_questions());
    for (std::size_t x = 0; x < shape.num_questions(); ++x) {
      std::size_t a = 0;
      for (std::size_t i = 0; i < m; ++i)
        a += f[layout_.offset[i] + x_digits_[x * m + i]] * shape.answers().stride(i);
      out[x] = a;
    }
  }

  Rational score(const std::vector<std::size_t>& f, std::vector<std::size_t>& scratch) const {
    answers(f, scratch);
    if (pi_.fits) {
      std::int64_t total = 0;
      for (std::size_t x = 0; x < scratch.size(); ++x)
        if (g_.wins(x, scratch[x])) total += pi_.weight[x];
      Rational r(BigInt(static_cast<long>(total)), pi_.denominator);
      r.canonicalize();
      return r;
    }
    Rational total = 0;
    for (std::size_t x = 0; x < scratch.size(); ++x)
      if (g_.wins(x, scratch[x])) total += g_.pi(x);
    return total;
  }

  const TupleLayout& layout() const { return layout_; }

 private:
  const Game& g_;
  TupleLayout layout_;
  ScaledPi pi_;
  std::vector<std::size_t> x_digits_;
};

void decode_tuple(std::size_t t, const std::vector<std::size_t>& radices, std::vector<std::size_t>& out) {
  out.resize(radices.size());
  for (std::size_t d = 0; d < radices.size(); ++d) {
    out[d] = t % radices[d];
    t /= radices[d];
  }
}

void increment_tuple(const std::vector<std::size_t>& radices, std::vector<std::size_t>& f) {
  for (std::size_t d = 0; d < radices.size(); ++d) {
    if (++f[d] < radices[d]) return;
    f[d] = 0;
  }
}

ValueResult classical_result(const Game& g, const TupleScorer& scorer, std::size_t best_tuple, Rational best) {
  std::vector<std::size_t> f, choice;
  decode_tuple(best_tuple, scorer.layout().radices, f);
  scorer.answers(f, choice);
  return ValueResult{std::move(best), Strategy::deterministic(g.shape(), choice), ValueKind::classical, Rational(0)};
}

std::size_t checked_tuple_count(const Game& g, std::size_t cap) {
  std::size_t total = deterministic_tuple_count(g.shape(), cap);
  if (total > cap)
    throw Error(ErrorKind::cap_exceeded, "more than " + std::to_string(cap) + " deterministic strategy tuples");
  return total;
}

}  // namespace

ValueResult classical_value_serial(const Game& g, std::size_t cap) {
  const std::size_t total = checked_tuple_count(g, cap);
  TupleScorer scorer(g);
  std::vector<std::size_t> f(scorer.layout().radices.size(), 0), scratch;
  Rational best = -1;
  std::size_t best_tuple = 0;
  for (std::size_t t = 0; t < total; ++t) {
    Rational v = scorer.score(f, scratch);
    if (v > best) {
      best = v;
      best_tuple = t;
    }
    increment_tuple(scorer.layout().radices, f);
  }
  return classical_result(g, scorer, best_tuple, best);
}

ValueResult classical_value(const Game& g, std::size_t cap) {
  const std::size_t total = checked_tuple_count(g, cap);
  TupleScorer scorer(g);
  const long long chunks = static_cast<long long>(std::min<std::size_t>(total, 256));
  std::vector<Rational> chunk_best(static_cast<std::size_t>(chunks), Rational(-1));
  std::vector<std::size_t> chunk_tuple(static_cast<std::size_t>(chunks), 0);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long c = 0; c < chunks; ++c) {
    const std::size_t lo = total * static_cast<std::size_t>(c) / static_cast<std::size_t>(chunks);
    const std::size_t hi = total * static_cast<std::size_t>(c + 1) / static_cast<std::size_t>(chunks);
    std::vector<std::size_t> f, scratch;
    decode_tuple(lo, scorer.layout().radices, f);
    Rational best = -1;
    std::size_t best_t = lo;
    for (std::size_t t = lo; t < hi; ++t) {
      Rational v = scorer.score(f, scratch);
      if (v > best) {
        best = v;
        best_t = t;
      }
      increment_tuple(scorer.layout().radices, f);
    }
    chunk_best[static_cast<std::size_t>(c)] = best;
    chunk_tuple[static_cast<std::size_t>(c)] = best_t;
  }
  // Chunks are in increasing tuple order, so a strict comparison keeps the
  // smallest maximiser.
  std::size_t winner = 0;
  for (std::size_t c = 1; c < chunk_best.size(); ++c)
    if (chunk_best[c] > chunk_best[winner]) winner = c;
  return classical_result(g, scorer, chunk_tuple[winner], chunk_best[winner]);
}

bool is_deterministic_local(const Strategy& s) {
  const auto& shape = s.shape();
  const std::size_t m = shape.players();
  // answer_of[i][x_i] once fixed.
  std::vector<std::vector<std::size_t>> answer_of(m);
  for (std::size_t i = 0; i < m; ++i)
    answer_of[i].assign(shape.question_sizes()[i], std::numeric_limits<std::size_t>::max());
  for (std::size_t x = 0; x < shape.num_questions(); ++x) {
    std::size_t chosen = std::numeric_limits<std::size_t>::max();
    for (std::size_t a = 0; a < shape.num_answers(); ++a) {
      const Rational& v = s(x, a);
      if (sgn(v) == 0) continue;
      if (v != 1 || chosen != std::numeric_limits<std::size_t>::max()) return false;
      chosen = a;
    }
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t xi = shape.questions().digit(x, i), ai = shape.answers().digit(chosen, i);
      auto& slot = answer_of[i][xi];
      if (slot == std::numeric_limits<std::size_t>::max())
        slot = ai;
      else if (slot != ai)
        return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- NS program

namespace {

// Views of the game's tuples split into the I and J components.
struct SubsetSplit {
  std::vector<std::size_t> in, out;  // player indices of I and J
  TupleIndexer x_in, x_out, a_in, a_out;

  SubsetSplit(const GameShape& shape, const std::vector<std::size_t>& subset) : in(subset) {
    std::vector<bool> member(shape.players(), false);
    for (std::size_t i : subset) member[i] = true;
    for (std::size_t i = 0; i < shape.players(); ++i)
      if (!member[i]) out.push_back(i);
    auto radices = [](const std::vector<std::size_t>& sizes, const std::vector<std::size_t>& idx) {
      std::vector<std::size_t> r;
      for (std::size_t i : idx) r.push_back(sizes[i]);
      return r;
    };
    x_in = TupleIndexer(radices(shape.question_sizes(), in));
    x_out = TupleIndexer(radices(shape.question_sizes(), out));
    a_in = TupleIndexer(radices(shape.answer_sizes(), in));
    a_out = TupleIndexer(radices(shape.answer_sizes(), out));
  }

  // Full tuple index from the split parts.
  static std::size_t join(const TupleIndexer& full, const std::vector<std::size_t>& in_players,
                          const std::vector<std::size_t>& out_players, const TupleIndexer& in_idx,
                          const TupleIndexer& out_idx, std::size_t in_flat, std::size_t out_flat) {
    std::size_t v = 0;
    for (std::size_t k = 0; k < in_players.size(); ++k) v += in_idx.digit(in_flat, k) * full.stride(in_players[k]);
    for (std::size_t k = 0; k < out_players.size(); ++k)
      v += out_idx.digit(out_flat, k) * full.stride(out_players[k]);
    return v;
  }

  std::size_t x(const GameShape& s, std::size_t xi, std::size_t xj) const {
    return join(s.questions(), in, out, x_in, x_out, xi, xj);
  }
  std::size_t a(const GameShape& s, std::size_t ai, std::size_t aj) const {
    return join(s.answers(), in, out, a_in, a_out, ai, aj);
  }
};

// Terms of  sum_{a_J} q(a_I a_J | x_I x_J) - sum_{a_J} q(a_I a_J | x_I x'_J).
std::vector<LpTerm> marginal_difference(const GameShape& shape, const SubsetSplit& sp, std::size_t ai, std::size_t xi,
                                        std::size_t xj, std::size_t xj_prime) {
  std::vector<LpTerm> terms;
  const std::size_t x1 = sp.x(shape, xi, xj), x2 = sp.x(shape, xi, xj_prime);
  for (std::size_t aj = 0; aj < sp.a_out.size(); ++aj) {
    const std::size_t a = sp.a(shape, ai, aj);
    terms.push_back({shape.cell(x1, a), Rational(1)});
    terms.push_back({shape.cell(x2, a), Rational(-1)});
  }
  return terms;
}

}  // namespace

LinearProgram build_ns_lp(const Game& g, const Rational& slack, NsRows rows) {
  if (sgn(slack) < 0) throw Error(ErrorKind::invalid_argument, "slack must be >= 0");
  const auto& shape = g.shape();
  LinearProgram lp(shape.cells());
  for (std::size_t x = 0; x < shape.num_questions(); ++x)
    for (std::size_t a = 0; a < shape.num_answers(); ++a) {
      lp.nonnegative[shape.cell(x, a)] = true;
      if (g.wins(x, a)) lp.objective[shape.cell(x, a)] = g.pi(x);
    }
  for (std::size_t x = 0; x < shape.num_questions(); ++x) {
    std::vector<LpTerm> terms;
    for (std::size_t a = 0; a < shape.num_answers(); ++a) terms.push_back({shape.cell(x, a), Rational(1)});
    lp.add_row(std::move(terms), RowSense::eq, Rational(1));
  }
  const bool relaxed = sgn(slack) > 0;
  const std::size_t cap = default_cell_cap();
  for (const auto& subset : signaling_subsets(shape.players())) {
    SubsetSplit sp(shape, subset);
    for (std::size_t ai = 0; ai < sp.a_in.size(); ++ai)
      for (std::size_t xi = 0; xi < sp.x_in.size(); ++xi)
        for (std::size_t xj = 0; xj < sp.x_out.size(); ++xj) {
          if (!relaxed && rows == NsRows::canonical_reference) {
            if (xj == 0) continue;
            lp.add_row(marginal_difference(shape, sp, ai, xi, xj, 0), RowSense::eq, Rational(0));
          } else if (!relaxed) {
            for (std::size_t xj2 = xj + 1; xj2 < sp.x_out.size(); ++xj2)
              lp.add_row(marginal_difference(shape, sp, ai, xi, xj, xj2), RowSense::eq, Rational(0));
          } else {
            for (std::size_t xj2 = 0; xj2 < sp.x_out.size(); ++xj2)
              if (xj2 != xj) lp.add_row(marginal_difference(shape, sp, ai, xi, xj, xj2), RowSense::le, slack);
          }
          if (lp.rows.size() > cap)
            throw Error(ErrorKind::cap_exceeded, "non-signaling program exceeds " + std::to_string(cap) + " rows");
        }
  }
  return lp;
}

namespace {

ValueResult value_from_lp(const Game& g, const LinearProgram& lp, ValueKind kind, const Rational& slack,
                          const SolveOptions& options, const Strategy* hint = nullptr) {
  LpSolution sol = hint ? solve(lp, options, hint->table()) : solve(lp, options);
  if (sol.status != LpStatus::optimal)
    throw Error(ErrorKind::invalid_argument, "non-signaling program is " + to_string(sol.status));
  Strategy witness(g.shape(), sol.point);
  return ValueResult{sol.value, std::move(witness), kind, slack};
}

}  // namespace

ValueResult ns_value(const Game& g, const SolveOptions& options) {
  return ns_value(g, NsRows::canonical_reference, options);
}

ValueResult ns_value(const Game& g, NsRows rows, const SolveOptions& options) {
  return value_from_lp(g, build_ns_lp(g, Rational(0), rows), ValueKind::ns, Rational(0), options);
}

ValueResult ns_value_with_hint(const Game& g, const Strategy& hint, const SolveOptions& options) {
  if (!(hint.shape() == g.shape())) throw Error(ErrorKind::shape_mismatch, "hint strategy shape differs from game");
  LinearProgram lp = build_ns_lp(g);
  const auto& shape = g.shape();
  // y on normalisation rows: pi(x) if some answer wins at x; 0 elsewhere.
  std::vector<Rational> dual(lp.rows.size(), Rational(0));
  for (std::size_t x = 0; x < shape.num_questions(); ++x)
    for (std::size_t a = 0; a < shape.num_answers(); ++a)
      if (g.wins(x, a)) {
        dual[x] = g.pi(x);
        break;
      }
  if (auto sol = certify(lp, hint.table(), std::move(dual)))
    return ValueResult{sol->value, hint, ValueKind::ns, Rational(0)};
  return value_from_lp(g, lp, ValueKind::ns, Rational(0), options, &hint);
}

ValueResult almost_ns_value(const Game& g, const Rational& epsilon, const SolveOptions& options) {
  if (sgn(epsilon) < 0) throw Error(ErrorKind::invalid_argument, "epsilon must be >= 0");
  if (sgn(epsilon) == 0) {
    ValueResult r = ns_value(g, options);
    r.kind = ValueKind::almost_ns;
    return r;
  }
  return value_from_lp(g, build_ns_lp(g, epsilon), ValueKind::almost_ns, epsilon, options);
}

SignalingReport signaling_epsilon(const Strategy& s) {
  const auto& shape = s.shape();
  SignalingReport best;
  best.epsilon = 0;
  for (const auto& subset : signaling_subsets(shape.players())) {
    SubsetSplit sp(shape, subset);
    std::vector<Rational> marg(sp.x_out.size());
    for (std::size_t ai = 0; ai < sp.a_in.size(); ++ai)
      for (std::size_t xi = 0; xi < sp.x_in.size(); ++xi) {
        for (std::size_t xj = 0; xj < sp.x_out.size(); ++xj) {
          Rational m = 0;
          const std::size_t x = sp.x(shape, xi, xj);
          for (std::size_t aj = 0; aj < sp.a_out.size(); ++aj) m += s(x, sp.a(shape, ai, aj));
          marg[xj] = m;
        }
        // Largest pairwise gap is max - min.
        auto [lo, hi] = std::minmax_element(marg.begin(), marg.end());
        Rational gap = *hi - *lo;
        if (gap > best.epsilon) {
          best.epsilon = gap;
          best.subset = subset;
          best.a_i = ai;
          best.x_i = xi;
          best.x_j = static_cast<std::size_t>(hi - marg.begin());
          best.x_j_prime = static_cast<std::size_t>(lo - marg.begin());
        }
      }
  }
  return best;
}

// ---------------------------------------------------------------- constants

double c_times_up(const ConstantsReport& k, const Rational& eps) {
  if (sgn(eps) == 0) return 0.0;
  double log_eps = rounding::mul_up(log2_up(eps), std::log(2.0) * (1 + 1e-15));
  return rounding::exp_up(rounding::add_up(k.log_c, log_eps));
}

ConstantsReport constants(const Game& g, const DeltaMode& mode, const std::optional<Rational>& v_ns) {
  SupportInfo support = has_complete_support(g);
  if (!support.complete) throw Error(ErrorKind::no_complete_support, "game '" + g.name() + "' has pi(x) = 0 somewhere");
  ConstantsReport k;
  k.game = g.name();
  k.players = g.players();
  k.num_questions = g.shape().num_questions();
  k.num_answers = g.shape().num_answers();
  k.pi_min = support.pi_min;
  k.v_ns = v_ns ? *v_ns : ns_value(g).value;

  // Delta is taken over the inequality form of the all-pairs program.
  InequalityForm form = inequality_form(build_ns_lp(g, Rational(0), NsRows::all_pairs));
  k.matrix_rows = form.a.rows;
  k.matrix_cols = form.a.cols;
  const std::size_t full_rank = std::min(form.a.rows, form.a.cols);
  bool use_hadamard = true;
  if (mode.exact) {
    if (mode.size_cap < full_rank) {
      k.delta_note = "size_cap " + std::to_string(mode.size_cap) + " < min(rows, cols) = " + std::to_string(full_rank) +
                     "; exact enumeration would not bound every submatrix";
    } else {
      try {
        Rational d = sensitivity_delta_exact(form.a, mode.size_cap, mode.budget);
        k.delta_exact = d;
        use_hadamard = false;
      } catch (const DeltaBudgetExceeded& e) {
        k.delta_note = std::string("enumeration budget exceeded (") + e.what() + ")";
      }
    }
  }
  if (use_hadamard) {
    k.delta_provenance = DeltaProvenance::hadamard;
    k.log_delta = sensitivity_delta_hadamard_log(form.a);
    k.delta = sensitivity_delta_hadamard(form.a);
    if (std::isinf(k.delta)) k.delta = std::numeric_limits<double>::infinity();
  } else {
    k.delta_provenance = DeltaProvenance::exact;
    k.delta = to_double_up(*k.delta_exact);
    k.log_delta = sgn(*k.delta_exact) > 0 ? rounding::mul_up(log2_up(*k.delta_exact), std::log(2.0) * (1 + 1e-15))
                                          : -std::numeric_limits<double>::infinity();
  }

  using namespace rounding;
  const double ln2_up = up(std::log(2.0)), ln3_up = up(std::log(3.0)), ln486_down = down(std::log(486.0), 2);
  // c = 2 |X| |A|^2 Delta
  k.log_c = add_up(add_up(ln2_up, log_up(static_cast<double>(k.num_questions))),
                   add_up(mul_up(2.0, log_up(static_cast<double>(k.num_answers))), k.log_delta));
  // c' = 3 * 2^m * c / pi_min
  const double log_inv_pi = mul_up(log2_up(1 / k.pi_min), ln2_up);
  k.log_c_prime = add_up(add_up(ln3_up, mul_up(static_cast<double>(k.players), ln2_up)), add_up(k.log_c, log_inv_pi));
  // mu = 1 / (2 * 3^5 * c'^2)
  k.log_mu = down(-ln486_down - 2.0 * k.log_c_prime, 2);
  // nu = exp(-(1 - v_ns)^4 mu)
  const double gap = to_double_down(1 - k.v_ns);
  const double gap4 = mul_down(mul_down(gap, gap), mul_down(gap, gap));
  const double mu_down = exp_down(k.log_mu);
  k.log_nu = gap4 > 0.0 && mu_down > 0.0 ? -mul_down(gap4, mu_down) : 0.0;
  if (gap4 > 0.0 && mu_down == 0.0) {
    // mu underflows double: keep the exponent in log form.
    k.log_nu = -std::exp(down(std::log(gap4) + k.log_mu, 2));
  }

  k.c = exp_up(k.log_c);
  k.c_prime = exp_up(k.log_c_prime);
  k.mu = mu_down;
  k.nu = std::min(1.0, exp_up(k.log_nu));
  k.one_minus_nu = k.log_nu < 0.0 ? down(-std::expm1(k.log_nu), 2) : 0.0;
  if (k.one_minus_nu < 0.0) k.one_minus_nu = 0.0;
  return k;
}

}  // namespace nsgame
