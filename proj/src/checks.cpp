#include "nsgame/checks.hpp"

#include <random>

#include "nsgame/dist.hpp"
#include "nsgame/error.hpp"
#include "nsgame/random_instances.hpp"
#include "nsgame/reptheory.hpp"
#include "nsgame/rounding.hpp"
#include "nsgame/sim.hpp"

namespace nsgame {

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"robustness", "sandwich", "main-lemma", "dist", "all"};
  return names;
}

Verdict probability_verdict(const Rational& lhs, double rhs_up) {
  if (rhs_up >= 1.0) return lhs <= 1 ? Verdict::vacuous : Verdict::fail;
  return lhs <= from_double(rhs_up) ? Verdict::pass : Verdict::fail;
}

namespace {

// Exact comparison lhs <= rhs reported with the rhs as an upward float.
CheckLine exact_line(std::string name, const Rational& lhs, const Rational& rhs) {
  CheckLine c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = to_double_up(rhs);
  c.verdict = lhs <= rhs ? Verdict::pass : Verdict::fail;
  c.note = "rhs=" + to_string(rhs);
  return c;
}

void robustness(const Game& g, const SuiteOptions& o, std::vector<CheckLine>& out) {
  if (!has_complete_support(g).complete) {
    out.push_back({"robustness", Rational(0), 1.0, Verdict::vacuous, "no complete support"});
    return;
  }
  ValueResult ns = ns_value(g);
  ConstantsReport k = constants(g, o.delta_mode, ns.value);
  for (const char* eps_text : {"0", "1/100", "1/10", "1/4"}) {
    Rational eps = parse_rational(eps_text);
    ValueResult v = almost_ns_value(g, eps);
    double rhs = rounding::add_up(to_double_up(ns.value), c_times_up(k, eps));
    CheckLine c{"robustness[eps=" + std::string(eps_text) + "]", v.value, rhs, probability_verdict(v.value, rhs),
                "delta=" + to_string(k.delta_provenance)};
    out.push_back(std::move(c));
  }
}

void sandwich(const Game& g, const SuiteOptions& o, std::vector<CheckLine>& out) {
  ValueResult c = classical_value(g);
  ValueResult ns = ns_value(g);
  out.push_back(exact_line("sandwich[classical<=ns]", c.value, ns.value));
  const std::size_t n = o.n;
  ValueResult rep = exact_repeated_ns_value(g, n, Rational(static_cast<unsigned long>(n)));
  Rational power = 1;
  for (std::size_t i = 0; i < n; ++i) power *= ns.value;
  const std::string tag = "[n=" + std::to_string(n) + "]";
  out.push_back(exact_line("sandwich" + tag + "[ns^n<=ns(G^n)]", power, rep.value));
  out.push_back(exact_line("sandwich" + tag + "[ns(G^n)<=ns]", rep.value, ns.value));
}

void main_lemma(const Game& g, const SuiteOptions& o, std::vector<CheckLine>& out) {
  if (!has_complete_support(g).complete) {
    out.push_back({"main-lemma", Rational(0), 1.0, Verdict::vacuous, "no complete support"});
    return;
  }
  const std::size_t n = o.n;
  ValueResult ns = ns_value(g);
  ConstantsReport k = constants(g, o.delta_mode, ns.value);
  Strategy product = product_strategy(ns.witness, n);
  Strategy optimal = ns_value_with_hint(repeat(g, n), product).witness;
  const std::vector<std::vector<std::size_t>> sets = {{}, {0}, {0, 1}};
  for (const auto& s : sets) {
    if (!s.empty() && s.back() >= n) continue;
    for (int which = 0; which < 2; ++which) {
      std::string set_text = "{";
      for (std::size_t v : s) set_text += (set_text.size() > 1 ? "," : "") + std::to_string(v + 1);
      set_text += "}";
      std::string name = "main-lemma[n=" + std::to_string(n) + ",S=" + set_text + ",q=" +
                         (which == 0 ? "product" : "lp-optimal") + "]";
      try {
        MainLemmaReport r = verify_main_lemma(g, n, which == 0 ? product : optimal, s, k);
        std::string note = "Pr[E]=" + to_string(r.event_probability) + " log_base=2";
        if (r.best_round)
          note += " min_V=" + std::to_string(*r.best_round + 1) + ":" + to_string(r.best_value);
        else
          note += " no V outside S";
        out.push_back({name, r.lhs, r.rhs, r.verdict, note});
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::zero_probability_event) throw;
        out.push_back({name, Rational(0), 0.0, Verdict::vacuous, "Pr[E]=0"});
      }
    }
  }
}

void dist_suite(const SuiteOptions& o, std::vector<CheckLine>& out) {
  std::mt19937_64 gen(o.seed);
  // Distance never grows under marginalisation.
  std::size_t failures = 0;
  Rational worst = -1;
  for (int i = 0; i < 100; ++i) {
    std::vector<std::size_t> radices(1 + uniform_below(gen, 3));
    for (auto& r : radices) r = 1 + uniform_below(gen, 3);
    JointDistribution p = random_distribution(gen, radices), q = random_distribution(gen, radices);
    std::vector<std::size_t> keep;
    for (std::size_t c = 0; c < radices.size(); ++c)
      if (uniform_below(gen, 2)) keep.push_back(c);
    if (keep.empty()) keep.push_back(uniform_below(gen, radices.size()));
    Rational gap = variational_distance(marginal(p, keep), marginal(q, keep)) - variational_distance(p, q);
    if (gap > worst) worst = gap;
    if (sgn(gap) > 0) ++failures;
  }
  out.push_back({"dist[marginals]", worst, 0.0, failures ? Verdict::fail : Verdict::pass,
                 "lhs=max(d(marginals)-d(joint)) over 100 instances"});

  failures = 0;
  for (int i = 0; i < 50; ++i) {
    HolensteinInstance inst = random_holenstein_instance(gen);
    HolensteinReport r = holenstein_gap(inst.p_t, inst.kernels, inst.event);
    if (!r.holds) ++failures;
  }
  out.push_back({"dist[holenstein]", Rational(static_cast<unsigned long>(failures)), 0.0,
                 failures ? Verdict::fail : Verdict::pass, "lhs=failures over 50 instances"});

  TailCheck h = sample_without_replacement_check(100, 30, Rational(1, 5), o.trials, o.seed);
  Rational hf(static_cast<unsigned long>(h.hits), static_cast<unsigned long>(h.trials));
  hf.canonicalize();
  out.push_back({"dist[hoeffding-without-replacement]", hf,
                 rounding::add_up(h.bound, rounding::mul_up(3.0, h.standard_error)), h.verdict,
                 "n=100 K=30 eps=1/5"});

  TailCheck a = azuma_check(50, Rational(1, 5), Rational(1, 2), o.trials, o.seed);
  Rational af(static_cast<unsigned long>(a.hits), static_cast<unsigned long>(a.trials));
  af.canonicalize();
  out.push_back({"dist[azuma]", af, rounding::add_up(a.bound, rounding::mul_up(3.0, a.standard_error)), a.verdict,
                 "K=50 eps=1/5 p=1/2"});
}

}  // namespace

std::vector<CheckLine> run_suite(const std::string& suite, const Game& g, const SuiteOptions& options) {
  std::vector<CheckLine> out;
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "robustness") {
    known = true;
    robustness(g, options, out);
  }
  if (all || suite == "sandwich") {
    known = true;
    sandwich(g, options, out);
  }
  if (all || suite == "main-lemma") {
    known = true;
    main_lemma(g, options, out);
  }
  if (all || suite == "dist") {
    known = true;
    dist_suite(options, out);
  }
  if (!known) throw Error(ErrorKind::unknown_name, "no check suite named '" + suite + "'");
  return out;
}

}  // namespace nsgame
