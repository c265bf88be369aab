// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nsgame/checks.hpp"
#include "nsgame/dist.hpp"
#include "nsgame/random_instances.hpp"
#include "nsgame/reptheory.hpp"
#include "nsgame/rounding.hpp"
#include "nsgame/sensitivity.hpp"
#include "nsgame/sim.hpp"
#include "nsgame/values.hpp"
#include "oracles.hpp"

using namespace nsgame;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void fail(const std::string& why) {
    pass = false;
    detail << " FAIL(" << why << ")";
  }
  void expect(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && secs >= limit_s) {
    std::ostringstream w;
    w << "runtime " << secs << "s >= " << limit_s << "s";
    o.fail(w.str());
  }
  if (!o.pass) ++failures;
  std::printf("[%s] %2d %-34s %7.2fs |%s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), secs,
              o.detail.str().c_str());
  std::fflush(stdout);
}

std::vector<Game> builtins() {
  std::vector<Game> out;
  for (const auto& n : builtin_names()) out.push_back(builtin(n));
  return out;
}

std::vector<Game> complete_support_builtins() {
  std::vector<Game> out;
  for (auto& g : builtins())
    if (has_complete_support(g).complete) out.push_back(g);
  return out;
}

Strategy lp_optimal_repeated(const Game& g, std::size_t n) {
  Strategy prod = product_strategy(ns_value(g).witness, n);
  return ns_value_with_hint(repeat(g, n), prod).witness;
}

}  // namespace

int main() {
  std::printf("acceptance (generator %s)\n", kGeneratorName);

  criterion(1, "classical values", 1.0, [](Outcome& o) {
    Game chsh = builtin("chsh"), go = builtin("guess_other");
    Rational vc = classical_value(chsh).value, vg = classical_value(go).value;
    Rational oc = oracle::brute_classical(chsh), og = oracle::brute_classical(go);
    o.detail << " v_c(chsh)=" << to_string(vc) << " oracle=" << to_string(oc) << "; v_c(guess_other)="
             << to_string(vg) << " oracle=" << to_string(og) << " (tuples "
             << deterministic_tuple_count(go.shape(), kDefaultClassicalCap) << ")";
    o.expect(vc == oc && vg == og, "library differs from oracle");
    o.expect(vc == Rational(3, 4), "v_c(chsh) != 3/4");
    o.expect(vg == Rational(1, 4), "v_c(guess_other) != 1/4 (required value)");
  });

  criterion(2, "non-signaling values", 1.0, [](Outcome& o) {
    Game chsh = builtin("chsh"), go = builtin("guess_other");
    Rational oc = oracle::ns_vertex_value_binary(chsh), og = oracle::ns_vertex_value_binary(go);
    Rational vc = ns_value(chsh).value, vg = ns_value(go).value;
    o.detail << " v_ns(chsh)=" << to_string(vc) << " vertex oracle=" << to_string(oc)
             << "; v_ns(guess_other)=" << to_string(vg) << " vertex oracle=" << to_string(og);
    o.expect(vc == 1 && oc == 1, "chsh");
    o.expect(vg == Rational(1, 2) && og == Rational(1, 2), "guess_other");
  });

  criterion(3, "witness validity", 0, [](Outcome& o) {
    int checked = 0;
    for (const Game& g : builtins()) {
      auto c = classical_value(g);
      o.expect(game_value(g, c.witness) == c.value, g.name() + " classical value");
      o.expect(is_deterministic_local(c.witness), g.name() + " classical form");
      auto n = ns_value(g);
      o.expect(game_value(g, n.witness) == n.value, g.name() + " ns value");
      o.expect(signaling_epsilon(n.witness).epsilon == 0, g.name() + " ns signals");
      auto a = almost_ns_value(g, Rational(1, 10));
      o.expect(game_value(g, a.witness) == a.value, g.name() + " almost-ns value");
      o.expect(signaling_epsilon(a.witness).epsilon <= Rational(1, 10), g.name() + " almost-ns slack");
      checked += 3;
    }
    o.detail << " " << checked << " witnesses";
  });

  criterion(4, "robustness", 0, [](Outcome& o) {
    int n = 0, vac = 0;
    for (const Game& g : complete_support_builtins()) {
      auto k = constants(g);
      for (Rational eps : {Rational(0), Rational(1, 100), Rational(1, 10), Rational(1, 4)}) {
        Rational lhs = almost_ns_value(g, eps).value;
        const double rhs = rounding::add_up(to_double_up(k.v_ns), c_times_up(k, eps));
        o.expect(lhs <= from_double(rhs), g.name() + " eps=" + to_string(eps));
        if (rhs >= 1.0) ++vac;
        ++n;
      }
    }
    o.detail << " " << n << " checks, " << vac << " with rhs >= 1";
  });

  criterion(5, "repetition sandwich n=2", 60.0, [](Outcome& o) {
    for (const Game& g : builtins()) {
      Rational v = ns_value(g).value;
      Rational v2 = exact_repeated_ns_value(g, 2, Rational(2)).value;
      o.detail << " " << g.name() << ":" << to_string(v * v) << "<=" << to_string(v2) << "<=" << to_string(v);
      o.expect(v * v <= v2 && v2 <= v, g.name());
      if (g.name() == "guess_other") o.expect(v2 >= Rational(1, 4) && v2 <= Rational(1, 2), "guess_other bracket");
    }
  });

  criterion(6, "main lemma suite", 300.0, [](Outcome& o) {
    int pass = 0, vac = 0, total = 0;
    for (const char* name : {"guess_other", "chsh"}) {
      Game g = builtin(name);
      auto k = constants(g);
      Strategy base = ns_value(g).witness;
      for (std::size_t n : {2u, 3u}) {
        std::vector<std::pair<std::string, Strategy>> strategies = {{"product", product_strategy(base, n)},
                                                                    {"lp-optimal", lp_optimal_repeated(g, n)}};
        for (const auto& s : std::vector<std::vector<std::size_t>>{{}, {0}, {0, 1}})
          for (const auto& [label, q] : strategies) {
            auto r = verify_main_lemma(g, n, q, s, k);
            ++total;
            o.expect(sgn(r.event_probability) > 0, std::string(name) + " Pr[E]=0");
            o.expect(ok(r.verdict), std::string(name) + " n=" + std::to_string(n) + " " + label + " " + r.event);
            if (r.verdict == Verdict::pass) ++pass;
            if (r.verdict == Verdict::vacuous) ++vac;
          }
      }
    }
    o.detail << " " << total << " combinations: " << pass << " pass, " << vac << " vacuous";
  });

  criterion(7, "CT consistency", 0, [](Outcome& o) {
    int n_checks = 0, vac = 0;
    for (const Game& g : complete_support_builtins()) {
      auto k = constants(g);
      for (std::size_t n : {2u, 3u})
        for (Rational d : {Rational(1, 4), Rational(1, 2)}) {
          auto r = ct_consistency(g, d, n, k);
          ++n_checks;
          if (!r.target) {
            o.fail(g.name() + " no target");
            continue;
          }
          const Rational cap = r.bound >= 1.0 ? Rational(1) : from_double(r.bound);
          o.expect(*r.target <= cap, g.name() + " n=" + std::to_string(n) + " delta=" + to_string(d));
          o.expect(r.vacuous == (r.bound >= 1.0), g.name() + " vacuity flag");
          if (r.vacuous) ++vac;
        }
    }
    o.detail << " " << n_checks << " checks, " << vac << " flagged vacuous";
  });

  criterion(8, "sensitivity lemma", 0, [](Outcome& o) {
    std::mt19937_64 gen(8);
    int done = 0, skipped = 0;
    while (done < 100) {
      LinearProgram lp = random_small_lp(gen);
      std::vector<Rational> b;
      for (const auto& row : lp.rows) b.push_back(row.rhs + random_perturbation(gen, Rational(1, 10)));
      LinearProgram alt = lp;
      for (std::size_t i = 0; i < b.size(); ++i) alt.rows[i].rhs = b[i];
      if (solve(lp).status != LpStatus::optimal || solve(alt).status != LpStatus::optimal) {
        ++skipped;
        continue;
      }
      Matrix a = inequality_form(lp).a;
      Rational delta = sensitivity_delta_exact(a, std::min(a.rows, a.cols));
      auto r = sensitivity_check(lp, b, delta);
      o.expect(r.holds, "program " + std::to_string(done));
      ++done;
    }
    o.detail << " " << done << " programs (" << skipped << " draws without finite optima skipped)";
  });

  criterion(9, "probability toolbox", 0, [](Outcome& o) {
    std::mt19937_64 gen(9);
    int mono = 0;
    for (int i = 0; i < 100; ++i) {
      auto p = random_distribution(gen, {2, 3, 2});
      auto q = random_distribution(gen, {2, 3, 2});
      Rational d = variational_distance(p, q);
      bool okm = variational_distance(marginal(p, {0}), marginal(q, {0})) <= d &&
                 variational_distance(marginal(p, {1, 2}), marginal(q, {1, 2})) <= d &&
                 variational_distance(marginal(p, {2}), marginal(q, {2})) <= d;
      mono += okm ? 1 : 0;
    }
    o.expect(mono == 100, "marginals");
    int hol = 0;
    for (int i = 0; i < 50; ++i) {
      auto inst = random_holenstein_instance(gen);
      auto r = holenstein_gap(inst.p_t, inst.kernels, inst.event);
      hol += (r.holds && r.lhs <= from_double(r.rhs)) ? 1 : 0;
    }
    o.expect(hol == 50, "holenstein");
    auto h = sample_without_replacement_check(100, 30, Rational(1, 5), 100000, 9);
    o.expect(ok(h.verdict), "hoeffding without replacement");
    auto a = azuma_check(50, Rational(1, 5), Rational(1, 2), 100000, 9);
    o.expect(ok(a.verdict), "azuma");
    o.detail << " marginals " << mono << "/100, holenstein " << hol << "/50, hoeffding freq " << h.frequency
             << " <= " << h.bound << " + 3*" << h.standard_error << ", azuma freq " << a.frequency << " <= "
             << a.bound << " + 3*" << a.standard_error;
  });

  criterion(10, "simulation vs exact", 0, [](Outcome& o) {
    Game g = builtin("guess_other");
    Strategy base = ns_value(g).witness;
    auto r = simulate(g, SimConfig::product_of(base, 2, 2024, 100000));
    auto exact = exact_win_fraction_distribution(g, 2, product_strategy(base, 2));
    Rational d = histogram_distance(r, exact);
    // d <= 5 / sqrt(1e5)  <=>  d^2 <= 25 / 1e5
    o.expect(d * d <= Rational(25, 100000), "total variation");
    o.detail << " TV=" << to_string(d) << " (~" << d.get_d() << ") <= 5/sqrt(1e5) ~ " << 5.0 / std::sqrt(1e5);
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
