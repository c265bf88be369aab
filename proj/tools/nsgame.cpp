// nsgame: command-line frontend.
//
// Exit codes: 0 success, 1 a check failed, 2 usage or input error,
// 3 computation error (cap exceeded, solver limits, ...).

#include <CLI11.hpp>

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nsgame/checks.hpp"
#include "nsgame/error.hpp"
#include "nsgame/game.hpp"
#include "nsgame/game_io.hpp"
#include "nsgame/report.hpp"
#include "nsgame/reptheory.hpp"
#include "nsgame/sim.hpp"
#include "nsgame/values.hpp"

using namespace nsgame;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string game;
  std::string kind = "ns";
  std::string eps = "0";
  std::size_t n = 2;
  std::optional<std::string> t;
  std::vector<std::string> deltas;
  std::string delta_mode = "hadamard";
  std::uint64_t seed = 1;
  std::size_t trials = 100000;
  std::string suite = "all";
  std::string format = "text";
  bool machine = false;
};

// builtin:NAME or builtin:random_free:m=3:size=2:seed=9, else a file path.
Game load_game(const std::string& source) {
  if (source.empty()) throw UsageError("--game is required");
  const std::string prefix = "builtin:";
  if (source.rfind(prefix, 0) != 0) return parse_game_file(source);
  std::string rest = source.substr(prefix.size());
  std::vector<std::string> parts;
  std::stringstream ss(rest);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.empty() || parts[0].empty()) throw UsageError("empty builtin name");
  BuiltinParams params;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    auto eq = parts[i].find('=');
    if (eq == std::string::npos) throw UsageError("builtin parameter '" + parts[i] + "' is not key=value");
    std::string key = parts[i].substr(0, eq), value = parts[i].substr(eq + 1);
    try {
      unsigned long long v = std::stoull(value);
      if (key == "m")
        params.m = v;
      else if (key == "size" || key == "sizes")
        params.size = v;
      else if (key == "seed")
        params.seed = v;
      else
        throw UsageError("unknown builtin parameter '" + key + "'");
    } catch (const std::logic_error&) {
      throw UsageError("bad value for builtin parameter '" + key + "'");
    }
  }
  return builtin(parts[0], params);
}

Rational parse_flag_rational(const std::string& flag, const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const std::exception&) {
    throw UsageError(flag + " expects a rational p/q, got '" + text + "'");
  }
}

DeltaMode parse_delta_mode(const std::string& text) {
  if (text == "hadamard") return DeltaMode::hadamard();
  const std::string prefix = "exact:";
  if (text.rfind(prefix, 0) == 0) {
    try {
      return DeltaMode::exact_mode(std::stoul(text.substr(prefix.size())));
    } catch (const std::logic_error&) {
    }
  }
  throw UsageError("--delta-mode expects exact:CAP or hadamard, got '" + text + "'");
}

std::string up(double v) { return float_literal(v, Round::up); }
std::string down(double v) { return float_literal(v, Round::down); }

void row(const std::string& key, const std::string& value) {
  std::cout << "  " << std::left << std::setw(18) << key << value << "\n";
}

std::string sizes_text(const std::vector<std::size_t>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

int cmd_show(const Options& o) {
  Game g = load_game(o.game);
  if (o.format == "file") {
    write_game(std::cout, g);
    return 0;
  }
  if (o.format != "text") throw UsageError("--format expects text or file");
  const auto& shape = g.shape();
  SupportInfo support = has_complete_support(g);
  std::cout << "game " << g.name() << "\n";
  row("players", std::to_string(g.players()));
  row("question_sizes", sizes_text(shape.question_sizes()));
  row("answer_sizes", sizes_text(shape.answer_sizes()));
  row("|X| |A|", std::to_string(shape.num_questions()) + " " + std::to_string(shape.num_answers()));
  row("complete_support", support.complete ? "yes" : "no");
  row("pi_min", to_string(support.pi_min));
  row("free", is_free(g) ? "yes" : "no");
  std::size_t winning = 0;
  for (std::size_t x = 0; x < shape.num_questions(); ++x)
    for (std::size_t a = 0; a < shape.num_answers(); ++a) winning += g.wins(x, a) ? 1 : 0;
  row("winning_pairs", std::to_string(winning));
  return 0;
}

int cmd_value(const Options& o) {
  Game g = load_game(o.game);
  if (o.kind == "classical") {
    ValueResult r = classical_value(g);
    std::cout << "v_c = " << to_string(r.value) << "\n";
  } else if (o.kind == "ns") {
    ValueResult r = ns_value(g);
    std::cout << "v_ns = " << to_string(r.value) << "\n";
  } else if (o.kind == "almost-ns") {
    Rational eps = parse_flag_rational("--eps", o.eps);
    if (sgn(eps) < 0) throw UsageError("--eps must be >= 0");
    ValueResult r = almost_ns_value(g, eps);
    std::cout << "v_ns(eps=" << to_string(eps) << ") = " << to_string(r.value) << "\n";
  } else {
    throw UsageError("--kind expects classical, ns or almost-ns");
  }
  return 0;
}

int cmd_constants(const Options& o) {
  Game g = load_game(o.game);
  ConstantsReport k = constants(g, parse_delta_mode(o.delta_mode));
  if (o.machine) {
    std::cout << "constants game=" << k.game << " pi_min=" << to_string(k.pi_min) << " v_ns=" << to_string(k.v_ns)
              << " delta=" << (k.delta_exact ? to_string(*k.delta_exact) : up(k.delta))
              << " delta_provenance=" << to_string(k.delta_provenance) << " c=" << up(k.c)
              << " c_prime=" << up(k.c_prime) << " mu=" << down(k.mu) << " nu=" << up(k.nu)
              << " one_minus_nu=" << down(k.one_minus_nu) << "\n";
    return 0;
  }
  std::cout << "constants for " << k.game << "\n";
  row("pi_min", to_string(k.pi_min));
  row("v_ns", to_string(k.v_ns));
  row("matrix", std::to_string(k.matrix_rows) + " x " + std::to_string(k.matrix_cols));
  row("Delta", (k.delta_exact ? to_string(*k.delta_exact) : up(k.delta)) + " [" + to_string(k.delta_provenance) +
                   (k.delta_provenance == DeltaProvenance::hadamard ? ", upper bound]" : "]"));
  if (!k.delta_note.empty()) row("Delta note", k.delta_note);
  row("ln Delta", up(k.log_delta));
  row("c(G)", up(k.c));
  row("c'(G)", up(k.c_prime));
  row("mu", down(k.mu));
  row("ln mu", down(k.log_mu));
  row("nu", up(k.nu));
  row("1 - nu", down(k.one_minus_nu));
  return 0;
}

int cmd_repeat_value(const Options& o) {
  Game g = load_game(o.game);
  Rational t = o.t ? parse_flag_rational("--t", *o.t) : Rational(static_cast<unsigned long>(o.n));
  ValueResult r = exact_repeated_ns_value(g, o.n, t);
  std::cout << "v_ns(G^{" << to_string(t) << "/" << o.n << "}) = " << to_string(r.value) << "\n";
  return 0;
}

void print_bound(const std::string& label, const BoundReport& b, bool machine) {
  if (machine) {
    Rational lhs = b.target ? *b.target : Rational(0);
    std::cout << machine_line(label, lhs, b.bound, b.verdict) << "\n";
    return;
  }
  std::cout << label << "\n";
  if (b.t != 0) row("t", to_string(b.t));
  if (b.delta != 0) row("delta", to_string(b.delta_used) + (b.clamped ? " (clamped)" : ""));
  if (!b.warning.empty()) row("warning", b.warning);
  row("bound", up(b.bound) + (b.vacuous ? " [vacuous: >= 1]" : ""));
  row("ln bound", up(b.log_bound));
  row("Delta", to_string(b.provenance));
  if (b.target) {
    row("exact value", to_string(*b.target));
    row("verdict", to_string(b.verdict));
  }
}

int cmd_bounds(const Options& o) {
  Game g = load_game(o.game);
  ConstantsReport k = constants(g, parse_delta_mode(o.delta_mode));
  int status = 0;
  for (const auto& text : o.deltas) {
    Rational delta = parse_flag_rational("--delta", text);
    BoundReport b = ct_consistency(g, delta, o.n, k);
    print_bound("ct[n=" + std::to_string(o.n) + ",delta=" + to_string(delta) + "]", b, o.machine);
    if (!ok(b.verdict)) status = 1;
  }
  BoundReport p = pr_bound(g, o.n, k);
  p.target = exact_repeated_ns_value(g, o.n, Rational(static_cast<unsigned long>(o.n))).value;
  // v_ns(G^n) < 8 nu^n is strict.
  const bool holds = p.bound >= 1.0 ? *p.target <= 1 : *p.target < from_double(p.bound);
  p.verdict = !holds ? Verdict::fail : p.vacuous ? Verdict::vacuous : Verdict::pass;
  if (!ok(p.verdict)) status = 1;
  print_bound("pr[n=" + std::to_string(o.n) + "]", p, o.machine);
  return status;
}

int cmd_check(const Options& o) {
  Game g = load_game(o.game);
  SuiteOptions so;
  so.n = o.n;
  so.seed = o.seed;
  so.trials = o.trials;
  so.delta_mode = parse_delta_mode(o.delta_mode);
  std::vector<CheckLine> lines = run_suite(o.suite, g, so);
  int status = 0;
  if (!o.machine) std::cout << "checks for " << g.name() << " (suite " << o.suite << ")\n";
  for (const auto& c : lines) {
    if (!ok(c.verdict)) status = 1;
    if (o.machine) {
      std::cout << machine_line(c.name, c.lhs, c.rhs, c.verdict) << "\n";
    } else {
      std::cout << "  " << std::left << std::setw(8) << to_string(c.verdict) << std::setw(52) << c.name
                << "lhs=" << to_string(c.lhs) << "  rhs=" << up(c.rhs);
      if (!c.note.empty()) std::cout << "  " << c.note;
      std::cout << "\n";
    }
  }
  return status;
}

int cmd_simulate(const Options& o) {
  Game g = load_game(o.game);
  ValueResult base = o.kind == "classical" ? classical_value(g)
                     : o.kind == "ns"      ? ns_value(g)
                                           : throw UsageError("simulate --kind expects classical or ns");
  SimConfig cfg = SimConfig::product_of(base.witness, o.n, o.seed, o.trials);
  SimResult r = simulate(g, cfg);
  std::cout << "# generator " << kGeneratorName << " seed=" << r.seed << " trials=" << r.trials << " n=" << r.n
            << " strategy=" << r.source << "(" << o.kind << ")\n";
  write_histogram(std::cout, r);
  std::cout << "mean " << to_string(r.mean()) << "\n";
  for (std::size_t l = 0; l < r.n; ++l) {
    Rational rate(static_cast<unsigned long>(r.round_wins[l]), static_cast<unsigned long>(r.trials));
    rate.canonicalize();
    std::cout << "round " << l + 1 << " " << to_string(rate) << "\n";
  }
  if (!has_complete_support(g).complete) return 0;
  ConstantsReport k = constants(g, parse_delta_mode(o.delta_mode));
  std::vector<Rational> deltas;
  for (const auto& d : o.deltas) deltas.push_back(parse_flag_rational("--delta", d));
  if (deltas.empty()) deltas = {Rational(1, 10), Rational(1, 4), Rational(1, 2)};
  int status = 0;
  for (const auto& row_ : empirical_tail_report(r, g, k, deltas)) {
    if (!ok(row_.verdict)) status = 1;
    std::string name = "tail[delta=" + to_string(row_.delta) + "]";
    if (o.machine)
      std::cout << machine_line(name, row_.frequency, row_.ct_bound, row_.verdict) << "\n";
    else
      std::cout << name << " freq=" << to_string(row_.frequency) << " ct=" << up(row_.ct_bound)
                << " hoeffding=" << up(row_.hoeffding) << " se=" << up(row_.standard_error)
                << " verdict=" << to_string(row_.verdict) << "\n";
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal game values, repetition bounds and checks"};
  app.require_subcommand(1);
  Options o;

  auto add_game = [&](CLI::App* sub) { sub->add_option("--game", o.game, "builtin:NAME or a game file")->required(); };
  auto add_mode = [&](CLI::App* sub) {
    sub->add_option("--delta-mode", o.delta_mode, "exact:CAP or hadamard")->capture_default_str();
  };
  auto add_machine = [&](CLI::App* sub) { sub->add_flag("--machine", o.machine, "machine-readable check lines"); };

  auto* show = app.add_subcommand("show", "describe a game");
  add_game(show);
  show->add_option("--format", o.format, "text or file")->capture_default_str();

  auto* value = app.add_subcommand("value", "classical, non-signaling or almost non-signaling value");
  add_game(value);
  value->add_option("--kind", o.kind, "classical | ns | almost-ns")->capture_default_str();
  value->add_option("--eps", o.eps, "slack for almost-ns (p/q)")->capture_default_str();

  auto* cons = app.add_subcommand("constants", "pi_min, Delta, c, c', mu, nu");
  add_game(cons);
  add_mode(cons);
  add_machine(cons);

  auto* rep = app.add_subcommand("repeat-value", "exact non-signaling value of the t-out-of-n repetition");
  add_game(rep);
  rep->add_option("--n", o.n, "rounds")->capture_default_str()->check(CLI::PositiveNumber);
  rep->add_option("--t", o.t, "threshold (default n)");

  auto* bounds = app.add_subcommand("bounds", "concentration and parallel repetition bounds");
  add_game(bounds);
  bounds->add_option("--n", o.n, "rounds")->capture_default_str()->check(CLI::PositiveNumber);
  bounds->add_option("--delta", o.deltas, "delta (p/q), repeatable");
  add_mode(bounds);
  add_machine(bounds);

  auto* check = app.add_subcommand("check", "run invariant suites");
  add_game(check);
  check->add_option("--suite", o.suite, "robustness | main-lemma | sandwich | dist | all")->capture_default_str();
  check->add_option("--n", o.n, "rounds")->capture_default_str()->check(CLI::PositiveNumber);
  check->add_option("--seed", o.seed, "seed for randomised checks")->capture_default_str();
  check->add_option("--trials", o.trials, "Monte Carlo trials")->capture_default_str()->check(CLI::PositiveNumber);
  add_mode(check);
  add_machine(check);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo play of the product of an optimal strategy");
  add_game(sim);
  sim->add_option("--kind", o.kind, "classical | ns (base strategy)")->capture_default_str();
  sim->add_option("--n", o.n, "rounds")->capture_default_str()->check(CLI::PositiveNumber);
  sim->add_option("--seed", o.seed, "generator seed")->capture_default_str();
  sim->add_option("--trials", o.trials, "trials")->capture_default_str()->check(CLI::PositiveNumber);
  sim->add_option("--delta", o.deltas, "tail deltas (p/q), repeatable");
  add_mode(sim);
  add_machine(sim);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    if (code == 0) return 0;
    std::cerr << app.help();
    return 2;
  }

  try {
    if (*show) return cmd_show(o);
    if (*value) return cmd_value(o);
    if (*cons) return cmd_constants(o);
    if (*rep) return cmd_repeat_value(o);
    if (*bounds) return cmd_bounds(o);
    if (*check) return cmd_check(o);
    if (*sim) return cmd_simulate(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::parse_error:
      case ErrorKind::sum_not_one:
      case ErrorKind::shape_mismatch:
      case ErrorKind::index_out_of_range:
      case ErrorKind::unknown_name:
      case ErrorKind::non_positive_delta:
      case ErrorKind::non_positive_epsilon:
        return 2;
      default:
        return 3;
    }
  }
  return 2;
}
