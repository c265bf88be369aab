#include "nsgame/game.hpp"

#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "nsgame/error.hpp"

namespace nsgame {

std::size_t default_cell_cap() {
  if (const char* env = std::getenv("NSGAME_CELL_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultCellCap;
}

GameShape::GameShape(std::vector<std::size_t> question_sizes, std::vector<std::size_t> answer_sizes,
                     std::size_t cap)
    : question_sizes_(std::move(question_sizes)), answer_sizes_(std::move(answer_sizes)) {
  if (question_sizes_.empty() || question_sizes_.size() != answer_sizes_.size())
    throw Error(ErrorKind::shape_mismatch, "question/answer size lists must be nonempty and of equal length");
  for (std::size_t s : question_sizes_)
    if (s == 0) throw Error(ErrorKind::shape_mismatch, "empty question alphabet");
  for (std::size_t s : answer_sizes_)
    if (s == 0) throw Error(ErrorKind::shape_mismatch, "empty answer alphabet");
  std::size_t nx = checked_product(question_sizes_, cap);
  std::size_t na = checked_product(answer_sizes_, cap);
  std::size_t both[] = {nx, na};
  checked_product(both, cap);
  questions_ = TupleIndexer(question_sizes_);
  answers_ = TupleIndexer(answer_sizes_);
}

Game::Game(std::string name, GameShape shape, std::vector<Rational> pi, std::vector<std::uint8_t> predicate)
    : name_(std::move(name)), shape_(std::move(shape)), pi_(std::move(pi)), predicate_(std::move(predicate)) {
  if (pi_.size() != shape_.num_questions())
    throw Error(ErrorKind::shape_mismatch, "pi table has " + std::to_string(pi_.size()) + " entries, expected " +
                                               std::to_string(shape_.num_questions()));
  if (predicate_.size() != shape_.cells())
    throw Error(ErrorKind::shape_mismatch, "predicate table size mismatch");
  Rational total = 0;
  for (const auto& p : pi_) {
    if (sgn(p) < 0) throw Error(ErrorKind::invalid_argument, "negative pi entry " + to_string(p));
    total += p;
  }
  if (total != 1) throw Error(ErrorKind::sum_not_one, "pi sums to " + to_string(total));
}

Game make_game(std::string name, std::size_t m, std::vector<std::size_t> question_sizes,
               std::vector<std::size_t> answer_sizes, const std::vector<PiEntry>& pi_entries,
               const std::vector<WinningTuple>& winning_tuples) {
  if (m == 0 || question_sizes.size() != m || answer_sizes.size() != m)
    throw Error(ErrorKind::shape_mismatch, "player count " + std::to_string(m) + " inconsistent with size lists");
  GameShape shape(std::move(question_sizes), std::move(answer_sizes));
  std::vector<Rational> pi(shape.num_questions(), Rational(0));
  std::vector<bool> seen(shape.num_questions(), false);
  for (const auto& e : pi_entries) {
    std::size_t x = shape.questions().encode(e.x);
    if (seen[x]) throw Error(ErrorKind::invalid_argument, "duplicate pi entry for question " + std::to_string(x));
    seen[x] = true;
    pi[x] = e.probability;
  }
  std::vector<std::uint8_t> predicate(shape.cells(), 0);
  for (const auto& w : winning_tuples) {
    std::size_t x = shape.questions().encode(w.x);
    std::size_t a = shape.answers().encode(w.a);
    predicate[shape.cell(x, a)] = 1;
  }
  return Game(std::move(name), std::move(shape), std::move(pi), std::move(predicate));
}

Strategy::Strategy(GameShape shape, std::vector<Rational> q) : shape_(std::move(shape)), q_(std::move(q)) {
  if (q_.size() != shape_.cells()) throw Error(ErrorKind::shape_mismatch, "strategy table size mismatch");
  const std::size_t na = shape_.num_answers();
  for (std::size_t x = 0; x < shape_.num_questions(); ++x) {
    Rational row = 0;
    for (std::size_t a = 0; a < na; ++a) {
      const Rational& v = q_[x * na + a];
      if (sgn(v) < 0) throw Error(ErrorKind::invalid_argument, "negative strategy entry");
      row += v;
    }
    if (row != 1)
      throw Error(ErrorKind::sum_not_one, "strategy row " + std::to_string(x) + " sums to " + to_string(row));
  }
}

Strategy Strategy::uniform(const GameShape& shape) {
  Rational p(1, shape.num_answers());
  p.canonicalize();
  return Strategy(shape, std::vector<Rational>(shape.cells(), p));
}

Strategy Strategy::deterministic(const GameShape& shape, const std::vector<std::size_t>& choice) {
  if (choice.size() != shape.num_questions()) throw Error(ErrorKind::shape_mismatch, "choice table size");
  std::vector<Rational> q(shape.cells(), Rational(0));
  for (std::size_t x = 0; x < choice.size(); ++x) {
    if (choice[x] >= shape.num_answers()) throw Error(ErrorKind::index_out_of_range, "answer index");
    q[shape.cell(x, choice[x])] = 1;
  }
  return Strategy(shape, std::move(q));
}

Rational WinRecord::fraction() const {
  if (per_round.empty()) return Rational(0);
  std::size_t won = 0;
  for (bool w : per_round) won += w ? 1 : 0;
  Rational r(static_cast<unsigned long>(won), static_cast<unsigned long>(per_round.size()));
  r.canonicalize();
  return r;
}

SupportInfo has_complete_support(const Game& g) {
  SupportInfo info;
  info.pi_min = g.pi().front();
  for (const auto& p : g.pi())
    if (p < info.pi_min) info.pi_min = p;
  info.complete = sgn(info.pi_min) > 0;
  return info;
}

bool is_free(const Game& g) {
  const auto& shape = g.shape();
  const std::size_t m = shape.players();
  std::vector<std::vector<Rational>> marginals(m);
  for (std::size_t i = 0; i < m; ++i) marginals[i].assign(shape.question_sizes()[i], Rational(0));
  for (std::size_t x = 0; x < shape.num_questions(); ++x)
    for (std::size_t i = 0; i < m; ++i) marginals[i][shape.questions().digit(x, i)] += g.pi(x);
  for (std::size_t x = 0; x < shape.num_questions(); ++x) {
    Rational prod = 1;
    for (std::size_t i = 0; i < m; ++i) prod *= marginals[i][shape.questions().digit(x, i)];
    if (prod != g.pi(x)) return false;
  }
  return true;
}

std::vector<std::size_t> split_rounds(const std::vector<std::size_t>& base_sizes, std::size_t n,
                                      std::size_t cap) {
  if (n == 0) throw Error(ErrorKind::invalid_argument, "repetition count must be >= 1");
  const std::size_t m = base_sizes.size();
  std::vector<std::size_t> rep_sizes(m);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::size_t> pow(n, base_sizes[i]);
    rep_sizes[i] = checked_product(pow, cap);
  }
  TupleIndexer base(base_sizes);
  TupleIndexer rep(rep_sizes);
  std::size_t total[] = {rep.size(), n};
  checked_product(total, cap);

  std::vector<std::size_t> out(rep.size() * n);
  std::vector<std::size_t> player_digits(m), round_tuple(m);
  for (std::size_t r = 0; r < rep.size(); ++r) {
    rep.decode_into(r, player_digits);
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t i = 0; i < m; ++i) {
        round_tuple[i] = player_digits[i] % base_sizes[i];
        player_digits[i] /= base_sizes[i];
      }
      out[r * n + l] = base.encode(round_tuple);
    }
  }
  return out;
}

GameShape repeat_shape(const GameShape& base, std::size_t n, std::size_t cap) {
  if (n == 0) throw Error(ErrorKind::invalid_argument, "repetition count must be >= 1");
  auto raise = [&](const std::vector<std::size_t>& sizes) {
    std::vector<std::size_t> out;
    for (std::size_t s : sizes) {
      std::vector<std::size_t> pow(n, s);
      out.push_back(checked_product(pow, cap));
    }
    return out;
  };
  return GameShape(raise(base.question_sizes()), raise(base.answer_sizes()), cap);
}

WinRecord round_wins(const Game& base, std::span<const std::size_t> x_rounds, std::span<const std::size_t> a_rounds) {
  WinRecord rec;
  rec.per_round.resize(x_rounds.size());
  for (std::size_t l = 0; l < x_rounds.size(); ++l) rec.per_round[l] = base.wins(x_rounds[l], a_rounds[l]);
  return rec;
}

namespace {

// Shared construction for repeat / threshold_repeat: `accept(wins)` maps the
// number of rounds won to the repeated predicate.
template <typename Accept>
Game build_repetition(const Game& g, std::size_t n, std::string name, std::size_t cap, Accept accept) {
  GameShape shape = repeat_shape(g.shape(), n, cap);
  auto xs = split_rounds(g.shape().question_sizes(), n, cap);
  auto as = split_rounds(g.shape().answer_sizes(), n, cap);
  const std::size_t nx = shape.num_questions(), na = shape.num_answers();

  std::vector<Rational> pi(nx);
  for (std::size_t x = 0; x < nx; ++x) {
    Rational p = 1;
    for (std::size_t l = 0; l < n; ++l) p *= g.pi(xs[x * n + l]);
    pi[x] = p;
  }
  std::vector<std::uint8_t> predicate(shape.cells(), 0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t a = 0; a < na; ++a) {
      std::size_t won = 0;
      for (std::size_t l = 0; l < n; ++l) won += g.wins(xs[x * n + l], as[a * n + l]) ? 1 : 0;
      predicate[shape.cell(x, a)] = accept(won) ? 1 : 0;
    }
  }
  return Game(std::move(name), std::move(shape), std::move(pi), std::move(predicate));
}

}  // namespace

Game repeat(const Game& g, std::size_t n, std::size_t cap) {
  return build_repetition(g, n, g.name() + "^" + std::to_string(n), cap, [n](std::size_t won) { return won == n; });
}

Game threshold_repeat(const Game& g, std::size_t n, const Rational& t, std::size_t cap) {
  return build_repetition(g, n, g.name() + "^" + to_string(t) + "/" + std::to_string(n), cap,
                          [&t](std::size_t won) { return Rational(static_cast<unsigned long>(won)) >= t; });
}

Rational game_value(const Game& g, const Strategy& s) {
  if (!(g.shape() == s.shape())) throw Error(ErrorKind::shape_mismatch, "strategy shape does not match game");
  const auto& shape = g.shape();
  Rational total = 0;
  for (std::size_t x = 0; x < shape.num_questions(); ++x) {
    if (sgn(g.pi(x)) == 0) continue;
    Rational row = 0;
    for (std::size_t a = 0; a < shape.num_answers(); ++a)
      if (g.wins(x, a)) row += s(x, a);
    total += g.pi(x) * row;
  }
  return total;
}

Strategy product_strategy(const Strategy& s, std::size_t n, std::size_t cap) {
  const auto& base = s.shape();
  GameShape shape = repeat_shape(base, n, cap);
  auto xs = split_rounds(base.question_sizes(), n, cap);
  auto as = split_rounds(base.answer_sizes(), n, cap);
  std::vector<Rational> q(shape.cells());
  for (std::size_t x = 0; x < shape.num_questions(); ++x) {
    for (std::size_t a = 0; a < shape.num_answers(); ++a) {
      Rational p = 1;
      for (std::size_t l = 0; l < n && sgn(p) != 0; ++l) p *= s(xs[x * n + l], as[a * n + l]);
      q[shape.cell(x, a)] = p;
    }
  }
  return Strategy(std::move(shape), std::move(q));
}

namespace {

Game uniform_game(std::string name, std::vector<std::size_t> qs, std::vector<std::size_t> as,
                  const std::function<bool(const std::vector<std::size_t>&, const std::vector<std::size_t>&)>& win) {
  GameShape shape(std::move(qs), std::move(as));
  Rational p(1, shape.num_questions());
  p.canonicalize();
  std::vector<Rational> pi(shape.num_questions(), p);
  std::vector<std::uint8_t> predicate(shape.cells(), 0);
  for (std::size_t x = 0; x < shape.num_questions(); ++x) {
    auto xt = shape.questions().decode(x);
    for (std::size_t a = 0; a < shape.num_answers(); ++a)
      predicate[shape.cell(x, a)] = win(xt, shape.answers().decode(a)) ? 1 : 0;
  }
  return Game(std::move(name), std::move(shape), std::move(pi), std::move(predicate));
}

Game random_free(const BuiltinParams& params) {
  if (params.m == 0 || params.size == 0) throw Error(ErrorKind::invalid_argument, "random_free needs m, size >= 1");
  std::mt19937_64 gen(params.seed);
  std::vector<std::size_t> sizes(params.m, params.size);
  GameShape shape(sizes, sizes);
  // Per-player integer weights in 1..4; explicit modulo keeps the draw
  // independent of the standard library's distribution implementations.
  std::vector<std::vector<Rational>> marginal(params.m);
  for (std::size_t i = 0; i < params.m; ++i) {
    std::vector<unsigned long> w(params.size);
    unsigned long total = 0;
    for (auto& wi : w) {
      wi = 1 + gen() % 4;
      total += wi;
    }
    for (auto wi : w) {
      Rational r(wi, total);
      r.canonicalize();
      marginal[i].push_back(r);
    }
  }
  std::vector<Rational> pi(shape.num_questions());
  for (std::size_t x = 0; x < shape.num_questions(); ++x) {
    Rational p = 1;
    for (std::size_t i = 0; i < params.m; ++i) p *= marginal[i][shape.questions().digit(x, i)];
    pi[x] = p;
  }
  std::vector<std::uint8_t> predicate(shape.cells());
  for (auto& v : predicate) v = static_cast<std::uint8_t>(gen() & 1u);
  std::string name = "random_free(m=" + std::to_string(params.m) + ",sizes=" + std::to_string(params.size) +
                     ",seed=" + std::to_string(params.seed) + ")";
  return Game(std::move(name), std::move(shape), std::move(pi), std::move(predicate));
}

}  // namespace

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"chsh", "ghz3", "guess_other", "random_free"};
  return names;
}

Game builtin(const std::string& name, const BuiltinParams& params) {
  using V = std::vector<std::size_t>;
  if (name == "chsh")
    return uniform_game("chsh", {2, 2}, {2, 2}, [](const V& x, const V& a) { return (a[0] ^ a[1]) == (x[0] & x[1]); });
  if (name == "guess_other")
    return uniform_game("guess_other", {2, 2}, {2, 2},
                        [](const V& x, const V& a) { return a[0] == x[1] && a[1] == x[0]; });
  if (name == "ghz3") {
    // Mermin-GHZ predicate on even-parity questions; odd-parity questions
    // are always won so that pi can be uniform over all eight triples.
    return uniform_game("ghz3", {2, 2, 2}, {2, 2, 2}, [](const V& x, const V& a) {
      if (((x[0] + x[1] + x[2]) & 1u) != 0) return true;
      return ((a[0] ^ a[1] ^ a[2]) & 1u) == ((x[0] | x[1] | x[2]) & 1u);
    });
  }
  if (name == "random_free") return random_free(params);
  throw Error(ErrorKind::unknown_name, "no builtin game named '" + name + "'");
}

}  // namespace nsgame
