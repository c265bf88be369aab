#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nsgame/rational.hpp"
#include "nsgame/tuple_index.hpp"

namespace nsgame {

inline constexpr std::size_t kDefaultCellCap = 10'000'000;

/// Cell cap for materialized tables; honours NSGAME_CELL_CAP when set.
std::size_t default_cell_cap();

/// Alphabet sizes of an m-player game plus the flattening of its tuples.
class GameShape {
 public:
  GameShape() = default;
  GameShape(std::vector<std::size_t> question_sizes, std::vector<std::size_t> answer_sizes,
            std::size_t cap = default_cell_cap());

  std::size_t players() const noexcept { return question_sizes_.size(); }
  const std::vector<std::size_t>& question_sizes() const noexcept { return question_sizes_; }
  const std::vector<std::size_t>& answer_sizes() const noexcept { return answer_sizes_; }
  const TupleIndexer& questions() const noexcept { return questions_; }
  const TupleIndexer& answers() const noexcept { return answers_; }
  std::size_t num_questions() const noexcept { return questions_.size(); }
  std::size_t num_answers() const noexcept { return answers_.size(); }
  std::size_t cells() const noexcept { return num_questions() * num_answers(); }

  /// Flat index into (x, a) tables.
  std::size_t cell(std::size_t x, std::size_t a) const noexcept { return x * num_answers() + a; }

  bool operator==(const GameShape& other) const {
    return question_sizes_ == other.question_sizes_ && answer_sizes_ == other.answer_sizes_;
  }

 private:
  std::vector<std::size_t> question_sizes_;
  std::vector<std::size_t> answer_sizes_;
  TupleIndexer questions_;
  TupleIndexer answers_;
};

/// A finite m-player nonlocal game with exact question distribution and a
/// 0/1 verification predicate. Immutable once constructed.
class Game {
 public:
  /// Validates tables: pi nonnegative summing to exactly one, sizes matching.
  Game(std::string name, GameShape shape, std::vector<Rational> pi, std::vector<std::uint8_t> predicate);

  const std::string& name() const noexcept { return name_; }
  const GameShape& shape() const noexcept { return shape_; }
  std::size_t players() const noexcept { return shape_.players(); }
  const std::vector<Rational>& pi() const noexcept { return pi_; }
  const Rational& pi(std::size_t x) const { return pi_[x]; }
  bool wins(std::size_t x, std::size_t a) const { return predicate_[shape_.cell(x, a)] != 0; }
  const std::vector<std::uint8_t>& predicate() const noexcept { return predicate_; }

  bool same_tables(const Game& other) const {
    return shape_ == other.shape_ && pi_ == other.pi_ && predicate_ == other.predicate_;
  }

 private:
  std::string name_;
  GameShape shape_;
  std::vector<Rational> pi_;
  std::vector<std::uint8_t> predicate_;
};

struct PiEntry {
  std::vector<std::size_t> x;
  Rational probability;
};

struct WinningTuple {
  std::vector<std::size_t> x;
  std::vector<std::size_t> a;
};

/// Builds a game from sparse pi entries and the list of winning (x, a)
/// tuples; everything not listed has pi = 0 / loses. Duplicated winning
/// tuples are idempotent; duplicated pi entries are rejected.
Game make_game(std::string name, std::size_t m, std::vector<std::size_t> question_sizes,
               std::vector<std::size_t> answer_sizes, const std::vector<PiEntry>& pi_entries,
               const std::vector<WinningTuple>& winning_tuples);

/// Conditional table q(a|x), indexed by GameShape::cell(x, a).
class Strategy {
 public:
  Strategy() = default;
  /// Validates nonnegativity and exact normalisation of every row.
  Strategy(GameShape shape, std::vector<Rational> q);

  const GameShape& shape() const noexcept { return shape_; }
  const std::vector<Rational>& table() const noexcept { return q_; }
  const Rational& operator()(std::size_t x, std::size_t a) const { return q_[shape_.cell(x, a)]; }

  bool operator==(const Strategy& other) const { return shape_ == other.shape_ && q_ == other.q_; }

  static Strategy uniform(const GameShape& shape);
  /// Answers a = choice[x] with certainty.
  static Strategy deterministic(const GameShape& shape, const std::vector<std::size_t>& choice);

 private:
  GameShape shape_;
  std::vector<Rational> q_;
};

struct WinRecord {
  std::vector<bool> per_round;

  Rational fraction() const;
};

struct SupportInfo {
  bool complete = false;
  Rational pi_min;
};

SupportInfo has_complete_support(const Game& g);
bool is_free(const Game& g);

/// Table of base flat indices per round: entry [r * n + l] is the base index
/// used in round l by the repeated flat index r.
std::vector<std::size_t> split_rounds(const std::vector<std::size_t>& base_sizes, std::size_t n,
                                      std::size_t cap = default_cell_cap());

/// Shape of the n-fold repetition: each alphabet raised to the n-th power.
GameShape repeat_shape(const GameShape& base, std::size_t n, std::size_t cap = default_cell_cap());

/// Per-round win indicators for one (x, a) outcome of the repeated game.
/// `x_rounds` / `a_rounds` hold the base indices of each round (rows of split_rounds).
WinRecord round_wins(const Game& base, std::span<const std::size_t> x_rounds,
                     std::span<const std::size_t> a_rounds);

Game repeat(const Game& g, std::size_t n, std::size_t cap = default_cell_cap());
Game threshold_repeat(const Game& g, std::size_t n, const Rational& t, std::size_t cap = default_cell_cap());

Rational game_value(const Game& g, const Strategy& s);

/// Plays `s` independently in every round.
Strategy product_strategy(const Strategy& s, std::size_t n, std::size_t cap = default_cell_cap());

struct BuiltinParams {
  std::size_t m = 2;
  std::size_t size = 2;
  std::uint64_t seed = 7;
};

/// chsh, ghz3, guess_other, random_free.
Game builtin(const std::string& name, const BuiltinParams& params = {});
const std::vector<std::string>& builtin_names();

}  // namespace nsgame
