#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>

#include "nsgame/error.hpp"
#include "nsgame/game.hpp"

namespace nsgame {

/// Malformed game text. Line and column are 1-based; column 0 means the
/// whole line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& reason)
      : Error(ErrorKind::parse_error, "line " + std::to_string(line) +
                                          (column ? ":" + std::to_string(column) : std::string()) + ": " + reason),
        line(line),
        column(column) {}

  std::size_t line;
  std::size_t column;
};

/// Text format:
///   game <name>
///   players <m>
///   questions <n1> ... <nm>
///   answers <k1> ... <km>
///   pi <x1> ... <xm> <p/q>          (omitted tuples have pi = 0)
///   win <x1> ... <xm> <a1> ... <am>
/// 0-based indices, `#` to end of line is a comment. Validation errors from
/// make_game (SumNotOne, ...) propagate unchanged.
Game parse_game(std::string_view text);
Game parse_game_file(const std::string& path);

/// Inverse of parse_game: pi lines for nonzero entries, win lines in
/// (x, a) order.
void write_game(std::ostream& out, const Game& g);
std::string render_game(const Game& g);

}  // namespace nsgame
