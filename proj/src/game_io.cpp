#include "nsgame/game_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace nsgame {

namespace {

struct Token {
  std::string text;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' && line[j] != '#') ++j;
    out.push_back({std::string(line.substr(i, j - i)), i + 1});
    i = j;
  }
  return out;
}

std::size_t parse_index(const Token& t, std::size_t line) {
  if (t.text.empty() || t.text.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(line, t.column, "expected a nonnegative integer, got '" + t.text + "'");
  try {
    return static_cast<std::size_t>(std::stoull(t.text));
  } catch (const std::exception&) {
    throw ParseError(line, t.column, "integer '" + t.text + "' out of range");
  }
}

}  // namespace

Game parse_game(std::string_view text) {
  std::string name;
  std::size_t m = 0;
  std::vector<std::size_t> qs, as;
  std::vector<PiEntry> pi;
  std::set<std::vector<std::size_t>> pi_seen;
  std::vector<WinningTuple> wins;
  int stage = 0;  // headers seen so far: game, players, questions, answers
  const char* headers[] = {"game", "players", "questions", "answers"};

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    auto tok = tokenize(line);
    if (tok.empty()) continue;
    const std::string& key = tok[0].text;

    if (stage < 4) {
      if (key != headers[stage])
        throw ParseError(line_no, tok[0].column, std::string("expected '") + headers[stage] + "', got '" + key + "'");
      switch (stage) {
        case 0:
          if (tok.size() != 2) throw ParseError(line_no, 0, "usage: game <name>");
          name = tok[1].text;
          break;
        case 1:
          if (tok.size() != 2) throw ParseError(line_no, 0, "usage: players <m>");
          m = parse_index(tok[1], line_no);
          if (m == 0) throw ParseError(line_no, tok[1].column, "player count must be >= 1");
          break;
        default: {
          if (tok.size() != m + 1)
            throw ParseError(line_no, 0, "expected " + std::to_string(m) + " sizes after '" + key + "'");
          auto& sizes = stage == 2 ? qs : as;
          for (std::size_t i = 1; i < tok.size(); ++i) {
            std::size_t v = parse_index(tok[i], line_no);
            if (v == 0) throw ParseError(line_no, tok[i].column, "alphabet size must be >= 1");
            sizes.push_back(v);
          }
        }
      }
      ++stage;
      continue;
    }

    if (key == "pi") {
      if (tok.size() != m + 2) throw ParseError(line_no, 0, "usage: pi <x1> ... <x" + std::to_string(m) + "> <p/q>");
      PiEntry e;
      for (std::size_t i = 0; i < m; ++i) {
        std::size_t v = parse_index(tok[1 + i], line_no);
        if (v >= qs[i]) throw ParseError(line_no, tok[1 + i].column, "question index out of range");
        e.x.push_back(v);
      }
      const Token& p = tok[m + 1];
      try {
        e.probability = parse_rational(p.text);
      } catch (const std::exception&) {
        throw ParseError(line_no, p.column, "bad rational '" + p.text + "'");
      }
      if (sgn(e.probability) < 0) throw ParseError(line_no, p.column, "negative probability");
      if (!pi_seen.insert(e.x).second) throw ParseError(line_no, tok[1].column, "duplicate pi entry");
      pi.push_back(std::move(e));
    } else if (key == "win") {
      if (tok.size() != 2 * m + 1) throw ParseError(line_no, 0, "usage: win <x1> ... <xm> <a1> ... <am>");
      WinningTuple w;
      for (std::size_t i = 0; i < m; ++i) {
        std::size_t x = parse_index(tok[1 + i], line_no);
        if (x >= qs[i]) throw ParseError(line_no, tok[1 + i].column, "question index out of range");
        w.x.push_back(x);
        std::size_t a = parse_index(tok[1 + m + i], line_no);
        if (a >= as[i]) throw ParseError(line_no, tok[1 + m + i].column, "answer index out of range");
        w.a.push_back(a);
      }
      wins.push_back(std::move(w));
    } else {
      throw ParseError(line_no, tok[0].column, "unknown directive '" + key + "'");
    }
  }
  if (stage < 4) throw ParseError(line_no, 0, std::string("missing '") + headers[stage] + "' line");
  return make_game(std::move(name), m, std::move(qs), std::move(as), pi, wins);
}

Game parse_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::parse_error, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_game(buf.str());
}

void write_game(std::ostream& out, const Game& g) {
  const auto& shape = g.shape();
  const std::size_t m = shape.players();
  out << "game " << g.name() << "\n";
  out << "players " << m << "\n";
  out << "questions";
  for (auto v : shape.question_sizes()) out << " " << v;
  out << "\nanswers";
  for (auto v : shape.answer_sizes()) out << " " << v;
  out << "\n";
  for (std::size_t x = 0; x < shape.num_questions(); ++x) {
    if (sgn(g.pi(x)) == 0) continue;
    out << "pi";
    for (std::size_t i = 0; i < m; ++i) out << " " << shape.questions().digit(x, i);
    out << " " << to_string(g.pi(x)) << "\n";
  }
  for (std::size_t x = 0; x < shape.num_questions(); ++x)
    for (std::size_t a = 0; a < shape.num_answers(); ++a) {
      if (!g.wins(x, a)) continue;
      out << "win";
      for (std::size_t i = 0; i < m; ++i) out << " " << shape.questions().digit(x, i);
      for (std::size_t i = 0; i < m; ++i) out << " " << shape.answers().digit(a, i);
      out << "\n";
    }
}

std::string render_game(const Game& g) {
  std::ostringstream s;
  write_game(s, g);
  return s.str();
}

}  // namespace nsgame
