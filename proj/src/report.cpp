#include "nsgame/report.hpp"

#include <cmath>
#include <cstdio>

namespace nsgame {

std::string float_literal(double v, Round dir) {
  std::string out = dir == Round::up ? "~up:" : "~down:";
  if (std::isinf(v)) return out + (v > 0 ? "inf" : "-inf");
  if (std::isnan(v)) return out + "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return out + buf;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::vacuous: return "vacuous";
  }
  return "fail";
}

std::string machine_line(const std::string& name, const Rational& lhs, double rhs, Verdict v) {
  return "check " + name + " lhs=" + to_string(lhs) + " rhs=" + float_literal(rhs, Round::up) +
         " verdict=" + to_string(v);
}

}  // namespace nsgame
