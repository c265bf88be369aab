#include "nsgame/rational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nsgame/error.hpp"
#include "nsgame/rounding.hpp"

namespace nsgame {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::sum_not_one: return "SumNotOne";
    case ErrorKind::shape_mismatch: return "ShapeMismatch";
    case ErrorKind::index_out_of_range: return "IndexOutOfRange";
    case ErrorKind::cap_exceeded: return "CapExceeded";
    case ErrorKind::unknown_name: return "UnknownName";
    case ErrorKind::zero_probability_event: return "ZeroProbabilityEvent";
    case ErrorKind::empty_subset: return "EmptySubset";
    case ErrorKind::non_positive_epsilon: return "NonPositiveEpsilon";
    case ErrorKind::budget_exceeded: return "BudgetExceeded";
    case ErrorKind::non_integer_entries: return "NonIntegerEntries";
    case ErrorKind::no_complete_support: return "NoCompleteSupport";
    case ErrorKind::non_positive_delta: return "NonPositiveDelta";
    case ErrorKind::signaling_strategy: return "SignalingStrategy";
    case ErrorKind::k_too_large: return "KTooLarge";
    case ErrorKind::parse_error: return "ParseError";
    case ErrorKind::numeric_overflow_cap: return "NumericOverflowCap";
    case ErrorKind::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  auto fail = [&] { throw Error(ErrorKind::parse_error, "bad rational '" + std::string(text) + "'"); };
  if (text.empty()) fail();
  auto is_int = [](std::string_view s) {
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  std::string s(text);
  if (s[0] == '+') s.erase(0, 1);
  auto slash = s.find('/');
  if (slash == std::string::npos) {
    if (!is_int(s)) fail();
    return Rational(BigInt(s));
  }
  std::string num = s.substr(0, slash), den = s.substr(slash + 1);
  if (!is_int(num) || !is_int(den) || den[0] == '-') fail();
  BigInt d(den);
  if (d == 0) fail();
  Rational r(BigInt(num), d);
  r.canonicalize();
  return r;
}

double to_double_up(const Rational& r) {
  double d = r.get_d();  // truncates toward zero
  Rational back = from_double(d);
  while (back < r) {
    d = rounding::up(d);
    back = from_double(d);
  }
  return d;
}

double to_double_down(const Rational& r) {
  double d = r.get_d();
  Rational back = from_double(d);
  while (back > r) {
    d = rounding::down(d);
    back = from_double(d);
  }
  return d;
}

Rational from_double(double d) {
  Rational r(d);  // exact for finite doubles
  return r;
}

Rational approximate(double x, std::int64_t max_den, double tol) {
  const bool neg = x < 0;
  const double v = std::fabs(x);
  const double bound = tol * std::max(1.0, v);
  BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double rem = v;
  for (int iter = 0; iter < 64; ++iter) {
    double a = std::floor(rem);
    if (a > 9e18) break;
    BigInt ai;
    mpz_set_d(ai.get_mpz_t(), a);
    BigInt p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    if (std::fabs(v - p1.get_d() / q1.get_d()) <= bound) break;
    double frac = rem - a;
    if (frac <= 0.0) break;
    rem = 1.0 / frac;
  }
  if (q1 == 0) return Rational(0);
  Rational r(neg ? BigInt(-p1) : p1, q1);
  r.canonicalize();
  return r;
}

double log2_up(const Rational& r) {
  if (r <= 0) throw Error(ErrorKind::invalid_argument, "log2 of non-positive value");
  if (r == 1) return 0.0;
  long en = 0, ed = 0;
  double mn = mpz_get_d_2exp(&en, r.get_num_mpz_t());
  double md = mpz_get_d_2exp(&ed, r.get_den_mpz_t());
  // r = (mn / md) * 2^(en - ed), mantissas in [0.5, 1)
  double val = std::log2(mn) - std::log2(md) + static_cast<double>(en - ed);
  return rounding::up(val, 4);
}

std::size_t bit_size(const Rational& r) {
  return mpz_sizeinbase(r.get_num_mpz_t(), 2) + mpz_sizeinbase(r.get_den_mpz_t(), 2);
}

}  // namespace nsgame
