#include "nsgame/lp.hpp"

#include <algorithm>
#include <utility>
#include <ostream>
#include <string>

#include "nsgame/error.hpp"
#include "simplex_tableau.hpp"

namespace nsgame {

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

std::size_t LinearProgram::add_row(std::vector<LpTerm> terms, RowSense sense, Rational rhs) {
  rows.push_back(LpRow{std::move(terms), sense, std::move(rhs)});
  return rows.size() - 1;
}

void LinearProgram::validate() const {
  if (objective.size() != num_vars || nonnegative.size() != num_vars)
    throw Error(ErrorKind::shape_mismatch, "objective/bounds length differs from variable count");
  for (const auto& row : rows)
    for (const auto& t : row.terms)
      if (t.var >= num_vars) throw Error(ErrorKind::index_out_of_range, "row references variable " + std::to_string(t.var));
}

namespace detail {

StandardForm standard_form(const LinearProgram& lp) {
  lp.validate();
  StandardForm sf;
  sf.rows = lp.rows.size();
  std::size_t col = 0;
  sf.plus_col.assign(lp.num_vars, npos);
  sf.minus_col.assign(lp.num_vars, npos);
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    sf.plus_col[j] = col++;
    sf.cost.push_back(lp.objective[j]);
    if (!lp.nonnegative[j]) {
      sf.minus_col[j] = col++;
      sf.cost.push_back(-lp.objective[j]);
    }
  }
  sf.row_terms.resize(sf.rows);
  sf.rhs.resize(sf.rows);
  sf.row_sign.resize(sf.rows);
  sf.identity_col.assign(sf.rows, npos);
  std::vector<std::pair<std::size_t, int>> slack(sf.rows, {npos, 0});
  for (std::size_t r = 0; r < sf.rows; ++r) {
    const auto& row = lp.rows[r];
    if (row.sense != RowSense::eq) {
      slack[r] = {col++, row.sense == RowSense::le ? 1 : -1};
      sf.cost.push_back(Rational(0));
    }
  }
  sf.artificial.assign(col, false);
  for (std::size_t r = 0; r < sf.rows; ++r) {
    const auto& row = lp.rows[r];
    int sign = sgn(row.rhs) < 0 ? -1 : 1;
    sf.row_sign[r] = sign;
    sf.rhs[r] = sign < 0 ? Rational(-row.rhs) : row.rhs;
    std::vector<Rational> merged;
    auto& terms = sf.row_terms[r];
    for (const auto& t : row.terms) {
      if (sgn(t.coef) == 0) continue;
      Rational c = sign < 0 ? Rational(-t.coef) : t.coef;
      terms.push_back({sf.plus_col[t.var], c});
      if (sf.minus_col[t.var] != npos) terms.push_back({sf.minus_col[t.var], -c});
    }
    if (slack[r].first != npos) {
      int s = slack[r].second * sign;
      terms.push_back({slack[r].first, Rational(s)});
      if (s > 0) sf.identity_col[r] = slack[r].first;
    }
    // Duplicate variable mentions are summed.
    std::sort(terms.begin(), terms.end(), [](const LpTerm& a, const LpTerm& b) { return a.var < b.var; });
    std::vector<LpTerm> dedup;
    for (auto& t : terms) {
      if (!dedup.empty() && dedup.back().var == t.var)
        dedup.back().coef += t.coef;
      else
        dedup.push_back(t);
    }
    std::erase_if(dedup, [](const LpTerm& t) { return sgn(t.coef) == 0; });
    terms = std::move(dedup);
  }
  for (std::size_t r = 0; r < sf.rows; ++r) {
    if (sf.identity_col[r] != npos) continue;
    sf.identity_col[r] = col++;
    sf.artificial.push_back(true);
    sf.cost.push_back(Rational(0));
    sf.row_terms[r].push_back({sf.identity_col[r], Rational(1)});
  }
  sf.cols = col;
  return sf;
}

}  // namespace detail

namespace {

std::size_t iteration_cap_for(const detail::StandardForm& sf) {
  std::size_t n = sf.rows + sf.cols;
  return 10 * n * n;
}

template <typename S>
std::vector<S> point_from(const detail::StandardForm& sf, const std::vector<S>& z, std::size_t num_vars) {
  std::vector<S> x(num_vars);
  for (std::size_t j = 0; j < num_vars; ++j) {
    x[j] = z[sf.plus_col[j]];
    if (sf.minus_col[j] != detail::npos) x[j] -= z[sf.minus_col[j]];
  }
  return x;
}

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  return s;
}

Rational row_activity(const LpRow& row, const std::vector<Rational>& x) {
  Rational s = 0;
  for (const auto& t : row.terms) s += t.coef * x[t.var];
  return s;
}

void finish_optimal(const LinearProgram& lp, LpSolution& sol) {
  sol.value = dot(lp.objective, sol.point);
  if (!verify_primal(lp, sol))
    throw Error(ErrorKind::invalid_argument, "internal: optimal point failed exact feasibility re-check");
}

}  // namespace

std::size_t default_iteration_cap(const LinearProgram& lp) { return iteration_cap_for(detail::standard_form(lp)); }

LpSolution solve_exact(const LinearProgram& lp, const SolveOptions& options) {
  detail::StandardForm sf = detail::standard_form(lp);
  std::size_t cap = options.iteration_cap ? options.iteration_cap : iteration_cap_for(sf);
  detail::Tableau<Rational> tab(sf, cap, options.bit_cap);
  detail::PhaseResult res = tab.run();
  LpSolution sol;
  sol.iterations = tab.iterations();
  sol.path = SolvePath::exact_simplex;
  sol.basis = tab.basis();
  if (res == detail::PhaseResult::iteration_cap)
    throw Error(ErrorKind::cap_exceeded, "simplex iteration cap " + std::to_string(cap) + " reached");
  if (tab.infeasible()) {
    sol.status = LpStatus::infeasible;
    return sol;
  }
  if (res == detail::PhaseResult::unbounded) {
    sol.status = LpStatus::unbounded;
    return sol;
  }
  sol.status = LpStatus::optimal;
  sol.point = point_from(sf, tab.column_values(), lp.num_vars);
  auto y = tab.row_duals();
  sol.dual.resize(sf.rows);
  for (std::size_t r = 0; r < sf.rows; ++r) sol.dual[r] = sf.row_sign[r] < 0 ? Rational(-y[r]) : y[r];
  finish_optimal(lp, sol);
  if (!verify_dual(lp, sol))
    throw Error(ErrorKind::invalid_argument, "internal: exact dual certificate failed verification");
  return sol;
}

namespace {

struct FloatRun {
  detail::PhaseResult result;
  bool infeasible = false;
  std::vector<double> point;
  std::vector<double> dual;
  std::vector<std::size_t> basis;
  std::size_t iterations = 0;
};

FloatRun run_float(const LinearProgram& lp, std::size_t cap) {
  detail::StandardForm sf = detail::standard_form(lp);
  if (cap == 0) cap = iteration_cap_for(sf);
  detail::Tableau<double> tab(sf, cap, 0);
  FloatRun out;
  out.result = tab.run();
  out.infeasible = tab.infeasible();
  out.iterations = tab.iterations();
  out.basis = tab.basis();
  if (out.result == detail::PhaseResult::optimal && !out.infeasible) {
    out.point = point_from(sf, tab.column_values(), lp.num_vars);
    auto y = tab.row_duals();
    out.dual.resize(sf.rows);
    for (std::size_t r = 0; r < sf.rows; ++r) out.dual[r] = sf.row_sign[r] < 0 ? -y[r] : y[r];
  }
  return out;
}

}  // namespace

double solve_estimate(const LinearProgram& lp, LpStatus* status) {
  FloatRun run = run_float(lp, 0);
  LpStatus st = run.infeasible ? LpStatus::infeasible
                : run.result == detail::PhaseResult::unbounded ? LpStatus::unbounded
                                                                : LpStatus::optimal;
  if (status) *status = st;
  if (st != LpStatus::optimal) return 0.0;
  double v = 0.0;
  for (std::size_t j = 0; j < lp.num_vars; ++j) v += lp.objective[j].get_d() * run.point[j];
  return v;
}

namespace {

LpSolution solve_impl(const LinearProgram& lp, const SolveOptions& options, const std::vector<Rational>* hint) {
  detail::StandardForm sf = detail::standard_form(lp);
  if (sf.rows * (sf.cols + 1) <= options.exact_cell_limit) return solve_exact(lp, options);

  FloatRun run = run_float(lp, options.iteration_cap);
  if (run.result == detail::PhaseResult::optimal && !run.infeasible) {
    LpSolution sol;
    sol.status = LpStatus::optimal;
    sol.path = SolvePath::float_guided;
    sol.iterations = run.iterations;
    sol.basis = run.basis;
    // Float noise grows with the pivot count, so coarser snaps get a turn.
    const std::pair<std::int64_t, double> ladder[] = {
        {options.max_denominator, 1e-9}, {1'000'000, 1e-7}, {10'000, 1e-6}};
    auto snap = [&](const std::vector<double>& v, std::int64_t den, double tol) {
      std::vector<Rational> out;
      out.reserve(v.size());
      for (double x : v) out.push_back(approximate(x, std::min(den, options.max_denominator), tol));
      return out;
    };
    bool primal_ok = false;
    for (const auto& [den, tol] : ladder) {
      sol.point = snap(run.point, den, tol);
      for (std::size_t j = 0; j < lp.num_vars; ++j)
        if (lp.nonnegative[j] && sgn(sol.point[j]) < 0) sol.point[j] = 0;
      sol.value = dot(lp.objective, sol.point);
      if ((primal_ok = verify_primal(lp, sol))) break;
    }
    if (!primal_ok && hint && hint->size() == lp.num_vars) {
      sol.point = *hint;
      sol.value = dot(lp.objective, sol.point);
      primal_ok = verify_primal(lp, sol);
    }
    if (primal_ok)
      for (const auto& [den, tol] : ladder) {
        sol.dual = snap(run.dual, den, tol);
        if (verify_dual(lp, sol)) return sol;
      }
  }
  // Guidance failed to certify (or claimed infeasible/unbounded): decide exactly.
  return solve_exact(lp, options);
}

}  // namespace

LpSolution solve(const LinearProgram& lp, const SolveOptions& options) { return solve_impl(lp, options, nullptr); }

LpSolution solve(const LinearProgram& lp, const SolveOptions& options, const std::vector<Rational>& primal_hint) {
  return solve_impl(lp, options, &primal_hint);
}

std::optional<LpSolution> certify(const LinearProgram& lp, std::vector<Rational> point, std::vector<Rational> dual) {
  if (point.size() != lp.num_vars || dual.size() != lp.rows.size()) return std::nullopt;
  LpSolution sol;
  sol.status = LpStatus::optimal;
  sol.path = SolvePath::certificate;
  sol.point = std::move(point);
  sol.dual = std::move(dual);
  sol.value = dot(lp.objective, sol.point);
  if (!verify_primal(lp, sol) || !verify_dual(lp, sol)) return std::nullopt;
  return sol;
}

bool verify_primal(const LinearProgram& lp, const LpSolution& sol) {
  if (sol.status != LpStatus::optimal || sol.point.size() != lp.num_vars) return false;
  for (std::size_t j = 0; j < lp.num_vars; ++j)
    if (lp.nonnegative[j] && sgn(sol.point[j]) < 0) return false;
  for (const auto& row : lp.rows) {
    Rational act = row_activity(row, sol.point);
    switch (row.sense) {
      case RowSense::le: if (act > row.rhs) return false; break;
      case RowSense::ge: if (act < row.rhs) return false; break;
      case RowSense::eq: if (act != row.rhs) return false; break;
    }
  }
  return dot(lp.objective, sol.point) == sol.value;
}

bool verify_dual(const LinearProgram& lp, const LpSolution& sol) {
  if (sol.dual.size() != lp.rows.size()) return false;
  std::vector<Rational> reduced(lp.num_vars, Rational(0));  // A^T y
  Rational by = 0;
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const auto& row = lp.rows[i];
    const Rational& y = sol.dual[i];
    if (row.sense == RowSense::le && sgn(y) < 0) return false;
    if (row.sense == RowSense::ge && sgn(y) > 0) return false;
    if (sgn(y) == 0) continue;
    by += row.rhs * y;
    for (const auto& t : row.terms) reduced[t.var] += t.coef * y;
  }
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    if (lp.nonnegative[j]) {
      if (reduced[j] < lp.objective[j]) return false;
    } else if (reduced[j] != lp.objective[j]) {
      return false;
    }
  }
  return by == sol.value;
}

LinearProgram dual_program(const LinearProgram& lp) {
  lp.validate();
  // Dual variable per primal row; ge rows use w = -y >= 0.
  LinearProgram d(lp.rows.size());
  std::vector<int> flip(lp.rows.size(), 1);
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const auto& row = lp.rows[i];
    if (row.sense == RowSense::ge) flip[i] = -1;
    d.nonnegative[i] = row.sense != RowSense::eq;
    d.objective[i] = -row.rhs * flip[i];
  }
  std::vector<std::vector<LpTerm>> cols(lp.num_vars);
  for (std::size_t i = 0; i < lp.rows.size(); ++i)
    for (const auto& t : lp.rows[i].terms) cols[t.var].push_back({i, t.coef * flip[i]});
  for (std::size_t j = 0; j < lp.num_vars; ++j)
    d.add_row(std::move(cols[j]), lp.nonnegative[j] ? RowSense::ge : RowSense::eq, lp.objective[j]);
  return d;
}

InequalityForm inequality_form(const LinearProgram& lp) {
  lp.validate();
  std::size_t count = 0;
  for (const auto& row : lp.rows) count += row.sense == RowSense::eq ? 2 : 1;
  for (bool nn : lp.nonnegative) count += nn ? 1 : 0;
  InequalityForm f;
  f.a = Matrix(count, lp.num_vars);
  f.b.reserve(count);
  std::size_t r = 0;
  auto emit = [&](const LpRow& row, int sign, std::size_t origin) {
    for (const auto& t : row.terms) f.a(r, t.var) += sign * t.coef;
    f.b.push_back(sign * row.rhs);
    f.origin.push_back(origin);
    ++r;
  };
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const auto& row = lp.rows[i];
    switch (row.sense) {
      case RowSense::le: emit(row, 1, i); break;
      case RowSense::ge: emit(row, -1, i); break;
      case RowSense::eq:
        emit(row, 1, i);
        emit(row, -1, i);
        break;
    }
  }
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    if (!lp.nonnegative[j]) continue;
    f.a(r, j) = -1;
    f.b.push_back(Rational(0));
    f.origin.push_back(lp.rows.size() + j);
    ++r;
  }
  return f;
}

void write_lp_text(std::ostream& out, const LinearProgram& lp, const std::string& name) {
  auto term = [&](const Rational& c, std::size_t var, bool first) {
    std::string s;
    if (sgn(c) < 0)
      s += first ? "-" : " - ";
    else if (!first)
      s += " + ";
    Rational a = abs(c);
    if (a != 1) s += to_string(a) + " ";
    s += "x" + std::to_string(var);
    return s;
  };
  out << "\\ " << name << "\n";
  out << "Maximize\n obj:";
  bool first = true;
  for (std::size_t j = 0; j < lp.num_vars; ++j) {
    if (sgn(lp.objective[j]) == 0) continue;
    out << " " << term(lp.objective[j], j, first);
    first = false;
  }
  if (first) out << " 0 x0";
  out << "\nSubject To\n";
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    const auto& row = lp.rows[i];
    out << " r" << i << ":";
    bool f = true;
    for (const auto& t : row.terms) {
      if (sgn(t.coef) == 0) continue;
      out << " " << term(t.coef, t.var, f);
      f = false;
    }
    if (f) out << " 0 x0";
    out << (row.sense == RowSense::le ? " <= " : row.sense == RowSense::ge ? " >= " : " = ") << to_string(row.rhs)
        << "\n";
  }
  out << "Bounds\n";
  for (std::size_t j = 0; j < lp.num_vars; ++j)
    out << " " << (lp.nonnegative[j] ? "0 <= x" + std::to_string(j) : "x" + std::to_string(j) + " free") << "\n";
  out << "End\n";
}

}  // namespace nsgame
