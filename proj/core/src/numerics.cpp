#include "npir/numerics.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace npir {

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binary_entropy: p outside [0,1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double inverse_binary_entropy(double h) {
  if (!(h >= 0.0 && h <= 1.0)) throw std::domain_error("inverse_binary_entropy: h outside [0,1]");
  if (h == 0.0) return 0.0;
  if (h == 1.0) return 0.5;
  double lo = 0.0, hi = 0.5;
  // bisection, not Newton: dH/dp blows up at p=0
  while (hi - lo > 1e-12) {
    double mid = 0.5 * (lo + hi);
    if (binary_entropy(mid) < h)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw std::domain_error("to_rational: non-finite value");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  double frac = std::frexp(x, &exp);  // x = frac * 2^exp, |frac| in [0.5, 1)
  long long mant = static_cast<long long>(std::ldexp(frac, 53));
  exp -= 53;
  Rational r(mant);
  using Int = boost::multiprecision::cpp_int;
  if (exp >= 0) {
    r *= Rational(Int(1) << exp);
  } else {
    r /= Rational(Int(1) << (-exp));
  }
  return r;
}

double to_double(const Rational& q) { return static_cast<double>(q); }

namespace {

template <typename F>
struct FieldOps {
  static constexpr double tol = 1e-9;
  static bool pos(const F& v) { return v > tol; }
  static bool neg(const F& v) { return v < -tol; }
  static bool nonzero(const F& v) { return v > tol || v < -tol; }
};

template <>
struct FieldOps<Rational> {
  static bool pos(const Rational& v) { return v > 0; }
  static bool neg(const Rational& v) { return v < 0; }
  static bool nonzero(const Rational& v) { return v != 0; }
};

// Condensed (Tucker) tableau: rows = basic variables, cols = nonbasic.
// Dictionary: x_basic[i] = b[i] - sum_j A[i][j] * x_nonbasic[j]
//             z = z0 + sum_j c[j] * x_nonbasic[j]
template <typename F>
class SimplexTableau {
 public:
  SimplexTableau(std::vector<std::vector<F>> A, std::vector<F> b, std::size_t nvars)
      : A_(std::move(A)), b_(std::move(b)), c_(nvars, F(0)), z0_(0) {
    for (std::size_t j = 0; j < nvars; ++j) col_label_.push_back(static_cast<int>(j));
    for (std::size_t i = 0; i < A_.size(); ++i)
      row_label_.push_back(static_cast<int>(nvars + i));
  }

  std::size_t rows() const { return A_.size(); }
  std::size_t cols() const { return col_label_.size(); }

  void set_objective(const std::vector<F>& obj_structural) {
    // express z = sum_v obj[v] * x_v through the current dictionary
    for (auto& cj : c_) cj = F(0);
    z0_ = F(0);
    for (std::size_t v = 0; v < obj_structural.size(); ++v) {
      const F& w = obj_structural[v];
      if (w == 0) continue;
      bool basic = false;
      for (std::size_t i = 0; i < rows(); ++i) {
        if (row_label_[i] == static_cast<int>(v)) {
          z0_ += w * b_[i];
          for (std::size_t j = 0; j < cols(); ++j) c_[j] -= w * A_[i][j];
          basic = true;
          break;
        }
      }
      if (basic) continue;
      for (std::size_t j = 0; j < cols(); ++j)
        if (col_label_[j] == static_cast<int>(v)) {
          c_[j] += w;
          break;
        }
    }
  }

  void pivot(std::size_t r, std::size_t s) {
    F p = A_[r][s];
    F inv = F(1) / p;
    b_[r] *= inv;
    for (std::size_t j = 0; j < cols(); ++j)
      if (j != s) A_[r][j] *= inv;
    A_[r][s] = inv;
    for (std::size_t i = 0; i < rows(); ++i) {
      if (i == r) continue;
      F f = A_[i][s];
      if (f == 0) continue;
      b_[i] -= f * b_[r];
      for (std::size_t j = 0; j < cols(); ++j)
        if (j != s) A_[i][j] -= f * A_[r][j];
      A_[i][s] = -f * inv;
    }
    F f = c_[s];
    if (f != 0) {
      z0_ += f * b_[r];
      for (std::size_t j = 0; j < cols(); ++j)
        if (j != s) c_[j] -= f * A_[r][j];
      c_[s] = -f * inv;
    }
    std::swap(row_label_[r], col_label_[s]);
  }

  // Bland's rule anti-cycling simplex on the current objective.
  // Returns false when unbounded.
  bool optimize() {
    for (;;) {
      int s = -1;
      for (std::size_t j = 0; j < cols(); ++j)
        if (FieldOps<F>::pos(c_[j]) && (s < 0 || col_label_[j] < col_label_[s]))
          s = static_cast<int>(j);
      if (s < 0) return true;
      int r = -1;
      F best{};
      for (std::size_t i = 0; i < rows(); ++i) {
        if (!FieldOps<F>::pos(A_[i][static_cast<std::size_t>(s)])) continue;
        F ratio = b_[i] / A_[i][static_cast<std::size_t>(s)];
        if (r < 0 || ratio < best ||
            (ratio == best && row_label_[i] < row_label_[r]))
          r = static_cast<int>(i), best = ratio;
      }
      if (r < 0) return false;
      pivot(static_cast<std::size_t>(r), static_cast<std::size_t>(s));
    }
  }

  // Drive all b >= 0 with an auxiliary variable; true when a feasible basis exists.
  bool make_feasible() {
    std::size_t worst = 0;
    bool any_neg = false;
    for (std::size_t i = 0; i < rows(); ++i)
      if (FieldOps<F>::neg(b_[i]) && (!any_neg || b_[i] < b_[worst])) worst = i, any_neg = true;
    if (!any_neg) return true;

    const int aux = -1;  // label below every real variable id
    for (std::size_t i = 0; i < rows(); ++i) A_[i].push_back(F(-1));
    col_label_.push_back(aux);
    c_.push_back(F(0));
    std::vector<F> saved_c = c_;
    F saved_z0 = z0_;
    for (auto& cj : c_) cj = F(0);
    c_.back() = F(-1);  // maximize -x_aux
    z0_ = F(0);
    pivot(worst, cols() - 1);
    optimize();  // bounded by construction (aux >= 0)
    bool feasible = !FieldOps<F>::nonzero(z0_);
    if (feasible) {
      // force aux out of the basis if it parked there at value 0
      for (std::size_t i = 0; i < rows(); ++i) {
        if (row_label_[i] != aux) continue;
        std::size_t s = 0;
        bool found = false;
        for (std::size_t j = 0; j < cols(); ++j)
          if (FieldOps<F>::nonzero(A_[i][j]) && col_label_[j] != aux) {
            s = j;
            found = true;
            break;
          }
        if (found) {
          pivot(i, s);
        } else {  // all-zero row: x_aux = 0 identically; drop the row
          A_.erase(A_.begin() + static_cast<long>(i));
          b_.erase(b_.begin() + static_cast<long>(i));
          row_label_.erase(row_label_.begin() + static_cast<long>(i));
        }
        break;
      }
      for (std::size_t j = 0; j < cols(); ++j) {
        if (col_label_[j] != aux) continue;
        for (std::size_t i = 0; i < rows(); ++i)
          A_[i].erase(A_[i].begin() + static_cast<long>(j));
        col_label_.erase(col_label_.begin() + static_cast<long>(j));
        saved_c.erase(saved_c.begin() + static_cast<long>(j));
        break;
      }
      c_ = saved_c;
      z0_ = saved_z0;
    }
    return feasible;
  }

  F objective_value() const { return z0_; }

  std::vector<F> solution(std::size_t nvars) const {
    std::vector<F> x(nvars, F(0));
    for (std::size_t i = 0; i < rows(); ++i)
      if (row_label_[i] >= 0 && row_label_[i] < static_cast<int>(nvars))
        x[static_cast<std::size_t>(row_label_[i])] = b_[i];
    return x;
  }

 private:
  std::vector<std::vector<F>> A_;
  std::vector<F> b_;
  std::vector<F> c_;
  F z0_;
  std::vector<int> col_label_;
  std::vector<int> row_label_;
};

// normalize all constraints to a.x <= b
template <typename F>
void normalized_rows(const BasicLinearProgram<F>& lp, std::vector<std::vector<F>>& A,
                     std::vector<F>& b) {
  std::size_t n = lp.num_vars();
  for (std::size_t i = 0; i < lp.lhs.size(); ++i) {
    if (lp.lhs[i].size() != n)
      throw std::invalid_argument("solve_lp: constraint dimension mismatch");
    if (lp.sense[i] == ConstraintSense::LE || lp.sense[i] == ConstraintSense::EQ) {
      A.push_back(lp.lhs[i]);
      b.push_back(lp.rhs[i]);
    }
    if (lp.sense[i] == ConstraintSense::GE || lp.sense[i] == ConstraintSense::EQ) {
      std::vector<F> neg(n);
      for (std::size_t j = 0; j < n; ++j) neg[j] = -lp.lhs[i][j];
      A.push_back(std::move(neg));
      b.push_back(-lp.rhs[i]);
    }
  }
}

}  // namespace

template <typename F>
BasicLpSolution<F> solve_lp(const BasicLinearProgram<F>& lp) {
  std::vector<std::vector<F>> A;
  std::vector<F> b;
  normalized_rows(lp, A, b);
  SimplexTableau<F> t(std::move(A), std::move(b), lp.num_vars());
  BasicLpSolution<F> out;
  if (!t.make_feasible()) {
    out.status = LpStatus::Infeasible;
    return out;
  }
  t.set_objective(lp.objective);
  if (!t.optimize()) {
    out.status = LpStatus::Unbounded;
    return out;
  }
  out.status = LpStatus::Optimal;
  out.value = t.objective_value();
  out.x = t.solution(lp.num_vars());
  return out;
}

template <typename F>
BasicLpSolution<F> solve_lp_lex_min(const BasicLinearProgram<F>& lp) {
  BasicLpSolution<F> base = solve_lp(lp);
  if (base.status != LpStatus::Optimal) return base;

  BasicLinearProgram<F> pinned = lp;
  pinned.add_constraint(lp.objective, ConstraintSense::GE, base.value);
  std::size_t n = lp.num_vars();
  std::vector<F> point(n, F(0));
  for (std::size_t v = 0; v < n; ++v) {
    BasicLinearProgram<F> sub = pinned;
    sub.objective.assign(n, F(0));
    sub.objective[v] = F(-1);  // maximize -x_v == minimize x_v
    BasicLpSolution<F> s = solve_lp(sub);
    if (s.status != LpStatus::Optimal) return base;  // numerically stuck: keep base vertex
    point[v] = -s.value;
    std::vector<F> e(n, F(0));
    e[v] = F(1);
    pinned.add_constraint(std::move(e), ConstraintSense::LE, point[v]);
  }
  base.x = std::move(point);
  return base;
}

template BasicLpSolution<Rational> solve_lp(const BasicLinearProgram<Rational>&);
template BasicLpSolution<double> solve_lp(const BasicLinearProgram<double>&);
template BasicLpSolution<Rational> solve_lp_lex_min(const BasicLinearProgram<Rational>&);
template BasicLpSolution<double> solve_lp_lex_min(const BasicLinearProgram<double>&);

}  // namespace npir
