#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

namespace npir {

using Rational = boost::multiprecision::cpp_rational;

// H(p) in bits, with 0*log2(0) := 0. Throws std::domain_error outside [0,1].
double binary_entropy(double p);

// Unique p in [0, 1/2] with H(p) = h, bisection to 1e-9 absolute.
double inverse_binary_entropy(double h);

// Exact dyadic value of x (doubles are rationals). Throws on NaN/inf.
Rational to_rational(double x);
double to_double(const Rational& q);

enum class ConstraintSense { LE, GE, EQ };

// maximize objective . x  subject to row constraints and x >= 0
template <typename F>
struct BasicLinearProgram {
  std::vector<F> objective;
  std::vector<std::vector<F>> lhs;
  std::vector<ConstraintSense> sense;
  std::vector<F> rhs;

  void add_constraint(std::vector<F> a, ConstraintSense s, F b) {
    lhs.push_back(std::move(a));
    sense.push_back(s);
    rhs.push_back(std::move(b));
  }
  std::size_t num_vars() const { return objective.size(); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

template <typename F>
struct BasicLpSolution {
  LpStatus status = LpStatus::Infeasible;
  F value{};
  std::vector<F> x;
};

// Two-phase simplex (condensed tableau, Bland's rule). Exact when F is
// Rational; with F = double a 1e-9 pivot tolerance applies.
template <typename F>
BasicLpSolution<F> solve_lp(const BasicLinearProgram<F>& lp);

// Same optimum; the argument is the lexicographically smallest optimal point
// (coordinate-by-coordinate minimization over the optimal face).
template <typename F>
BasicLpSolution<F> solve_lp_lex_min(const BasicLinearProgram<F>& lp);

using LinearProgram = BasicLinearProgram<Rational>;
using LpSolution = BasicLpSolution<Rational>;

extern template BasicLpSolution<Rational> solve_lp(const BasicLinearProgram<Rational>&);
extern template BasicLpSolution<double> solve_lp(const BasicLinearProgram<double>&);
extern template BasicLpSolution<Rational> solve_lp_lex_min(const BasicLinearProgram<Rational>&);
extern template BasicLpSolution<double> solve_lp_lex_min(const BasicLinearProgram<double>&);

}  // namespace npir
