#pragma once

// Exact rationals and sparse multivariate polynomials over Q in named
// commuting variables (the Cartan generators).

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "supercas/errors.hpp"

namespace supercas {

/// Arbitrary precision rational, always canonical (lowest terms, positive denominator).
using Rat = mpq_class;

/// n/d in lowest terms (the two-argument mpq_class constructor does not reduce).
inline Rat rat(long n, long d = 1) {
  Rat r(n, d);
  r.canonicalize();
  return r;
}

/// Parses "p", "-p", "p/q" (whitespace tolerant). Throws MathError(ParseError).
Rat parse_rat(std::string_view text);
std::string to_string(const Rat& r);

/// A polynomial with rational coefficients in an ordered list of named
/// variables. Exponent vectors are dense over the variable list; zero
/// coefficients are never stored. Binary operations between polynomials on
/// different variable lists align them by name first.
class CartanPoly {
 public:
  using Exponents = std::vector<std::uint32_t>;
  using TermMap = std::map<Exponents, Rat>;

  CartanPoly() = default;
  explicit CartanPoly(std::vector<std::string> variables);

  static CartanPoly constant(const Rat& c, std::vector<std::string> variables = {});
  static CartanPoly variable(const std::string& name, std::vector<std::string> variables = {});

  const std::vector<std::string>& variables() const { return vars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rat constant_term() const;
  /// Coefficient of the given monomial (zero if absent).
  Rat coefficient(const Exponents& e) const;
  int total_degree() const;
  int degree_in(const std::string& var) const;

  /// Adds `c * x^e`; `e` must match the variable list length.
  void add_term(const Exponents& e, const Rat& c);

  /// Re-expresses the polynomial on `vars`, which must contain every variable
  /// that occurs with a nonzero exponent.
  CartanPoly aligned(const std::vector<std::string>& vars) const;
  /// Drops variables that never occur.
  CartanPoly compacted() const;

  /// Leading term under lex order with variables ranked in list order.
  std::pair<Exponents, Rat> leading_term() const;

  Rat evaluate(const std::map<std::string, Rat>& point) const;
  /// Substitutes a subset of the variables by rationals.
  CartanPoly specialize(const std::map<std::string, Rat>& point) const;

  CartanPoly& operator+=(const CartanPoly& o);
  CartanPoly& operator-=(const CartanPoly& o);
  CartanPoly& operator*=(const Rat& c);
  CartanPoly operator-() const;

  friend CartanPoly operator+(CartanPoly a, const CartanPoly& b) { return a += b; }
  friend CartanPoly operator-(CartanPoly a, const CartanPoly& b) { return a -= b; }
  friend CartanPoly operator*(const CartanPoly& a, const CartanPoly& b);
  friend CartanPoly operator*(CartanPoly a, const Rat& c) { return a *= c; }
  friend CartanPoly operator*(const Rat& c, CartanPoly a) { return a *= c; }
  friend bool operator==(const CartanPoly& a, const CartanPoly& b);
  friend bool operator!=(const CartanPoly& a, const CartanPoly& b) { return !(a == b); }

  CartanPoly pow(unsigned k) const;

  /// Canonical text, e.g. "h1^2 - 1/2*h0*h1 + 3". Terms in descending lex order.
  std::string str() const;

 private:
  std::vector<std::string> vars_;
  TermMap terms_;
};

/// Union of two variable lists: `a` in order followed by new names from `b`.
std::vector<std::string> merge_variables(const std::vector<std::string>& a,
                                         const std::vector<std::string>& b);

/// sum_i c_i * x_i + constant.
class LinearForm {
 public:
  LinearForm() = default;
  LinearForm(std::map<std::string, Rat> coefficients, Rat constant);

  static LinearForm variable(const std::string& name, const Rat& shift = 0);

  const std::map<std::string, Rat>& coefficients() const { return coeffs_; }
  const Rat& constant() const { return constant_; }
  bool is_zero() const { return coeffs_.empty() && constant_ == 0; }

  CartanPoly to_poly(const std::vector<std::string>& vars = {}) const;
  std::string str() const;

  friend bool operator==(const LinearForm& a, const LinearForm& b) {
    return a.coeffs_ == b.coeffs_ && a.constant_ == b.constant_;
  }
  friend bool operator<(const LinearForm& a, const LinearForm& b) {
    if (a.coeffs_ != b.coeffs_) return a.coeffs_ < b.coeffs_;
    return a.constant_ < b.constant_;
  }

 private:
  std::map<std::string, Rat> coeffs_;  // no zero entries
  Rat constant_;
};

/// Exact quotient p / q when q divides p, std::nullopt otherwise.
/// Uses multivariate division by a single divisor, which is exact because a
/// principal ideal's generator is a Groebner basis for it.
std::optional<CartanPoly> divide_exact(const CartanPoly& p, const CartanPoly& q);

struct TrialDivision {
  CartanPoly quotient;
  bool exact = false;
};

/// Divides by a linear form; on failure returns p unchanged with exact = false.
TrialDivision trial_divide(const CartanPoly& p, const LinearForm& f);

struct FactorizationReport {
  CartanPoly determinant;  // expanded form; meaningful only when `expanded`
  bool expanded = true;
  Rat scalar;
  std::vector<std::pair<LinearForm, int>> factors;  // multiplicity >= 1
  /// Normalized so that its lex-leading coefficient is 1 (or the zero polynomial).
  CartanPoly cofactor;

  bool fully_factored() const { return cofactor.is_constant() && !cofactor.is_zero(); }
  int multiplicity(const LinearForm& f) const;
  /// scalar * prod(factor^mult) * cofactor.
  CartanPoly reconstruct() const;
};

/// Strips every candidate as often as it divides. Candidates are used in the
/// given order; duplicates are ignored.
FactorizationReport factor_over_candidates(const CartanPoly& p,
                                           const std::vector<LinearForm>& candidates);

/// Product form `scalar * prod f^k` expanded into a report (cofactor 1).
FactorizationReport report_from_product(const Rat& scalar,
                                        const std::vector<std::pair<LinearForm, int>>& factors,
                                        const std::vector<std::string>& vars = {});

using PolyMatrix = std::vector<std::vector<CartanPoly>>;

/// Determinant by fraction-free (Bareiss) elimination with exact division.
CartanPoly determinant(PolyMatrix m);

/// Determinant of a rational matrix (Bareiss over Q).
Rat determinant(std::vector<std::vector<Rat>> m);

/// Exact inverse of a square rational matrix; nullopt when singular.
std::optional<std::vector<std::vector<Rat>>> inverse(std::vector<std::vector<Rat>> m);

/// Basis of the right null space {v : m v = 0} of a rational matrix.
std::vector<std::vector<Rat>> null_space(std::vector<std::vector<Rat>> m, std::size_t cols);

}  // namespace supercas
