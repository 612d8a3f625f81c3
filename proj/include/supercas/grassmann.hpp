#pragma once

// Grassmann algebra G(m) with its Poisson bracket, in two presentations:
//   theta:   generators th1..thm, bracket (-1)^p(f) sum_j d_j f d_j g
//   xi-eta:  generators x1,e1,x2,e2,...,(th if m odd), bracket
//            (-1)^p(f) (sum_j d_xj f d_ej g + d_ej f d_xj g + d_th f d_th g)
// Monomials are bitmasks over the flat generator list; the flat order
// x1 e1 x2 e2 ... th is also the canonical order of the top monomial.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "supercas/scalars.hpp"

namespace supercas {

enum class Presentation { Theta, XiEta };

const char* presentation_name(Presentation p);

using GrassMask = std::uint32_t;

class GrassmannElement {
 public:
  using TermMap = std::map<GrassMask, Rat>;

  GrassmannElement() = default;
  GrassmannElement(int num_vars, Presentation pres);

  static GrassmannElement constant(int num_vars, Presentation pres, const Rat& c);
  static GrassmannElement monomial(int num_vars, Presentation pres, GrassMask mask, const Rat& c = 1);
  /// Flat generator k (0-based).
  static GrassmannElement generator(int num_vars, Presentation pres, int k);
  /// theta_j of the theta presentation (1-based).
  static GrassmannElement theta(int num_vars, int j);
  /// xi_j, eta_j, theta of the xi-eta presentation (1-based).
  static GrassmannElement xi(int num_vars, int j);
  static GrassmannElement eta(int num_vars, int j);
  static GrassmannElement odd_theta(int num_vars);

  int num_vars() const { return m_; }
  Presentation presentation() const { return pres_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rat coefficient(GrassMask mask) const;

  void add_term(GrassMask mask, const Rat& c);

  /// Parity part: 0 keeps even monomials, 1 keeps odd ones.
  GrassmannElement parity_part(int parity) const;
  /// -1 if zero or inhomogeneous, else 0/1.
  int parity() const;

  GrassmannElement& operator+=(const GrassmannElement& o);
  GrassmannElement& operator-=(const GrassmannElement& o);
  GrassmannElement& operator*=(const Rat& c);
  friend GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b) { return a += b; }
  friend GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b) { return a -= b; }
  friend GrassmannElement operator*(GrassmannElement a, const Rat& c) { return a *= c; }
  friend GrassmannElement operator*(const Rat& c, GrassmannElement a) { return a *= c; }
  friend GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b);
  GrassmannElement operator-() const { return *this * Rat(-1); }
  friend bool operator==(const GrassmannElement& a, const GrassmannElement& b) {
    return a.m_ == b.m_ && a.pres_ == b.pres_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const GrassmannElement& a, const GrassmannElement& b) { return !(a == b); }

  /// e.g. "3*x1*e1 - 1/2*th"; terms by increasing degree then mask.
  std::string str() const;
  static GrassmannElement parse(std::string_view text, int num_vars, Presentation pres);

 private:
  int m_ = 0;
  Presentation pres_ = Presentation::Theta;
  TermMap terms_;
};

/// Name of flat generator k: "th3", "x2", "e1", "th".
std::string generator_name(int num_vars, Presentation pres, int k);
/// Text of a bare monomial, "1" for the empty one.
std::string monomial_name(int num_vars, Presentation pres, GrassMask mask);

/// Sign of reordering the concatenation a.b into increasing order (0 if they overlap).
int grassmann_sign(GrassMask a, GrassMask b);

GrassmannElement gr_mul(const GrassmannElement& f, const GrassmannElement& g);

/// Left derivative with respect to flat generator j (1-based).
GrassmannElement partial(const GrassmannElement& f, int j);

/// Coefficient of the top monomial.
Rat berezin(const GrassmannElement& f);

GrassmannElement poisson(const GrassmannElement& f, const GrassmannElement& g);

/// Hamiltonian field H_f as a list of (coefficient function, flat generator)
/// derivation terms; applying it to g gives sum c * d_k g.
struct HamiltonianField {
  std::vector<std::pair<GrassmannElement, int>> terms;  // (coefficient, 0-based generator)
  GrassmannElement apply(const GrassmannElement& g) const;
};

/// Builds H_f (xi-eta presentation only; PresentationMismatch otherwise).
HamiltonianField hamiltonian(const GrassmannElement& f);

/// H_f applied to g.
GrassmannElement hamiltonian_field(const GrassmannElement& f, const GrassmannElement& g);

}  // namespace supercas
