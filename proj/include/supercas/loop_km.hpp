#pragma once

// Loop and twisted Kac-Moody superalgebras g^(r) = sum_s g_s t^s C[t^r, t^-r] + C u + C z,
// with [t^m x, t^n y] = t^{m+n}[x,y] + m delta_{m,-n} (x|y) z, [u, t^n x] = n t^n x, z central.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "supercas/liesuper.hpp"

namespace supercas {

struct LoopGen {
  enum Kind { Z = 0, U = 1, Loop = 2 };
  Kind kind = Loop;
  int degree = 0;  // t-degree (Loop only)
  int index = -1;  // base basis index (Loop only)

  static LoopGen z() { return {Z, 0, -1}; }
  static LoopGen u() { return {U, 0, -1}; }
  static LoopGen loop(int degree, int index) { return {Loop, degree, index}; }

  friend bool operator<(const LoopGen& a, const LoopGen& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.degree != b.degree) return a.degree < b.degree;
    return a.index < b.index;
  }
  friend bool operator==(const LoopGen& a, const LoopGen& b) {
    return a.kind == b.kind && a.degree == b.degree && a.index == b.index;
  }
};

using LoopElement = std::map<LoopGen, Rat>;

class LoopAlgebra {
 public:
  /// twist_r = 1 is the untwisted loop algebra; r > 1 needs g.grading with that r.
  LoopAlgebra(const SuperAlgebra& g, int twist_r = 1);

  const SuperAlgebra& base() const { return g_; }
  int twist() const { return r_; }
  int grading_class(int index) const;
  bool supported(const LoopGen& x) const;
  int parity(const LoopGen& x) const;
  std::string str(const LoopGen& x) const;
  std::string str(const LoopElement& x) const;

  /// UnsupportedDegree if a loop generator violates the support condition.
  LoopElement bracket(const LoopGen& x, const LoopGen& y) const;
  LoopElement bracket(const LoopElement& x, const LoopElement& y) const;

 private:
  SuperAlgebra g_;
  int r_;
};

LoopElement km_bracket(const LoopElement& x, const LoopElement& y, const SuperAlgebra& g, int twist_r = 1);

/// Omega = Omega_0' + 2 Omega^pm + 2 u z + (lambda / r) u, stored by slices: slice(p) holds
/// c_p * sum b_ij t^p e_i (x) t^-p e_j over e_i in the class of p, with c_0 = 1,
/// c_p = 2 for p < 0 and no slices for p > 0 (Wick order). For r = 1 the linear
/// coefficient is lambda; a Z/r twist spreads A over r residue classes of n.
struct GradedQuadratic {
  int r = 1;
  RatMatrix b;
  std::vector<int> classes;
  Rat lambda;
  Rat uz_coefficient = 2;
  Rat u_coefficient;  // lambda / r
  SparseVec degree0_linear;  // optional extra linear term w in g_0 (t-degree 0)

  /// Coefficient table of t^p e_i (x) t^{-p} e_j.
  std::map<std::pair<int, int>, Rat> slice(int p) const;
};

/// NonScalarA if A is not scalar; GradingIncompatible if the grading does not
/// respect the bracket or the form; DegenerateForm; FormParityMismatch for odd forms.
GradedQuadratic omega_km(const SuperAlgebra& g, int twist_r = 1);

/// Re-solves the linear part (u coefficient and a degree-0 term in g_0) so that
/// the check passes on the window; nullopt if no such linear part exists.
std::optional<GradedQuadratic> solve_linear_part(const SuperAlgebra& g, GradedQuadratic omega, int window);

struct SliceResult {
  int a = 0, b = 0;     // normal-ordered bidegree, a <= b
  std::size_t terms = 0;  // tensor terms entering the slice
  bool zero = true;       // quadratic part vanishes after normal ordering
};

struct CentralityCheck {
  LoopGen x;
  std::vector<SliceResult> slices;
  bool tail_zero = true;  // the outer slices of the window vanish as tensors
  LoopElement linear_residual;
  std::size_t z_terms = 0;  // z (x) t^m x terms that must cancel
  bool ok() const;
};

struct KMCentralityReport {
  int twist = 1;
  Rat lambda;
  int window = 0;
  std::vector<CentralityCheck> checks;
  bool ok() const;
  std::size_t slices_checked() const;
};

/// [X, Omega] for X = u, z and every supported t^m e_k with |m| <= window.
KMCentralityReport verify_km_centrality(const SuperAlgebra& g, int twist_r, int window, int jobs = 0);
/// Same check against a caller-supplied Omega (e.g. with altered coefficients).
KMCentralityReport verify_km_centrality(const SuperAlgebra& g, const GradedQuadratic& omega, int window, int jobs = 0);

/// Finite truncation of the untwisted algebra: t^a e_i for |a| <= cutoff, plus u and z,
/// with brackets landing outside the window dropped. Cartan = t^0 copies of the
/// base Cartan, then u, z. Exact for computations whose t-degrees stay in the window,
/// e.g. weight spaces of U(g^-) of t-degree >= -cutoff. Named weights of the base
/// are extended by zero; "e'" is the weight of t. Needs an even form and a splitter.
SuperAlgebra truncated_loop(const SuperAlgebra& g, int cutoff);

}  // namespace supercas
