#pragma once

// Quadratic and cubic Casimir elements and the operator A.

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "supercas/liesuper.hpp"
#include "supercas/uea.hpp"

namespace supercas {

struct CasimirOptions {
  bool verify = true;  // compute [e_k, C] for every basis vector
  int jobs = 0;
};

struct QuadraticCasimir {
  RatMatrix b;  // b[i][j]: coefficient of e_i e_j
  std::shared_ptr<const PBWAlgebra> U;
  PBWElement element;
  std::vector<PBWElement> residuals;  // [e_k, element], empty if not verified
  bool verified = false;
  bool central() const;
};

/// Omega_0 = sum b_ij e_i e_j with b the inverse Gram matrix.
/// FormParityMismatch for an odd form, DegenerateForm if singular.
QuadraticCasimir omega0(const SuperAlgebra& g, const CasimirOptions& opt = {});

/// Violations of sum_l (b_lj c_kl^i + (-1)^{p_i p_k} b_il c_kl^j) = 0, as (i, j, k).
std::vector<std::array<int, 3>> check_b_identity(const SuperAlgebra& g, const RatMatrix& b);

struct AMapReport {
  RatMatrix matrix;  // matrix[i][j]: coefficient of e_i in A(e_j)
  bool scalar = false;
  std::optional<Rat> lambda;
};

/// A(x) = sum b_ij [[x, e_i], e_j].
AMapReport a_map(const SuperAlgebra& g);

struct AdCommutationReport {
  std::vector<std::pair<int, int>> violations;  // (k, j) with [e_k, A e_j] != A [e_k, e_j]
  bool ok() const { return violations.empty(); }
};

AdCommutationReport ad_commutes_with_A(const SuperAlgebra& g);
AdCommutationReport ad_commutes_with_A(const SuperAlgebra& g, const AMapReport& A);

struct CubicCasimir {
  RatMatrix b;
  /// F(k, l, m) stored sparsely as ((k, l, m), value).
  std::map<std::array<int, 3>, Rat> F;
  std::shared_ptr<const PBWAlgebra> U;
  PBWElement element;
  std::vector<PBWElement> residuals;
  bool verified = false;
  bool central() const;
  Rat F_at(int k, int l, int m) const;
};

/// C_3 = sum F(k,l,m) e_k e_l e_m with F(k,l,m) = sum_ij (-1)^{p_l} c_ij^k b_im b_jl.
/// FormParityMismatch for an even form, DegenerateForm if singular.
CubicCasimir c3(const SuperAlgebra& g, const CasimirOptions& opt = {});

/// Triples (k, l, m) violating F(k,l,m) = (-1)^{p_k p_l} F(l,k,m) = (-1)^{p_l p_m} F(k,m,l).
std::vector<std::array<int, 3>> check_f_symmetry(const SuperAlgebra& g, const CubicCasimir& c);

}  // namespace supercas
