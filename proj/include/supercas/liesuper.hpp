#pragma once

// Finite-dimensional Lie superalgebras as structure-constant tables.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "supercas/grassmann.hpp"
#include "supercas/scalars.hpp"

namespace supercas {

/// Sorted (index, coefficient) pairs without zeros.
using SparseVec = std::vector<std::pair<int, Rat>>;

SparseVec sv_unit(int i, const Rat& c = 1);
/// acc += c * v
void sv_axpy(SparseVec& acc, const Rat& c, const SparseVec& v);
SparseVec sv_scale(const SparseVec& v, const Rat& c);
Rat sv_get(const SparseVec& v, int i);
SparseVec sv_from_map(const std::map<int, Rat>& m);

using RatMatrix = std::vector<std::vector<Rat>>;

struct InvariantForm {
  RatMatrix gram;  // gram[i][j] = (e_i | e_j)
  int parity = 0;
};

struct Grading {
  int r = 1;
  std::vector<int> classes;  // per basis index, in [0, r)
};

/// Linear map on the basis e_i -> coef[i] * e_{perm[i]}.
struct SignedPermutation {
  std::vector<int> perm;
  std::vector<Rat> coef;
};

using Weight = std::vector<Rat>;  // coordinates over the even Cartan generators

std::string weight_str(const Weight& w);

struct SuperAlgebra {
  std::string name;
  std::vector<std::string> labels;
  std::vector<int> parities;
  /// table[i * d + j] = [e_i, e_j]
  std::vector<SparseVec> table;

  std::vector<int> cartan;                 // indices of the Cartan subalgebra basis
  std::vector<std::string> cartan_names;   // polynomial variable per Cartan index
  std::optional<InvariantForm> form;
  std::optional<Grading> grading;
  std::optional<SparseVec> splitter;       // element of the even Cartan part
  std::optional<SignedPermutation> sigma;  // anti-automorphism, sign rule ignored
  std::map<std::string, Weight> named_weights;
  std::vector<std::string> notes;

  SuperAlgebra() = default;
  SuperAlgebra(std::string name, std::vector<std::string> labels, std::vector<int> parities);

  int dim() const { return static_cast<int>(labels.size()); }
  int parity(int i) const { return parities[static_cast<std::size_t>(i)]; }
  const SparseVec& bracket(int i, int j) const { return table[static_cast<std::size_t>(i * dim() + j)]; }
  void set_bracket(int i, int j, SparseVec v) { table[static_cast<std::size_t>(i * dim() + j)] = std::move(v); }
  SparseVec bracket(const SparseVec& x, const SparseVec& y) const;
  int index_of(std::string_view label) const;

  std::vector<int> even_cartan() const;
  std::vector<int> odd_cartan() const;
  bool is_cartan(int i) const;
  /// Polynomial variable of a Cartan index ("" if not Cartan).
  std::string cartan_name(int i) const;
  std::vector<std::string> even_cartan_names() const;

  Rat form_value(const SparseVec& x, const SparseVec& y) const;
};

// ------------------------------------------------------------------ builders

SuperAlgebra build_poi(int m, Presentation pres = Presentation::XiEta);
SuperAlgebra build_h(int m);
SuperAlgebra build_hprime(int m);
SuperAlgebra build_gl(int m, int n);
SuperAlgebra build_sl(int m, int n);
SuperAlgebra build_q(int n);
SuperAlgebra build_sq(int n);
SuperAlgebra build_pq(int n);
SuperAlgebra build_psq(int n);
SuperAlgebra direct_sum(const SuperAlgebra& a, const SuperAlgebra& b);

/// Family strings: "poi(0|4)", "poi_theta(0|3)", "h(0|4)", "h'(0|4)",
/// "gl(2|1)", "sl(2|1)", "sl(3)", "sl2", "q(2)", "sq(3)", "pq(2)", "psq(3)",
/// and sums "sl(2)+sl(3)".
SuperAlgebra build_family(std::string_view spec);

/// Attaches the Z/2 grading by parity.
SuperAlgebra with_parity_grading(SuperAlgebra g);

// ------------------------------------------------------------------ checks

struct Violation {
  std::string kind;  // anticommutativity, parity, jacobi, form-symmetry, ...
  int i = -1, j = -1, k = -1;
  std::string detail;
};

struct VerifyOptions {
  int exhaustive_limit = 64;        // exhaustive Jacobi/invariance when dim <= this
  std::size_t sampled_triples = 200000;
  unsigned seed = 1;
  std::size_t max_reported = 25;
  int jobs = 1;
};

struct VerifyReport {
  std::vector<Violation> violations;
  std::size_t total_violations = 0;
  std::size_t triples_checked = 0;
  bool exhaustive = true;
  bool ok() const { return total_violations == 0; }
  std::string summary() const;
};

VerifyReport verify_algebra(const SuperAlgebra& g, const VerifyOptions& opt = {});

/// Exact inverse of the Gram matrix. DegenerateForm if singular, MissingData if absent.
RatMatrix gram_inverse(const SuperAlgebra& g);

/// Matrix of ad_x in the basis: M[k][j] = coefficient of e_k in [x, e_j].
RatMatrix ad_matrix(const SuperAlgebra& g, const SparseVec& x);

// ------------------------------------------------------------------ roots

struct Root {
  Weight weight;
  Rat height;                 // alpha(H)
  std::vector<int> indices;   // basis vectors spanning the root space
  int even_dim = 0, odd_dim = 0;
};

struct RootDatum {
  std::vector<int> even_cartan;
  std::vector<std::string> variables;
  std::vector<Weight> weight_of;    // per basis index (zero on the Cartan)
  std::vector<Rat> height_of;       // alpha(H) per basis index
  std::vector<Rat> splitter_values; // H expressed over the even Cartan generators
  std::vector<Root> positive;       // increasing height
  std::vector<Root> negative;       // decreasing height
  std::vector<int> positive_indices, negative_indices;
  bool generalized = false;         // some ad_h acts with a nilpotent part

  const Root* find(const Weight& w) const;
  int sign_of(int basis_index) const;  // +1, -1, 0 (Cartan)
  Rat height(const Weight& w) const;
};

struct RootOptions {
  bool allow_generalized = true;
};

RootDatum root_decomposition(const SuperAlgebra& g, const RootOptions& opt = {});

/// Sum of weights with integer multiplicities.
Weight weight_combination(const std::vector<std::pair<Rat, Weight>>& terms, std::size_t rank);
bool weight_is_zero(const Weight& w);

/// Parses "k1*e1+k2*e2", "2a", "a1+a2", "0" using g.named_weights.
Weight parse_weight(const SuperAlgebra& g, std::string_view text);

// ------------------------------------------------------------------ sigma

enum class SigmaMode { IgnoreSign, RespectSign };

/// sigma(e_i) for the requested mode; the respect-mode map is derived from the
/// ignore-mode one by a sign twist.
SignedPermutation sigma_map(const SuperAlgebra& g, SigmaMode mode);

/// Reports basis pairs where sigma fails to be an anti-automorphism.
std::vector<Violation> check_sigma(const SuperAlgebra& g, SigmaMode mode);

// ------------------------------------------------------------------ realizations

/// Coordinates of ambient vectors in a fixed spanning set, modulo an optional
/// ideal whose coordinates are discarded.
class CoordinateSolver {
 public:
  using Ambient = std::map<int, Rat>;
  CoordinateSolver(const std::vector<Ambient>& basis, const std::vector<Ambient>& ideal = {});
  std::optional<SparseVec> solve(const Ambient& v) const;

 private:
  std::size_t nbasis_;
  std::vector<std::pair<int, Ambient>> rows_;    // (pivot, reduced vector)
  std::vector<std::map<int, Rat>> transforms_;  // reduced vector as combination of inputs
};

}  // namespace supercas
