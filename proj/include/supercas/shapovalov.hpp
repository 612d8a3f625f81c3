#pragma once

// Shapovalov forms on Verma modules M = U(g-) m, the closed-form product
// evaluator for contragredient algebras, the Bernstein variant for algebras
// with odd Cartan elements, singular vectors and the factorization harness.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "supercas/liesuper.hpp"
#include "supercas/scalars.hpp"
#include "supercas/uea.hpp"

namespace supercas {

/// Shared PBW data in Verma-quotient mode. `odd_order` permutes the odd
/// Cartan generators (basis indices); it fixes the order in which the top
/// odd coefficient is read.
class VermaContext {
 public:
  explicit VermaContext(const SuperAlgebra& g, std::vector<int> odd_order = {});

  const SuperAlgebra& algebra() const { return U_->algebra(); }
  const RootDatum& roots() const { return *U_->roots(); }
  const PBWAlgebra& U() const { return *U_; }
  /// Odd Cartan basis indices in the reading order.
  const std::vector<int>& odd_cartan() const { return odd_; }

 private:
  std::shared_ptr<PBWAlgebra> U_;
  std::vector<int> odd_;
};

enum class Vacuum {
  Trivial,   // the highest weight line only
  Clifford,  // U(t) (x) C(lambda): all products of odd Cartan generators
  Spinor,    // the left ideal generated by a product of isotropic odd Cartan generators
};

struct ShapovalovOptions {
  SigmaMode sigma = SigmaMode::IgnoreSign;
  Vacuum vacuum = Vacuum::Clifford;  // Bernstein form only
  int jobs = 0;
  std::size_t basis_limit = 200000;
};

struct ShapovalovGram {
  Weight chi;
  std::vector<PBWMonomial> basis;        // weight_basis(chi)
  std::vector<std::vector<int>> vacuum;  // odd Cartan words (basis indices); {{}} for the plain form
  std::vector<std::pair<int, int>> rows; // (basis position, vacuum position)
  std::vector<std::string> row_labels;
  PolyMatrix matrix;
  std::vector<std::string> variables;
  bool bernstein = false;

  std::size_t size() const { return rows.size(); }
};

/// Gram(i,j) = HC(sigma(X_i) X_j) over weight_basis(chi).
/// OddCartan if the Cartan part has odd elements; NotAWeight if chi != 0 is
/// not a weight of U(g+).
ShapovalovGram gram_matrix(const VermaContext& ctx, const Weight& chi, const ShapovalovOptions& opt = {});
ShapovalovGram gram_matrix(const SuperAlgebra& g, const Weight& chi, const ShapovalovOptions& opt = {});

/// Bernstein form: rows X_i v_S for vacuum vectors v_S; entries are the top
/// odd coefficient of HC(sigma(X_i v_S) X_j v_T) in the context's odd order.
ShapovalovGram bsh_gram(const VermaContext& ctx, const Weight& chi, const ShapovalovOptions& opt = {});
ShapovalovGram bsh_gram(const SuperAlgebra& g, const Weight& chi, const ShapovalovOptions& opt = {});

/// Largest set of odd Cartan generators with pairwise zero brackets
/// (including squares), greedy in the context's odd order.
std::vector<int> isotropic_odd_cartan(const VermaContext& ctx);

struct BlockDeterminants {
  int sign = 1;
  std::vector<CartanPoly> blocks;  // determinants of the diagonal blocks
  std::vector<std::size_t> sizes;
  bool zero = false;               // structurally or numerically singular
};

/// Block triangular decomposition (perfect matching + strongly connected
/// components) with one exact determinant per diagonal block.
BlockDeterminants block_determinants(const PolyMatrix& m);
/// The same, multiplied out.
CartanPoly block_determinant(const PolyMatrix& m);

/// Exact determinant, stripped over the candidates block by block. The
/// expanded determinant is kept only while it stays under `expand_limit` terms.
FactorizationReport shapovalov_det(const ShapovalovGram& gram, const std::vector<LinearForm>& candidates,
                                   std::size_t expand_limit = 50000);

// ------------------------------------------------------------------ closed form

struct FormulaRoot {
  std::vector<int> k;  // coordinates over the simple roots
  int even_mult = 0;   // even root vectors
  int odd_mult = 0;    // odd root vectors
};

struct FormulaData {
  RatMatrix A;
  std::vector<Rat> d;  // symmetrizer
  RatMatrix B;         // D A
  std::vector<bool> odd_simple;
  std::vector<LinearForm> coroots;  // h_i
  std::vector<std::string> variables;
  std::vector<FormulaRoot> positive;
  std::vector<Weight> simple_weights;  // alpha_i in algebra coordinates (derived data only)

  Rat pairing(const std::vector<int>& a, const std::vector<int>& b) const;  // (a, b)
  Rat F(const std::vector<int>& a) const;
  LinearForm h(const std::vector<int>& a) const;
  bool is_root(const std::vector<int>& a) const;
  /// Coordinates of a weight over the simple roots; NotAWeight if not an integer combination.
  std::vector<int> coordinates(const Weight& w) const;
};

/// Data from explicit input; B = D A must be symmetric.
FormulaData make_formula_data(RatMatrix A, std::vector<Rat> d, std::vector<bool> odd_simple,
                              std::vector<LinearForm> coroots, std::vector<FormulaRoot> positive);

/// Derived from an algebra with a splitter: simple roots are the positive
/// roots that are not sums of two positive roots, h_i = [e_i, sigma(e_i)],
/// A_ij = alpha_j(h_i), D found by propagation along nonzero entries.
FormulaData formula_data(const SuperAlgebra& g);

/// Number of ways to write chi as a sum of positive root vectors (even ones
/// with repetition, odd ones at most once). `skip` drops one root.
std::size_t partition_count(const FormulaData& fd, const std::vector<int>& chi, int skip = -1);

enum class OddRootRule {
  /// Reduced sets {even, alpha/2 not a root} and {odd, 2 alpha not a root};
  /// odd roots take every odd m with exponent K(chi - m alpha).
  Literal,
  /// Even roots unless alpha/2 is an odd root; non-isotropic odd roots with
  /// every odd m; isotropic odd roots with m = 1 and alpha left out of K.
  Corrected,
};

struct KKOptions {
  OddRootRule odd_rule = OddRootRule::Literal;
};

/// Product over reduced positive roots of (h_alpha + F(alpha) - m/2 (alpha,alpha))^K(chi - m alpha).
/// NotAWeight if chi != 0 and K(chi) = 0.
FactorizationReport kk_formula(const FormulaData& fd, const std::vector<int>& chi, const KKOptions& opt = {});
FactorizationReport kk_formula(const FormulaData& fd, const Weight& chi, const KKOptions& opt = {});

/// Linear factors of the closed form, usable as candidates for shapovalov_det.
std::vector<LinearForm> kk_candidates(const FormulaData& fd, const std::vector<int>& chi, const KKOptions& opt = {});

/// p == s * q for a nonzero rational s.
std::optional<Rat> proportional(const CartanPoly& p, const CartanPoly& q);

// ------------------------------------------------------------------ singular vectors

struct SingularVectors {
  Weight chi;
  std::vector<PBWMonomial> basis;
  std::vector<std::vector<Rat>> vectors;  // coefficients over basis
};

/// Solutions of e v = 0 for every positive root vector e in the weight
/// lambda - chi part of M^lambda. `lambda` holds the values of the even Cartan
/// generators (context variable order). Empty for chi = 0.
SingularVectors find_singular_vectors(const VermaContext& ctx, const std::vector<Rat>& lambda, const Weight& chi,
                                      std::size_t basis_limit = 200000);
SingularVectors find_singular_vectors(const SuperAlgebra& g, const std::vector<Rat>& lambda, const Weight& chi);

// ------------------------------------------------------------------ conjecture harness

enum class HarnessTarget { Poi03, Poi05, PoiOdd, LoopPoi };

struct HarnessSpec {
  HarnessTarget target = HarnessTarget::Poi03;
  int n = 1;       // PoiOdd: poi(0|2n+1); LoopPoi: poi(0|n), n even
  int cutoff = 2;  // LoopPoi: t-degree window
  ShapovalovOptions options;
  /// Also strip shifts of the conjectured forms outside their ranges.
  bool probe = true;
  /// Read h_I = prod xi_i eta_i in the normalization e_i(xi_i eta_i) = +1,
  /// i.e. replace h_I by (prod_{i in I} s_i) h_I where s_i = e_i(xi_i eta_i).
  bool normalize_eps = true;
};

struct Candidate {
  LinearForm form;
  std::string origin;     // table, h_max, h_gamma, probe
  std::string condition;  // side condition text, empty if none
  bool condition_holds = true;
};

struct HarnessEntry {
  std::string chi_text;
  Weight chi;
  std::size_t basis_size = 0, gram_size = 0;
  std::vector<Candidate> candidates;
  FactorizationReport report;
  /// Findings: nontrivial cofactor, factors whose side condition fails, probe factors.
  std::vector<std::string> flags;
  double seconds = 0;
};

struct HarnessReport {
  std::string algebra;
  std::string target;
  std::string vacuum;
  /// Sign applied to each Cartan variable when reading the conjectured forms.
  std::map<std::string, int> variable_signs;
  std::vector<HarnessEntry> entries;
};

/// Builds the algebra for the target and factors the (Bernstein or plain)
/// determinant for each weight. OutOfCone for poi(0|5) weights outside
/// {k, k+l >= 0, k or l > 0}.
HarnessReport conjecture_harness(const HarnessSpec& spec, const std::vector<std::string>& chi_list);

std::string target_name(const HarnessSpec& spec);
std::string vacuum_name(Vacuum v);

}  // namespace supercas
