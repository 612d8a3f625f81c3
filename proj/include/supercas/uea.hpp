#pragma once

// Universal enveloping superalgebra in a PBW basis.
//
// Basis vectors are renumbered by rank: negative root vectors first
// (decreasing height, then label), then the Cartan part (even before odd),
// then positive root vectors (increasing height, then label). A PBW monomial
// is a nondecreasing sequence of ranks in which odd ranks do not repeat.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "supercas/liesuper.hpp"
#include "supercas/scalars.hpp"

namespace supercas {

using PBWMonomial = std::vector<std::uint16_t>;  // nondecreasing ranks

struct PBWElement {
  std::map<PBWMonomial, Rat> terms;

  bool is_zero() const { return terms.empty(); }
  void add(const PBWMonomial& m, const Rat& c);
  void add(const PBWElement& o, const Rat& c = 1);
  PBWElement& operator*=(const Rat& c);
  friend PBWElement operator+(PBWElement a, const PBWElement& b) { a.add(b); return a; }
  friend PBWElement operator-(PBWElement a, const PBWElement& b) { a.add(b, -1); return a; }
  friend PBWElement operator*(PBWElement a, const Rat& c) { return a *= c; }
  friend bool operator==(const PBWElement& a, const PBWElement& b) { return a.terms == b.terms; }
  friend bool operator!=(const PBWElement& a, const PBWElement& b) { return !(a == b); }
  /// Largest monomial length; -1 for zero.
  int degree() const;
};

struct MonoHash {
  std::size_t operator()(const PBWMonomial& m) const noexcept;
};

enum class PBWMode {
  Full,           // U(g)
  VermaQuotient,  // U(g) / U(g) g+ : monomials containing a positive letter are dropped
};

struct PBWOptions {
  PBWMode mode = PBWMode::Full;
  /// Optional permutation of the Cartan block (basis indices); default: even then odd, basis order.
  std::vector<int> cartan_order;
};

/// Odd Cartan subset (ranks, increasing) -> coefficient in S(t_ev).
using CliffordElement = std::map<std::vector<std::uint16_t>, CartanPoly>;

class PBWAlgebra {
 public:
  /// Uses the root decomposition for the rank order when the algebra has a
  /// splitter; otherwise ranks follow the basis order.
  explicit PBWAlgebra(const SuperAlgebra& g, const PBWOptions& opt = {});
  PBWAlgebra(const SuperAlgebra& g, const RootDatum& rd, const PBWOptions& opt = {});

  const SuperAlgebra& algebra() const { return g_; }
  const std::optional<RootDatum>& roots() const { return rd_; }
  PBWMode mode() const { return opt_.mode; }

  int rank_of(int basis_index) const { return rank_of_[static_cast<std::size_t>(basis_index)]; }
  int basis_of(int rank) const { return basis_of_[static_cast<std::size_t>(rank)]; }
  int parity_of_rank(int rank) const { return g_.parity(basis_of(rank)); }
  bool is_positive_rank(int r) const { return r >= pos_begin_; }
  bool is_negative_rank(int r) const { return r < cartan_begin_; }
  bool is_cartan_rank(int r) const { return r >= cartan_begin_ && r < pos_begin_; }
  int num_negative() const { return cartan_begin_; }
  int positive_begin() const { return pos_begin_; }

  PBWElement one() const;
  PBWElement generator(int basis_index, const Rat& c = 1) const;
  /// Basis vector combination as a degree-one element.
  PBWElement from_vector(const SparseVec& v) const;
  /// Product of generators given by basis index, in the order written.
  PBWElement word(const std::vector<int>& basis_indices) const;

  PBWElement mul(const PBWElement& a, const PBWElement& b) const;
  /// e_x * a
  PBWElement left_mul(int basis_index, const PBWElement& a) const;
  /// Supercommutator [a, b] for a homogeneous of parity pa and b of parity pb.
  PBWElement supercommutator(const PBWElement& a, int pa, const PBWElement& b, int pb) const;
  /// Parity of a homogeneous element (-1 if zero or mixed).
  int parity(const PBWElement& a) const;

  PBWElement apply_sigma(const PBWElement& a, SigmaMode mode = SigmaMode::IgnoreSign) const;
  /// sigma of a monomial as coef * (product of basis vectors in written order).
  std::pair<Rat, std::vector<int>> sigma_word(const PBWMonomial& m, SigmaMode mode = SigmaMode::IgnoreSign) const;
  /// Same for a word given by basis indices in written order.
  std::pair<Rat, std::vector<int>> sigma_letters(const std::vector<int>& basis_word,
                                                 SigmaMode mode = SigmaMode::IgnoreSign) const;
  /// (w_1 ... w_k) * a, computed by left multiplication from the last letter.
  PBWElement apply_word(const std::vector<int>& basis_indices, const PBWElement& a) const;

  /// Harish-Chandra projection onto S(t_ev); monomials with odd Cartan letters are dropped.
  CartanPoly hc(const PBWElement& a) const;
  /// Harish-Chandra projection onto U(t), kept as a Clifford element.
  CliffordElement hc_clifford(const PBWElement& a) const;
  /// Polynomial variables of the even Cartan part, in weight-coordinate order.
  const std::vector<std::string>& cartan_variables() const { return cartan_vars_; }

  std::string str(const PBWElement& a) const;
  std::string monomial_str(const PBWMonomial& m) const;

  std::size_t memo_size() const;
  void clear_memo() const;

 private:
  void init(const PBWOptions& opt);
  const PBWElement& left_mul_mono(int rank, const PBWMonomial& m) const;
  PBWElement compute_left_mul(int rank, const PBWMonomial& m) const;
  bool dropped(const PBWMonomial& m) const;

  SuperAlgebra g_;
  std::optional<RootDatum> rd_;
  PBWOptions opt_;
  std::vector<int> rank_of_, basis_of_;
  int cartan_begin_ = 0, pos_begin_ = 0;
  std::vector<std::vector<std::pair<int, Rat>>> rank_bracket_;  // [r1*d + r2] -> (rank, coef)
  std::vector<std::string> cartan_vars_;
  std::vector<int> even_cartan_slot_;  // rank -> variable slot or -1
  std::optional<SignedPermutation> sigma_[2];
  std::string sigma_error_[2];
  const SignedPermutation& sigma_of(SigmaMode mode) const;

  struct Memo {
    std::shared_mutex mu;
    std::unordered_map<PBWMonomial, std::unique_ptr<PBWElement>, MonoHash> table;
  };
  std::unique_ptr<Memo> memo_;
};

/// All PBW monomials in negative root vectors of total weight -chi, in
/// lexicographic rank order.
/// InfinitePartitions if the enumeration exceeds `limit` monomials.
std::vector<PBWMonomial> weight_basis(const PBWAlgebra& U, const Weight& chi, std::size_t limit = 2000000);

}  // namespace supercas
