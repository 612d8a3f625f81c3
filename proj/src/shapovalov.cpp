#include "supercas/shapovalov.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "supercas/liesuper.hpp"
#include "supercas/loop_km.hpp"
#include "supercas/parallel.hpp"

namespace supercas {

namespace {

bool is_zero_weight(const Weight& w) {
  return std::all_of(w.begin(), w.end(), [](const Rat& x) { return x == 0; });
}

Weight minus(const Weight& a, const Weight& b) {
  Weight out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

std::vector<int> letters_of(const PBWAlgebra& U, const PBWMonomial& m) {
  std::vector<int> w;
  w.reserve(m.size());
  for (auto r : m) w.push_back(U.basis_of(r));
  return w;
}

PBWElement monomial_element(const PBWMonomial& m) {
  PBWElement e;
  e.add(m, 1);
  return e;
}

// Solves sum x_i gens[i] = w over Q; nullopt if inconsistent or underdetermined.
std::optional<std::vector<Rat>> solve_combination(const std::vector<Weight>& gens, const Weight& w) {
  const std::size_t n = gens.size(), rows = w.size();
  std::vector<std::vector<Rat>> a(rows, std::vector<Rat>(n + 1));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < n; ++c) a[r][c] = gens[c][r];
    a[r][n] = w[r];
  }
  std::vector<int> pivot_col;
  std::size_t row = 0;
  for (std::size_t c = 0; c < n && row < rows; ++c) {
    std::size_t p = row;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) return std::nullopt;
    std::swap(a[p], a[row]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row || a[r][c] == 0) continue;
      Rat f = a[r][c] / a[row][c];
      for (std::size_t k = c; k <= n; ++k) a[r][k] -= f * a[row][k];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++row;
  }
  if (pivot_col.size() != n) return std::nullopt;
  for (std::size_t r = row; r < rows; ++r)
    if (a[r][n] != 0) return std::nullopt;
  std::vector<Rat> x(n);
  for (std::size_t r = 0; r < n; ++r) x[static_cast<std::size_t>(pivot_col[r])] = a[r][n] / a[r][static_cast<std::size_t>(pivot_col[r])];
  return x;
}

}  // namespace

// ------------------------------------------------------------------ context

VermaContext::VermaContext(const SuperAlgebra& g, std::vector<int> odd_order) {
  if (!g.splitter) throw MathError(ErrorCode::MissingData, g.name + " has no splitter");
  auto odd = g.odd_cartan();
  if (odd_order.empty()) {
    odd_order = odd;
  } else {
    auto a = odd_order, b = odd;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw MathError(ErrorCode::InvalidParameters, "odd_order is not a permutation of the odd Cartan basis");
  }
  odd_ = odd_order;
  PBWOptions opt;
  opt.mode = PBWMode::VermaQuotient;
  opt.cartan_order = g.even_cartan();
  for (int c : odd_) opt.cartan_order.push_back(c);
  U_ = std::make_shared<PBWAlgebra>(g, opt);
}

std::string vacuum_name(Vacuum v) {
  switch (v) {
    case Vacuum::Trivial: return "trivial";
    case Vacuum::Clifford: return "clifford";
    case Vacuum::Spinor: return "spinor";
  }
  return "?";
}

// ------------------------------------------------------------------ Gram matrices

namespace {

std::vector<PBWMonomial> checked_basis(const VermaContext& ctx, const Weight& chi, std::size_t limit) {
  if (chi.size() != ctx.roots().variables.size())
    throw MathError(ErrorCode::InvalidParameters, "weight has the wrong number of coordinates");
  auto basis = weight_basis(ctx.U(), chi, limit);
  if (basis.empty()) throw MathError(ErrorCode::NotAWeight, weight_str(chi) + " is not a weight of U(g+)");
  return basis;
}

std::string row_label(const VermaContext& ctx, const PBWMonomial& m, const std::vector<int>& vac) {
  std::string s = m.empty() ? "1" : ctx.U().monomial_str(m);
  if (!vac.empty()) {
    s += " |";
    for (int c : vac) s += " " + ctx.algebra().labels[static_cast<std::size_t>(c)];
  }
  return s;
}

}  // namespace

ShapovalovGram gram_matrix(const VermaContext& ctx, const Weight& chi, const ShapovalovOptions& opt) {
  if (!ctx.odd_cartan().empty())
    throw MathError(ErrorCode::OddCartan, ctx.algebra().name + " has odd Cartan elements; use the Bernstein form");
  ShapovalovGram G;
  G.chi = chi;
  G.basis = checked_basis(ctx, chi, opt.basis_limit);
  G.vacuum = {{}};
  G.variables = ctx.U().cartan_variables();
  const std::size_t n = G.basis.size();
  for (std::size_t i = 0; i < n; ++i) {
    G.rows.emplace_back(static_cast<int>(i), 0);
    G.row_labels.push_back(row_label(ctx, G.basis[i], {}));
  }
  G.matrix.assign(n, std::vector<CartanPoly>(n, CartanPoly(G.variables)));
  const PBWAlgebra& U = ctx.U();
  parallel_for(n, opt.jobs, [&](std::size_t i) {
    auto [coef, w] = U.sigma_word(G.basis[i], opt.sigma);
    for (std::size_t j = 0; j < n; ++j) {
      PBWElement v = U.apply_word(w, monomial_element(G.basis[j]));
      G.matrix[i][j] = U.hc(v) * coef;
    }
  });
  return G;
}

ShapovalovGram gram_matrix(const SuperAlgebra& g, const Weight& chi, const ShapovalovOptions& opt) {
  return gram_matrix(VermaContext(g), chi, opt);
}

std::vector<int> isotropic_odd_cartan(const VermaContext& ctx) {
  const SuperAlgebra& g = ctx.algebra();
  std::vector<int> out;
  for (int c : ctx.odd_cartan()) {
    if (!g.bracket(c, c).empty()) continue;
    bool ok = true;
    for (int d : out)
      if (!g.bracket(c, d).empty()) ok = false;
    if (ok) out.push_back(c);
  }
  return out;
}

ShapovalovGram bsh_gram(const VermaContext& ctx, const Weight& chi, const ShapovalovOptions& opt) {
  const auto& odd = ctx.odd_cartan();
  if (odd.empty())
    throw MathError(ErrorCode::InvalidParameters, ctx.algebra().name + " has no odd Cartan elements; use gram_matrix");
  const PBWAlgebra& U = ctx.U();
  ShapovalovGram G;
  G.chi = chi;
  G.bernstein = true;
  G.basis = checked_basis(ctx, chi, opt.basis_limit);
  G.variables = U.cartan_variables();

  switch (opt.vacuum) {
    case Vacuum::Trivial:
      G.vacuum = {{}};
      break;
    case Vacuum::Clifford:
      for (std::size_t s = 0; s < (std::size_t(1) << odd.size()); ++s) {
        std::vector<int> w;
        for (std::size_t k = 0; k < odd.size(); ++k)
          if ((s >> k) & 1) w.push_back(odd[k]);
        G.vacuum.push_back(w);
      }
      break;
    case Vacuum::Spinor: {
      auto iso = isotropic_odd_cartan(ctx);
      std::vector<int> rest;
      for (int c : odd)
        if (std::find(iso.begin(), iso.end(), c) == iso.end()) rest.push_back(c);
      for (std::size_t s = 0; s < (std::size_t(1) << rest.size()); ++s) {
        std::vector<int> w;
        for (std::size_t k = 0; k < rest.size(); ++k)
          if ((s >> k) & 1) w.push_back(rest[k]);
        w.insert(w.end(), iso.begin(), iso.end());
        G.vacuum.push_back(w);
      }
      break;
    }
  }
  std::stable_sort(G.vacuum.begin(), G.vacuum.end(),
                   [](const std::vector<int>& a, const std::vector<int>& b) { return a.size() < b.size(); });

  std::vector<PBWElement> vac_el;
  for (const auto& w : G.vacuum) vac_el.push_back(U.word(w));
  std::vector<PBWElement> vec;
  std::vector<std::vector<int>> letters;
  for (std::size_t i = 0; i < G.basis.size(); ++i)
    for (std::size_t s = 0; s < G.vacuum.size(); ++s) {
      G.rows.emplace_back(static_cast<int>(i), static_cast<int>(s));
      G.row_labels.push_back(row_label(ctx, G.basis[i], G.vacuum[s]));
      auto w = letters_of(U, G.basis[i]);
      vec.push_back(U.apply_word(w, vac_el[s]));
      w.insert(w.end(), G.vacuum[s].begin(), G.vacuum[s].end());
      letters.push_back(std::move(w));
    }

  std::vector<std::uint16_t> top;
  for (int c : odd) top.push_back(static_cast<std::uint16_t>(U.rank_of(c)));
  std::sort(top.begin(), top.end());

  const std::size_t n = G.rows.size();
  G.matrix.assign(n, std::vector<CartanPoly>(n, CartanPoly(G.variables)));
  parallel_for(n, opt.jobs, [&](std::size_t i) {
    auto [coef, w] = U.sigma_letters(letters[i], opt.sigma);
    for (std::size_t j = 0; j < n; ++j) {
      auto cl = U.hc_clifford(U.apply_word(w, vec[j]));
      auto it = cl.find(top);
      if (it != cl.end()) G.matrix[i][j] = it->second * coef;
    }
  });
  return G;
}

ShapovalovGram bsh_gram(const SuperAlgebra& g, const Weight& chi, const ShapovalovOptions& opt) {
  return bsh_gram(VermaContext(g), chi, opt);
}

namespace {

int permutation_sign(std::vector<std::size_t> p) {
  int sign = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    while (p[i] != i) {
      std::swap(p[i], p[p[i]]);
      sign = -sign;
    }
  return sign;
}

}  // namespace

// Block triangular form: a perfect matching puts nonzeros on the diagonal, the
// strongly connected components of the resulting digraph are the diagonal blocks.
BlockDeterminants block_determinants(const PolyMatrix& m) {
  const std::size_t n = m.size();
  BlockDeterminants out;
  std::vector<std::string> vars;
  for (const auto& row : m)
    for (const auto& e : row) vars = merge_variables(vars, e.variables());
  if (n == 0) return out;
  std::vector<std::vector<int>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!m[i][j].is_zero()) adj[i].push_back(static_cast<int>(j));

  std::vector<int> row_of_col(n, -1), col_of_row(n, -1);
  std::vector<int> seen(n, -1);
  std::function<bool(int, int)> augment = [&](int r, int stamp) {
    for (int c : adj[static_cast<std::size_t>(r)]) {
      if (seen[static_cast<std::size_t>(c)] == stamp) continue;
      seen[static_cast<std::size_t>(c)] = stamp;
      int other = row_of_col[static_cast<std::size_t>(c)];
      if (other < 0 || augment(other, stamp)) {
        row_of_col[static_cast<std::size_t>(c)] = r;
        col_of_row[static_cast<std::size_t>(r)] = c;
        return true;
      }
    }
    return false;
  };
  for (std::size_t r = 0; r < n; ++r)
    if (!augment(static_cast<int>(r), static_cast<int>(r))) {
      out.zero = true;
      return out;
    }

  // digraph on rows: i -> k when row i has a nonzero in the column matched to row k
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  std::vector<std::vector<std::size_t>> blocks;
  int counter = 0;
  std::function<void(int)> strong = [&](int v) {
    auto sv = static_cast<std::size_t>(v);
    index[sv] = low[sv] = counter++;
    stack.push_back(v);
    on_stack[sv] = 1;
    for (int c : adj[sv]) {
      int w = row_of_col[static_cast<std::size_t>(c)];
      auto sw = static_cast<std::size_t>(w);
      if (index[sw] < 0) {
        strong(w);
        low[sv] = std::min(low[sv], low[sw]);
      } else if (on_stack[sw]) {
        low[sv] = std::min(low[sv], index[sw]);
      }
    }
    if (low[sv] == index[sv]) {
      std::vector<std::size_t> block;
      for (;;) {
        int w = stack.back();
        stack.pop_back();
        on_stack[static_cast<std::size_t>(w)] = 0;
        block.push_back(static_cast<std::size_t>(w));
        if (w == v) break;
      }
      std::sort(block.begin(), block.end());
      blocks.push_back(std::move(block));
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (index[v] < 0) strong(static_cast<int>(v));

  std::vector<std::size_t> cols(n);
  for (std::size_t r = 0; r < n; ++r) cols[r] = static_cast<std::size_t>(col_of_row[r]);
  out.sign = permutation_sign(cols);
  for (const auto& block : blocks) {
    CartanPoly d;
    if (block.size() == 1) {
      d = m[block[0]][cols[block[0]]].aligned(vars);
    } else {
      PolyMatrix sub(block.size(), std::vector<CartanPoly>(block.size()));
      for (std::size_t a = 0; a < block.size(); ++a)
        for (std::size_t b = 0; b < block.size(); ++b) sub[a][b] = m[block[a]][cols[block[b]]].aligned(vars);
      d = determinant(std::move(sub)).aligned(vars);
    }
    if (d.is_zero()) {
      out.zero = true;
      out.blocks.clear();
      out.sizes.clear();
      return out;
    }
    out.blocks.push_back(std::move(d));
    out.sizes.push_back(block.size());
  }
  return out;
}

CartanPoly block_determinant(const PolyMatrix& m) {
  std::vector<std::string> vars;
  for (const auto& row : m)
    for (const auto& e : row) vars = merge_variables(vars, e.variables());
  auto bd = block_determinants(m);
  if (bd.zero) return CartanPoly(vars);
  CartanPoly det = CartanPoly::constant(bd.sign, vars);
  for (const auto& b : bd.blocks) det = det * b;
  return det.aligned(vars);
}

FactorizationReport shapovalov_det(const ShapovalovGram& gram, const std::vector<LinearForm>& candidates,
                                   std::size_t expand_limit) {
  const auto& vars = gram.variables;
  auto bd = block_determinants(gram.matrix);
  if (bd.zero) return factor_over_candidates(CartanPoly(vars), candidates);

  FactorizationReport rep;
  rep.scalar = bd.sign;
  std::map<LinearForm, int> mult;
  CartanPoly cofactor = CartanPoly::constant(1, vars);
  std::map<std::string, FactorizationReport> cache;
  for (const auto& b : bd.blocks) {
    std::string key = b.str();
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, factor_over_candidates(b, candidates)).first;
    const auto& r = it->second;
    rep.scalar *= r.scalar;
    for (const auto& [f, k] : r.factors) mult[f] += k;
    if (!r.cofactor.is_constant()) cofactor = cofactor * r.cofactor;
  }
  for (const auto& f : candidates) {
    auto it = mult.find(f);
    if (it == mult.end()) continue;
    rep.factors.emplace_back(f, it->second);
    mult.erase(it);
  }
  cofactor = cofactor.compacted();
  if (cofactor.is_constant()) {
    rep.cofactor = CartanPoly::constant(1);
  } else {
    Rat lead = cofactor.leading_term().second;
    rep.scalar *= lead;
    rep.cofactor = cofactor * (Rat(1) / lead);
  }

  CartanPoly det = CartanPoly::constant(bd.sign, vars);
  for (const auto& b : bd.blocks) {
    det = det * b;
    if (det.size() > expand_limit) {
      rep.expanded = false;
      break;
    }
  }
  rep.determinant = rep.expanded ? det.aligned(vars) : CartanPoly(vars);
  return rep;
}

// ------------------------------------------------------------------ closed form

Rat FormulaData::pairing(const std::vector<int>& a, const std::vector<int>& b) const {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      if (a[i] && b[j]) s += B[i][j] * a[i] * b[j];
  return s;
}

Rat FormulaData::F(const std::vector<int>& a) const {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += B[i][i] * a[i] / 2;
  return s;
}

LinearForm FormulaData::h(const std::vector<int>& a) const {
  std::map<std::string, Rat> c;
  Rat k0 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    Rat w = d[i] * a[i];
    for (const auto& [v, x] : coroots[i].coefficients()) c[v] += w * x;
    k0 += w * coroots[i].constant();
  }
  std::map<std::string, Rat> nz;
  for (auto& [v, x] : c)
    if (x != 0) nz[v] = x;
  return LinearForm(nz, k0);
}

bool FormulaData::is_root(const std::vector<int>& a) const {
  for (const auto& r : positive)
    if (r.k == a) return true;
  return false;
}

std::vector<int> FormulaData::coordinates(const Weight& w) const {
  auto x = solve_combination(simple_weights, w);
  if (!x) throw MathError(ErrorCode::NotAWeight, weight_str(w) + " is not in the root lattice");
  std::vector<int> out;
  for (const auto& v : *x) {
    if (v.get_den() != 1) throw MathError(ErrorCode::NotAWeight, weight_str(w) + " is not in the root lattice");
    out.push_back(static_cast<int>(v.get_num().get_si()));
  }
  return out;
}

FormulaData make_formula_data(RatMatrix A, std::vector<Rat> d, std::vector<bool> odd_simple,
                              std::vector<LinearForm> coroots, std::vector<FormulaRoot> positive) {
  const std::size_t n = A.size();
  if (d.size() != n || odd_simple.size() != n || coroots.size() != n)
    throw MathError(ErrorCode::InvalidParameters, "formula data sizes disagree");
  FormulaData fd;
  fd.B.assign(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (A[i].size() != n) throw MathError(ErrorCode::InvalidParameters, "Cartan matrix is not square");
    if (d[i] == 0) throw MathError(ErrorCode::InvalidParameters, "symmetrizer entries must be nonzero");
    for (std::size_t j = 0; j < n; ++j) fd.B[i][j] = d[i] * A[i][j];
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (fd.B[i][j] != fd.B[j][i]) throw MathError(ErrorCode::InvalidParameters, "D A is not symmetric");
  for (const auto& r : positive)
    if (r.k.size() != n) throw MathError(ErrorCode::InvalidParameters, "root coordinates have the wrong length");
  std::set<std::string> vars;
  for (const auto& c : coroots)
    for (const auto& [v, x] : c.coefficients()) vars.insert(v);
  fd.A = std::move(A);
  fd.d = std::move(d);
  fd.odd_simple = std::move(odd_simple);
  fd.coroots = std::move(coroots);
  fd.positive = std::move(positive);
  fd.variables.assign(vars.begin(), vars.end());
  return fd;
}

FormulaData formula_data(const SuperAlgebra& g) {
  RootDatum rd = root_decomposition(g);
  std::set<Weight> pos;
  for (const auto& r : rd.positive) pos.insert(r.weight);
  std::vector<const Root*> simple;
  for (const auto& r : rd.positive) {
    bool decomposable = false;
    for (const auto& b : rd.positive)
      if (pos.count(minus(r.weight, b.weight))) decomposable = true;
    if (!decomposable) simple.push_back(&r);
  }
  const std::size_t n = simple.size();
  auto sigma = sigma_map(g, SigmaMode::IgnoreSign);
  std::map<int, std::size_t> slot;
  for (std::size_t s = 0; s < rd.even_cartan.size(); ++s) slot[rd.even_cartan[s]] = s;

  std::vector<LinearForm> coroots;
  std::vector<SparseVec> hvec;
  std::vector<bool> odd_simple;
  std::vector<Weight> sw;
  for (const Root* r : simple) {
    if (r->indices.size() != 1)
      throw MathError(ErrorCode::InvalidParameters, "simple root space of " + weight_str(r->weight) + " is not one-dimensional");
    int e = r->indices[0];
    int f = sigma.perm[static_cast<std::size_t>(e)];
    SparseVec h = sv_scale(g.bracket(e, f), sigma.coef[static_cast<std::size_t>(e)]);
    std::map<std::string, Rat> c;
    for (const auto& [k, x] : h) {
      if (!slot.count(k)) throw MathError(ErrorCode::InvalidParameters, "[e, sigma(e)] leaves the even Cartan part");
      c[rd.variables[slot[k]]] += x;
    }
    coroots.emplace_back(c, 0);
    hvec.push_back(h);
    odd_simple.push_back(g.parity(e) == 1);
    sw.push_back(r->weight);
  }
  RatMatrix A(n, std::vector<Rat>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& [k, x] : hvec[i]) A[i][j] += x * sw[j][slot[k]];

  std::vector<Rat> d(n, 0);
  for (std::size_t start = 0; start < n; ++start) {
    if (d[start] != 0) continue;
    d[start] = 1;
    std::vector<std::size_t> stack{start};
    while (!stack.empty()) {
      std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || A[i][j] == 0) continue;
        if (A[j][i] == 0) throw MathError(ErrorCode::InvalidParameters, "Cartan matrix is not symmetrizable");
        Rat dj = d[i] * A[i][j] / A[j][i];
        if (d[j] == 0) {
          d[j] = dj;
          stack.push_back(j);
        } else if (d[j] != dj) {
          throw MathError(ErrorCode::InvalidParameters, "Cartan matrix is not symmetrizable");
        }
      }
    }
  }

  std::vector<FormulaRoot> roots;
  for (const auto& r : rd.positive) {
    auto x = solve_combination(sw, r.weight);
    if (!x) throw MathError(ErrorCode::InvalidParameters, "positive root outside the simple root lattice");
    FormulaRoot fr;
    for (const auto& v : *x) {
      if (v.get_den() != 1 || v < 0) throw MathError(ErrorCode::InvalidParameters, "positive root is not a nonnegative combination");
      fr.k.push_back(static_cast<int>(v.get_num().get_si()));
    }
    fr.even_mult = r.even_dim;
    fr.odd_mult = r.odd_dim;
    roots.push_back(fr);
  }
  FormulaData fd = make_formula_data(A, d, odd_simple, coroots, roots);
  fd.variables = rd.variables;
  fd.simple_weights = sw;
  return fd;
}

std::size_t partition_count(const FormulaData& fd, const std::vector<int>& chi, int skip) {
  struct Part {
    const std::vector<int>* k;
    bool odd;
  };
  std::vector<Part> parts;
  for (std::size_t r = 0; r < fd.positive.size(); ++r) {
    if (static_cast<int>(r) == skip) continue;
    for (int c = 0; c < fd.positive[r].even_mult; ++c) parts.push_back({&fd.positive[r].k, false});
    for (int c = 0; c < fd.positive[r].odd_mult; ++c) parts.push_back({&fd.positive[r].k, true});
  }
  std::map<std::pair<std::size_t, std::vector<int>>, std::size_t> memo;
  std::function<std::size_t(std::size_t, const std::vector<int>&)> count = [&](std::size_t p, const std::vector<int>& t) {
    if (std::all_of(t.begin(), t.end(), [](int x) { return x == 0; })) return std::size_t(1);
    if (p == parts.size()) return std::size_t(0);
    auto key = std::make_pair(p, t);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::size_t total = count(p + 1, t);
    const auto& k = *parts[p].k;
    std::vector<int> cur = t;
    for (;;) {
      bool ok = true;
      for (std::size_t i = 0; i < cur.size(); ++i) {
        cur[i] -= k[i];
        if (cur[i] < 0) ok = false;
      }
      if (!ok) break;
      total += count(p + 1, cur);
      if (parts[p].odd) break;
    }
    memo[key] = total;
    return total;
  };
  for (int x : chi)
    if (x < 0) return 0;
  return count(0, chi);
}

namespace {

std::map<LinearForm, int> kk_factors(const FormulaData& fd, const std::vector<int>& chi, const KKOptions& opt,
                                     Rat& scalar) {
  std::map<LinearForm, int> out;
  scalar = 1;
  auto add = [&](const LinearForm& f, std::size_t e) {
    if (e == 0) return;
    if (f.coefficients().empty()) {
      Rat c = f.constant();
      for (std::size_t k = 0; k < e; ++k) scalar *= c;
      return;
    }
    out[f] += static_cast<int>(e);
  };
  auto scaled = [](const std::vector<int>& k, int m) {
    std::vector<int> v = k;
    for (auto& x : v) x *= m;
    return v;
  };
  auto diff = [](std::vector<int> a, const std::vector<int>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
  };
  auto nonneg = [](const std::vector<int>& a) { return std::all_of(a.begin(), a.end(), [](int x) { return x >= 0; }); };
  auto half_root = [&](const std::vector<int>& k, bool odd_only) {
    std::vector<int> h;
    for (int x : k) {
      if (x % 2) return false;
      h.push_back(x / 2);
    }
    for (const auto& r : fd.positive)
      if (r.k == h && (!odd_only || r.odd_mult > 0)) return true;
    return false;
  };
  const bool literal = opt.odd_rule == OddRootRule::Literal;
  for (std::size_t r = 0; r < fd.positive.size(); ++r) {
    const auto& root = fd.positive[r];
    const auto& k = root.k;
    LinearForm hk = fd.h(k);
    Rat Fk = fd.F(k), kk = fd.pairing(k, k);
    auto form_for = [&](int m) { return LinearForm(hk.coefficients(), hk.constant() + Fk - Rat(m) * kk / 2); };
    if (root.even_mult > 0 && !half_root(k, !literal)) {
      for (int m = 1;; ++m) {
        auto rest = diff(chi, scaled(k, m));
        if (!nonneg(rest)) break;
        add(form_for(m), partition_count(fd, rest));
      }
    }
    if (root.odd_mult == 0) continue;
    if (literal) {
      if (fd.is_root(scaled(k, 2))) continue;
    } else if (kk == 0) {
      auto rest = diff(chi, k);
      if (nonneg(rest)) add(form_for(1), partition_count(fd, rest, static_cast<int>(r)));
      continue;
    }
    for (int m = 1;; m += 2) {
      auto rest = diff(chi, scaled(k, m));
      if (!nonneg(rest)) break;
      add(form_for(m), partition_count(fd, rest));
    }
  }
  return out;
}

}  // namespace

FactorizationReport kk_formula(const FormulaData& fd, const std::vector<int>& chi, const KKOptions& opt) {
  if (chi.size() != fd.A.size()) throw MathError(ErrorCode::InvalidParameters, "weight has the wrong number of coordinates");
  bool zero = std::all_of(chi.begin(), chi.end(), [](int x) { return x == 0; });
  if (!zero && partition_count(fd, chi) == 0)
    throw MathError(ErrorCode::NotAWeight, "not a weight of U(g+); the product formula does not apply");
  Rat scalar;
  auto f = kk_factors(fd, chi, opt, scalar);
  std::vector<std::pair<LinearForm, int>> list(f.begin(), f.end());
  return report_from_product(scalar, list, fd.variables);
}

FactorizationReport kk_formula(const FormulaData& fd, const Weight& chi, const KKOptions& opt) {
  return kk_formula(fd, fd.coordinates(chi), opt);
}

std::vector<LinearForm> kk_candidates(const FormulaData& fd, const std::vector<int>& chi, const KKOptions& opt) {
  Rat scalar;
  std::vector<LinearForm> out;
  for (const auto& [f, e] : kk_factors(fd, chi, opt, scalar)) out.push_back(f);
  return out;
}

std::optional<Rat> proportional(const CartanPoly& p, const CartanPoly& q) {
  if (p.is_zero() || q.is_zero()) {
    if (p.is_zero() && q.is_zero()) return Rat(1);
    return std::nullopt;
  }
  auto vars = merge_variables(p.variables(), q.variables());
  CartanPoly a = p.aligned(vars), b = q.aligned(vars);
  Rat s = a.leading_term().second / b.leading_term().second;
  if (a == b * s) return s;
  return std::nullopt;
}

// ------------------------------------------------------------------ singular vectors

SingularVectors find_singular_vectors(const VermaContext& ctx, const std::vector<Rat>& lambda, const Weight& chi,
                                      std::size_t basis_limit) {
  if (!ctx.odd_cartan().empty())
    throw MathError(ErrorCode::OddCartan, ctx.algebra().name + " has odd Cartan elements");
  const RootDatum& rd = ctx.roots();
  if (lambda.size() != rd.variables.size())
    throw MathError(ErrorCode::InvalidParameters, "lambda needs one value per even Cartan generator");
  SingularVectors out;
  out.chi = chi;
  if (is_zero_weight(chi)) return out;
  out.basis = weight_basis(ctx.U(), chi, basis_limit);
  if (out.basis.empty()) return out;
  const PBWAlgebra& U = ctx.U();
  std::map<int, std::size_t> slot;
  for (std::size_t s = 0; s < rd.even_cartan.size(); ++s) slot[rd.even_cartan[s]] = s;

  std::map<std::pair<int, PBWMonomial>, std::size_t> row_of;
  std::vector<std::map<std::size_t, Rat>> cols(out.basis.size());
  for (std::size_t j = 0; j < out.basis.size(); ++j) {
    for (int e : rd.positive_indices) {
      PBWElement v = U.apply_word({e}, monomial_element(out.basis[j]));
      for (const auto& [m, c] : v.terms) {
        PBWMonomial neg;
        Rat val = c;
        for (auto r : m) {
          if (U.is_negative_rank(r)) {
            neg.push_back(r);
          } else {
            val *= lambda[slot.at(U.basis_of(r))];
          }
        }
        if (val == 0) continue;
        auto key = std::make_pair(e, neg);
        auto it = row_of.try_emplace(key, row_of.size()).first;
        cols[j][it->second] += val;
      }
    }
  }
  std::vector<std::vector<Rat>> M(row_of.size(), std::vector<Rat>(out.basis.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [r, c] : cols[j]) M[r][j] = c;
  if (M.empty()) {
    for (std::size_t j = 0; j < out.basis.size(); ++j) {
      std::vector<Rat> v(out.basis.size());
      v[j] = 1;
      out.vectors.push_back(v);
    }
    return out;
  }
  out.vectors = null_space(M, out.basis.size());
  return out;
}

SingularVectors find_singular_vectors(const SuperAlgebra& g, const std::vector<Rat>& lambda, const Weight& chi) {
  return find_singular_vectors(VermaContext(g), lambda, chi);
}

// ------------------------------------------------------------------ conjecture harness

std::string target_name(const HarnessSpec& spec) {
  switch (spec.target) {
    case HarnessTarget::Poi03: return "poi03";
    case HarnessTarget::Poi05: return "poi05";
    case HarnessTarget::PoiOdd: return "poi_odd(" + std::to_string(spec.n) + ")";
    case HarnessTarget::LoopPoi: return "loop_poi(" + std::to_string(spec.n) + "," + std::to_string(spec.cutoff) + ")";
  }
  return "?";
}

namespace {

struct Family {
  SuperAlgebra g;
  int n = 0;           // number of xi_i eta_i pairs
  bool loop = false;
  std::vector<Weight> eps;  // e1..en (and e' for loops)
};

std::string bits_name(int n, int skip) {
  std::string s = "h";
  for (int j = 0; j < n; ++j) s += (j == skip) ? '0' : '1';
  return s;
}

LinearForm h_gamma(const Family& fam, const std::vector<Rat>& c) {
  std::map<std::string, Rat> m;
  for (int i = 0; i < fam.n; ++i)
    if (c[static_cast<std::size_t>(i)] != 0) m[fam.n == 1 ? std::string("h0") : bits_name(fam.n, i)] += c[static_cast<std::size_t>(i)];
  if (fam.loop && c.size() > static_cast<std::size_t>(fam.n) && c[static_cast<std::size_t>(fam.n)] != 0)
    m["z"] += c[static_cast<std::size_t>(fam.n)];
  return LinearForm(m, 0);
}

LinearForm h_max(const Family& fam) { return LinearForm::variable(fam.n == 1 ? "h1" : bits_name(fam.n, -1)); }

LinearForm shifted(const LinearForm& f, const Rat& s) { return LinearForm(f.coefficients(), f.constant() + s); }

std::vector<Rat> eps_coordinates(const Family& fam, const Weight& w) {
  auto x = solve_combination(fam.eps, w);
  if (!x) throw MathError(ErrorCode::NotAWeight, weight_str(w) + " is not a combination of the epsilon weights");
  return *x;
}

bool reachable(const VermaContext& ctx, const Weight& w) {
  if (is_zero_weight(w)) return true;
  return !weight_basis(ctx.U(), w, 200000).empty();
}

Family make_family(const HarnessSpec& spec) {
  Family fam;
  switch (spec.target) {
    case HarnessTarget::Poi03: fam.n = 1; break;
    case HarnessTarget::Poi05: fam.n = 2; break;
    case HarnessTarget::PoiOdd:
      if (spec.n < 1) throw MathError(ErrorCode::InvalidParameters, "poi_odd needs n >= 1");
      fam.n = spec.n;
      break;
    case HarnessTarget::LoopPoi:
      if (spec.n < 2 || spec.n % 2) throw MathError(ErrorCode::InvalidParameters, "loop_poi needs an even number of generators");
      if (spec.cutoff < 1) throw MathError(ErrorCode::InvalidParameters, "loop_poi needs cutoff >= 1");
      fam.n = spec.n / 2;
      fam.loop = true;
      break;
  }
  if (fam.loop) {
    fam.g = truncated_loop(build_poi(spec.n), spec.cutoff);
  } else {
    fam.g = build_poi(2 * fam.n + 1);
  }
  for (int i = 1; i <= fam.n; ++i) fam.eps.push_back(fam.g.named_weights.at("e" + std::to_string(i)));
  if (fam.loop) fam.eps.push_back(fam.g.named_weights.at("e'"));
  return fam;
}

std::string form_text(const LinearForm& f) { return f.str(); }

// variable -> sign; a variable h<bits> (h0/h1 for one pair) picks up s_i for each set bit
std::map<std::string, int> variable_signs(const Family& fam, const std::vector<std::string>& vars, bool normalize) {
  std::map<std::string, int> out;
  auto slot = [&](const std::string& v) -> int {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == v) return static_cast<int>(i);
    return -1;
  };
  auto bits_of = [&](const std::string& v) -> std::string {
    if (fam.n == 1) return v == "h1" ? "1" : (v == "h0" ? "0" : "");
    if (v.size() != static_cast<std::size_t>(fam.n) + 1 || v[0] != 'h') return "";
    return v.substr(1);
  };
  std::vector<int> s(static_cast<std::size_t>(fam.n), 1);
  for (int i = 0; i < fam.n; ++i) {
    std::string single = fam.n == 1 ? "h1" : "h" + std::string(static_cast<std::size_t>(fam.n), '0');
    if (fam.n > 1) single[static_cast<std::size_t>(i) + 1] = '1';
    int k = slot(single);
    if (k < 0) continue;
    const Rat& e = fam.eps[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    if (normalize && e < 0) s[static_cast<std::size_t>(i)] = -1;
  }
  for (const auto& v : vars) {
    int sign = 1;
    auto b = bits_of(v);
    for (std::size_t i = 0; i < b.size(); ++i)
      if (b[i] == '1') sign *= s[i];
    out[v] = sign;
  }
  return out;
}

LinearForm apply_signs(const LinearForm& f, const std::map<std::string, int>& signs) {
  std::map<std::string, Rat> m;
  for (const auto& [v, c] : f.coefficients()) {
    auto it = signs.find(v);
    m[v] = (it == signs.end() ? 1 : it->second) * c;
  }
  return LinearForm(m, f.constant());
}

}  // namespace

HarnessReport conjecture_harness(const HarnessSpec& spec, const std::vector<std::string>& chi_list) {
  Family fam = make_family(spec);
  VermaContext ctx(fam.g);
  const bool bernstein = !ctx.odd_cartan().empty();
  HarnessReport rep;
  rep.algebra = fam.g.name;
  rep.target = target_name(spec);
  rep.vacuum = bernstein ? vacuum_name(spec.options.vacuum) : "none";
  rep.variable_signs = variable_signs(fam, ctx.U().cartan_variables(), spec.normalize_eps);

  for (const auto& text : chi_list) {
    auto t0 = std::chrono::steady_clock::now();
    HarnessEntry E;
    E.chi_text = text;
    E.chi = parse_weight(fam.g, text);
    auto c = eps_coordinates(fam, E.chi);
    for (const auto& x : c)
      if (x.get_den() != 1) throw MathError(ErrorCode::OutOfCone, text + " has non-integral coordinates");

    std::vector<Candidate> cand;
    auto push = [&](const LinearForm& f0, std::string origin, std::string cond = {}, bool holds = true) {
      LinearForm f = origin == "probe" ? f0 : apply_signs(f0, rep.variable_signs);
      for (const auto& x : cand)
        if (x.form == f) return;
      cand.push_back({f, std::move(origin), std::move(cond), holds});
    };
    int spread = 2;
    for (const auto& x : c) spread += static_cast<int>(Rat(abs(x)).get_num().get_si());

    if (spec.target == HarnessTarget::Poi03) {
      int k = static_cast<int>(c[0].get_num().get_si());
      if (k < 1) throw MathError(ErrorCode::OutOfCone, text + ": need k >= 1");
      push(LinearForm::variable("h0"), "table");
      for (int m = 1; m <= k; ++m) push(LinearForm::variable("h1", rat(-m, 2)), "table", "1 <= m <= k");
    } else if (spec.target == HarnessTarget::Poi05) {
      int k = static_cast<int>(c[0].get_num().get_si()), l = static_cast<int>(c[1].get_num().get_si());
      if (k < 0 || k + l < 0 || (k <= 0 && l <= 0)) throw MathError(ErrorCode::OutOfCone, text + " is not positive");
      auto h01 = LinearForm::variable("h01"), h10 = LinearForm::variable("h10");
      push(LinearForm::variable("h11"), "table");
      push(h01, "table", "k, k+l >= 1", k >= 1 && k + l >= 1);
      push(h10, "table", "k+l >= 1", k + l >= 1);
      auto diff = LinearForm({{"h01", 1}, {"h10", -1}}, 0);
      auto sum = LinearForm({{"h01", 1}, {"h10", 1}}, 0);
      for (int m = 1; m <= k; ++m) push(shifted(diff, m), "table", "1 <= m <= k");
      int top = std::min(k, (k + l) / 2);
      for (int m = 1; m <= top; ++m) push(shifted(sum, -m), "table", "1 <= m <= k, (k+l)/2");
      if (spec.probe)
        for (int m = -spread; m <= spread; ++m) {
          if (m < 1 || m > k) push(shifted(diff, m), "table", "1 <= m <= k", false);
          if (m < 1 || m > top) push(shifted(sum, -m), "table", "1 <= m <= k, (k+l)/2", false);
        }
    }

    push(h_max(fam), "h_max");
    const RootDatum& rd = ctx.roots();
    for (const auto& r : rd.positive) {
      auto rest = minus(E.chi, r.weight);
      std::optional<std::vector<Rat>> gc = solve_combination(fam.eps, r.weight);
      if (!gc) continue;
      if (!reachable(ctx, rest)) continue;
      auto f = h_gamma(fam, *gc);
      if (!f.is_zero()) push(f, "h_gamma");
    }
    if (spec.probe) {
      std::vector<LinearForm> base;
      for (const auto& x : cand)
        if (x.origin == "h_max" || x.origin == "h_gamma" || (spec.target == HarnessTarget::Poi03 && x.origin == "table"))
          base.push_back(LinearForm(x.form.coefficients(), 0));
      for (const auto& b : base)
        for (int s = -2 * spread; s <= 2 * spread; ++s) push(shifted(b, rat(s, 2)), "probe");
      std::map<std::string, Rat> central;
      central[fam.n == 1 ? "h0" : std::string("h") + std::string(static_cast<std::size_t>(fam.n), '0')] = 1;
      for (int s = -2 * spread; s <= 2 * spread; ++s) push(LinearForm(central, rat(s, 2)), "probe");
    }
    // conjectured factors first, then the rest
    std::stable_partition(cand.begin(), cand.end(), [](const Candidate& x) { return x.origin != "probe" && x.condition_holds; });
    E.candidates = cand;

    ShapovalovGram G = bernstein ? bsh_gram(ctx, E.chi, spec.options) : gram_matrix(ctx, E.chi, spec.options);
    E.basis_size = G.basis.size();
    E.gram_size = G.size();
    std::vector<LinearForm> forms;
    for (const auto& x : cand) forms.push_back(x.form);
    E.report = shapovalov_det(G, forms);

    if (E.report.scalar == 0) E.flags.push_back("determinant vanishes identically");
    for (const auto& [f, mult] : E.report.factors) {
      for (const auto& x : cand) {
        if (!(x.form == f)) continue;
        if (x.origin == "probe")
          E.flags.push_back("factor " + form_text(f) + " lies outside the conjectured family");
        else if (!x.condition_holds)
          E.flags.push_back("factor " + form_text(f) + " divides although its side condition (" + x.condition + ") fails");
      }
    }
    if (E.report.scalar != 0 && !E.report.fully_factored())
      E.flags.push_back("unexplained cofactor of degree " + std::to_string(E.report.cofactor.total_degree()));
    E.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rep.entries.push_back(std::move(E));
  }
  return rep;
}

}  // namespace supercas
