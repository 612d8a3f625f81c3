#include <algorithm>
#include <bit>
#include <cctype>
#include <functional>

#include "supercas/liesuper.hpp"

namespace supercas {

namespace {

// ------------------------------------------------------------------ Grassmann families

std::vector<GrassMask> sorted_masks(int m, const std::function<bool(GrassMask)>& keep) {
  std::vector<GrassMask> out;
  for (GrassMask mask = 0; mask < (GrassMask(1) << m); ++mask)
    if (keep(mask)) out.push_back(mask);
  std::stable_sort(out.begin(), out.end(), [](GrassMask a, GrassMask b) {
    int da = std::popcount(a), db = std::popcount(b);
    return da != db ? da < db : a < b;
  });
  return out;
}

// Basis of monomials; brackets are projected by dropping monomials outside
// the basis (which realizes the quotient by constants).
SuperAlgebra grassmann_family(const std::string& name, int m, Presentation pres,
                              const std::vector<GrassMask>& masks, bool with_form) {
  std::vector<std::string> labels;
  std::vector<int> par;
  std::map<GrassMask, int> index;
  for (GrassMask mask : masks) {
    index[mask] = static_cast<int>(labels.size());
    labels.push_back(monomial_name(m, pres, mask));
    par.push_back(std::popcount(mask) % 2);
  }
  SuperAlgebra g(name, labels, par);
  const int d = g.dim();
  std::vector<GrassmannElement> el;
  for (GrassMask mask : masks) el.push_back(GrassmannElement::monomial(m, pres, mask));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      GrassmannElement b = poisson(el[static_cast<std::size_t>(i)], el[static_cast<std::size_t>(j)]);
      std::map<int, Rat> v;
      for (const auto& [mask, c] : b.terms()) {
        auto it = index.find(mask);
        if (it != index.end()) {
          v[it->second] += c;
        } else if (mask != 0) {
          throw MathError(ErrorCode::InvalidParameters, name + " is not closed under the bracket");
        }
      }
      g.set_bracket(i, j, sv_from_map(v));
    }
  if (with_form) {
    InvariantForm f;
    f.parity = m % 2;
    f.gram.assign(static_cast<std::size_t>(d), std::vector<Rat>(static_cast<std::size_t>(d), 0));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        f.gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            berezin(el[static_cast<std::size_t>(i)] * el[static_cast<std::size_t>(j)]);
    g.form = std::move(f);
  }

  if (pres == Presentation::XiEta) {
    const int r = m / 2;
    // Cartan: products of xi_j eta_j, optionally times theta
    for (int odd = 0; odd < (m % 2 ? 2 : 1); ++odd)
      for (int s = 0; s < (1 << r); ++s) {
        GrassMask mask = 0;
        std::string bits;
        for (int j = 0; j < r; ++j) {
          bool on = (s >> j) & 1;
          if (on) mask |= GrassMask(3) << (2 * j);
          bits += on ? '1' : '0';
        }
        if (odd) mask |= GrassMask(1) << (m - 1);
        auto it = index.find(mask);
        if (it == index.end()) continue;
        g.cartan.push_back(it->second);
        g.cartan_names.push_back((odd ? "t" : "h") + bits);
      }
    // splitter -sum 2^(r-1-j) xi_j eta_j makes every xi_j positive
    std::map<int, Rat> H;
    for (int j = 0; j < r; ++j) {
      auto it = index.find(GrassMask(3) << (2 * j));
      if (it != index.end()) H[it->second] = -Rat(1 << (r - 1 - j));
    }
    if (!H.empty()) g.splitter = sv_from_map(H);
    for (int j = 0; j < r; ++j) {
      auto xi = index.find(GrassMask(1) << (2 * j));
      if (xi == index.end()) continue;
      Weight w;
      for (int c : g.even_cartan()) w.push_back(sv_get(g.bracket(c, xi->second), xi->second));
      g.named_weights["e" + std::to_string(j + 1)] = w;
    }
    // sigma: swap xi_j <-> eta_j multiplicatively, twisted by (-1)^{deg(deg-1)/2}
    SignedPermutation s;
    for (GrassMask mask : masks) {
      GrassmannElement img = GrassmannElement::constant(m, pres, 1);
      for (int k = 0; k < m; ++k)
        if (mask & (GrassMask(1) << k)) {
          int t = k;
          if (!(m % 2 == 1 && k == m - 1)) t = (k % 2 == 0) ? k + 1 : k - 1;
          img = img * GrassmannElement::generator(m, pres, t);
        }
      int deg = std::popcount(mask);
      Rat sign = ((deg * (deg - 1) / 2) % 2) ? Rat(-1) : Rat(1);
      const auto& [im, c] = *img.terms().begin();
      s.perm.push_back(index.at(im));
      s.coef.push_back(sign * c);
    }
    g.sigma = std::move(s);
  }
  return g;
}

// ------------------------------------------------------------------ matrix families

struct MatrixSpace {
  int N = 0;
  std::vector<int> rowpar;  // parity of each row/column index

  int at(int r, int c) const { return r * N + c; }
  int parity_of(int r, int c) const { return (rowpar[static_cast<std::size_t>(r)] + rowpar[static_cast<std::size_t>(c)]) % 2; }

  using M = CoordinateSolver::Ambient;
  M unit(int r, int c, const Rat& v = 1) const {
    M m;
    if (v != 0) m[at(r, c)] = v;
    return m;
  }
  M mul(const M& a, const M& b) const {
    M out;
    for (const auto& [ia, x] : a)
      for (const auto& [ib, y] : b) {
        if (ia % N != ib / N) continue;
        Rat& z = out[(ia / N) * N + ib % N];
        z += x * y;
      }
    for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
  }
  M combine(const M& a, const Rat& s, const M& b) const {
    M out = a;
    for (const auto& [k, v] : b) {
      Rat& z = out[k];
      z += s * v;
      if (z == 0) out.erase(k);
    }
    return out;
  }
  M supercommutator(const M& a, int pa, const M& b, int pb) const {
    return combine(mul(a, b), pa * pb % 2 ? Rat(1) : Rat(-1), mul(b, a));
  }
  M transpose(const M& a) const {
    M out;
    for (const auto& [k, v] : a) out[(k % N) * N + k / N] = v;
    return out;
  }
  Rat supertrace(const M& a) const {
    Rat s = 0;
    for (int i = 0; i < N; ++i) {
      auto it = a.find(at(i, i));
      if (it != a.end()) s += rowpar[static_cast<std::size_t>(i)] ? Rat(-it->second) : it->second;
    }
    return s;
  }
  // trace of the upper-right n x n block of a 2n x 2n matrix
  Rat odd_trace(const M& a) const {
    int n = N / 2;
    Rat s = 0;
    for (int i = 0; i < n; ++i) {
      auto it = a.find(at(i, n + i));
      if (it != a.end()) s += it->second;
    }
    return s;
  }
};

struct MatrixFamilySpec {
  std::string name;
  MatrixSpace space;
  std::vector<MatrixSpace::M> basis;
  std::vector<int> parities;
  std::vector<std::string> labels;
  std::vector<MatrixSpace::M> ideal;
  std::vector<int> cartan;
  std::vector<std::string> cartan_names;
  std::function<Rat(const MatrixSpace::M&)> trace;  // form (x|y) = trace(xy); empty: none
  int form_parity = 0;
  bool zero_form = false;
  std::vector<Rat> diag;  // splitting element diag(diag) in the ambient space
  std::vector<std::pair<std::string, int>> weight_names;  // name -> basis index of a root vector
};

SuperAlgebra matrix_family(const MatrixFamilySpec& s) {
  SuperAlgebra g(s.name, s.labels, s.parities);
  const int d = g.dim();
  CoordinateSolver solver(s.basis, s.ideal);
  auto coords = [&](const MatrixSpace::M& m, const char* what) {
    auto c = solver.solve(m);
    if (!c) throw MathError(ErrorCode::InvalidParameters, s.name + ": " + what + " leaves the algebra");
    return *c;
  };
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      g.set_bracket(i, j,
                    coords(s.space.supercommutator(s.basis[static_cast<std::size_t>(i)], s.parities[static_cast<std::size_t>(i)],
                                                   s.basis[static_cast<std::size_t>(j)], s.parities[static_cast<std::size_t>(j)]),
                           "bracket"));
  if (s.trace || s.zero_form) {
    InvariantForm f;
    f.parity = s.form_parity;
    f.gram.assign(static_cast<std::size_t>(d), std::vector<Rat>(static_cast<std::size_t>(d), 0));
    if (!s.zero_form)
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          f.gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
              s.trace(s.space.mul(s.basis[static_cast<std::size_t>(i)], s.basis[static_cast<std::size_t>(j)]));
    g.form = std::move(f);
  }
  g.cartan = s.cartan;
  g.cartan_names = s.cartan_names;
  SignedPermutation sig;
  for (int i = 0; i < d; ++i) {
    auto c = coords(s.space.transpose(s.basis[static_cast<std::size_t>(i)]), "transpose");
    if (c.size() != 1) throw MathError(ErrorCode::InvalidParameters, s.name + ": transpose is not a signed permutation");
    sig.perm.push_back(c[0].first);
    sig.coef.push_back(c[0].second);
  }
  g.sigma = std::move(sig);
  if (!s.diag.empty()) {
    MatrixSpace::M D;
    for (int i = 0; i < s.space.N; ++i)
      if (s.diag[static_cast<std::size_t>(i)] != 0) D[s.space.at(i, i)] = s.diag[static_cast<std::size_t>(i)];
    g.splitter = coords(D, "splitting element");
  }
  for (const auto& [nm, idx] : s.weight_names) {
    Weight w;
    for (int c : g.even_cartan()) w.push_back(sv_get(g.bracket(c, idx), idx));
    g.named_weights[nm] = w;
  }
  return g;
}

std::string eij(const char* prefix, int i, int j) {
  return std::string(prefix) + std::to_string(i + 1) + "," + std::to_string(j + 1);
}

// Diagonal with distinct entries; decreasing when the supertrace can be
// corrected by a multiple of the identity.
std::vector<Rat> generic_diag(int m, int n, bool need_supertrace_zero) {
  const int N = m + n;
  std::vector<Rat> d(static_cast<std::size_t>(N));
  for (int i = 0; i < N; ++i) d[static_cast<std::size_t>(i)] = N - i;
  if (!need_supertrace_zero) return d;
  if (m != n) {
    Rat st = 0;
    for (int i = 0; i < N; ++i) st += i < m ? d[static_cast<std::size_t>(i)] : Rat(-d[static_cast<std::size_t>(i)]);
    Rat shift = -st / Rat(m - n);
    for (auto& x : d) x += shift;
    return d;
  }
  if (n < 2) return {};
  for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = 2 * (n - i);
  for (int j = 0; j < n; ++j) d[static_cast<std::size_t>(n + j)] = 2 * (n - j - 1) + 1;
  d[static_cast<std::size_t>(n)] += n;
  return d;
}

MatrixFamilySpec glsl_spec(int m, int n, bool special) {
  if (m < 0 || n < 0 || m + n < 1 || (special && m + n < 2))
    throw MathError(ErrorCode::InvalidParameters, "matrix size out of range");
  MatrixFamilySpec s;
  const int N = m + n;
  s.name = n == 0 ? (special ? "sl(" : "gl(") + std::to_string(m) + ")"
                  : (special ? "sl(" : "gl(") + std::to_string(m) + "|" + std::to_string(n) + ")";
  s.space.N = N;
  for (int i = 0; i < N; ++i) s.space.rowpar.push_back(i < m ? 0 : 1);
  auto add = [&](MatrixSpace::M mat, int p, std::string label) {
    s.basis.push_back(std::move(mat));
    s.parities.push_back(p);
    s.labels.push_back(std::move(label));
    return static_cast<int>(s.basis.size()) - 1;
  };
  // off-diagonal units, then the Cartan
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      if (i == j) continue;
      int idx = add(s.space.unit(i, j), s.space.parity_of(i, j), eij("E", i, j));
      if (j == i + 1) s.weight_names.emplace_back("a" + std::to_string(i + 1), idx);
    }
  if (!special) {
    for (int i = 0; i < N; ++i) {
      s.cartan.push_back(add(s.space.unit(i, i), 0, eij("E", i, i)));
      s.cartan_names.push_back("h" + std::to_string(i + 1));
    }
  } else {
    for (int i = 0; i + 1 < N; ++i) {
      Rat sign = (s.space.rowpar[static_cast<std::size_t>(i)] + s.space.rowpar[static_cast<std::size_t>(i + 1)]) % 2 ? 1 : -1;
      auto h = s.space.combine(s.space.unit(i, i), sign, s.space.unit(i + 1, i + 1));
      s.cartan.push_back(add(h, 0, "h" + std::to_string(i + 1)));
      s.cartan_names.push_back("h" + std::to_string(i + 1));
    }
  }
  if (N == 2 && s.weight_names.size() == 1) s.weight_names.emplace_back("a", s.weight_names[0].second);
  MatrixSpace sp = s.space;
  s.trace = [sp](const MatrixSpace::M& x) { return sp.supertrace(x); };
  s.form_parity = 0;
  s.diag = generic_diag(m, n, special);
  return s;
}

enum class QueerKind { Q, SQ, PQ, PSQ };

SuperAlgebra queer(int n, QueerKind kind) {
  if (n < 1 || (kind != QueerKind::Q && n < 2)) throw MathError(ErrorCode::InvalidParameters, "queer size out of range");
  MatrixFamilySpec s;
  const char* names[] = {"q(", "sq(", "pq(", "psq("};
  s.name = names[static_cast<int>(kind)] + std::to_string(n) + ")";
  s.space.N = 2 * n;
  for (int i = 0; i < 2 * n; ++i) s.space.rowpar.push_back(i < n ? 0 : 1);
  auto& sp = s.space;
  auto even_unit = [&](int i, int j) { return sp.combine(sp.unit(i, j), 1, sp.unit(n + i, n + j)); };
  auto odd_unit = [&](int i, int j) { return sp.combine(sp.unit(i, n + j), 1, sp.unit(n + i, j)); };
  auto add = [&](MatrixSpace::M mat, int p, std::string label) {
    s.basis.push_back(std::move(mat));
    s.parities.push_back(p);
    s.labels.push_back(std::move(label));
    return static_cast<int>(s.basis.size()) - 1;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      int idx = add(even_unit(i, j), 0, eij("A", i, j));
      if (j == i + 1) s.weight_names.emplace_back("a" + std::to_string(i + 1), idx);
      add(odd_unit(i, j), 1, eij("B", i, j));
    }
  if (n == 2) s.weight_names.emplace_back("a", s.weight_names[0].second);
  bool quotient = kind == QueerKind::PQ || kind == QueerKind::PSQ;
  bool traceless = kind == QueerKind::SQ || kind == QueerKind::PSQ;
  for (int i = 0; i < (quotient ? n - 1 : n); ++i) {
    s.cartan.push_back(add(even_unit(i, i), 0, eij("A", i, i)));
    s.cartan_names.push_back("h" + std::to_string(i + 1));
  }
  if (traceless) {
    for (int i = 0; i + 1 < n; ++i) {
      s.cartan.push_back(add(sp.combine(odd_unit(i, i), -1, odd_unit(i + 1, i + 1)), 1, "K" + std::to_string(i + 1)));
      s.cartan_names.push_back("k" + std::to_string(i + 1));
    }
  } else {
    for (int i = 0; i < n; ++i) {
      s.cartan.push_back(add(odd_unit(i, i), 1, eij("B", i, i)));
      s.cartan_names.push_back("k" + std::to_string(i + 1));
    }
  }
  if (quotient) {
    MatrixSpace::M id;
    for (int i = 0; i < 2 * n; ++i) id[sp.at(i, i)] = 1;
    s.ideal.push_back(id);
  }
  s.form_parity = 1;
  if (kind == QueerKind::PQ) {
    s.zero_form = true;
  } else {
    MatrixSpace copy = sp;
    s.trace = [copy](const MatrixSpace::M& x) { return copy.odd_trace(x); };
  }
  s.diag.resize(static_cast<std::size_t>(2 * n));
  for (int i = 0; i < n; ++i) s.diag[static_cast<std::size_t>(i)] = s.diag[static_cast<std::size_t>(n + i)] = n - i;
  SuperAlgebra g = matrix_family(s);
  if (kind == QueerKind::PQ) g.notes.push_back("zero odd form: the odd trace does not descend to the quotient");
  if (kind == QueerKind::SQ) g.notes.push_back("odd trace form is degenerate: the identity spans its kernel");
  return g;
}

std::string trim(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

std::vector<int> parse_params(const std::string& inner) {
  std::vector<int> out;
  std::string cur;
  for (char c : inner + "|") {
    if (c == '|' || c == ',') {
      if (cur.empty()) throw MathError(ErrorCode::ParseError, "empty parameter in '" + inner + "'");
      for (char x : cur)
        if (!std::isdigit(static_cast<unsigned char>(x)))
          throw MathError(ErrorCode::ParseError, "bad parameter '" + cur + "'");
      out.push_back(std::stoi(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  return out;
}

}  // namespace

SuperAlgebra build_poi(int m, Presentation pres) {
  if (m < 1 || m > 12) throw MathError(ErrorCode::InvalidParameters, "poi(0|m) needs 1 <= m <= 12");
  std::string name = pres == Presentation::XiEta ? "poi(0|" + std::to_string(m) + ")"
                                                 : "poi_theta(0|" + std::to_string(m) + ")";
  return grassmann_family(name, m, pres, sorted_masks(m, [](GrassMask) { return true; }), true);
}

SuperAlgebra build_h(int m) {
  if (m < 1 || m > 12) throw MathError(ErrorCode::InvalidParameters, "h(0|m) needs 1 <= m <= 12");
  return grassmann_family("h(0|" + std::to_string(m) + ")", m, Presentation::XiEta,
                          sorted_masks(m, [](GrassMask mask) { return mask != 0; }), false);
}

SuperAlgebra build_hprime(int m) {
  if (m < 2 || m > 12) throw MathError(ErrorCode::InvalidParameters, "h'(0|m) needs 2 <= m <= 12");
  return grassmann_family("h'(0|" + std::to_string(m) + ")", m, Presentation::XiEta,
                          sorted_masks(m, [m](GrassMask mask) {
                            int k = std::popcount(mask);
                            return k >= 1 && k <= m - 1;
                          }),
                          true);
}

SuperAlgebra build_gl(int m, int n) { return matrix_family(glsl_spec(m, n, false)); }

SuperAlgebra build_sl(int m, int n) {
  SuperAlgebra g = matrix_family(glsl_spec(m, n, true));
  if (m == n) g.notes.push_back("sl(n|n) contains the identity: the center makes the supertrace form degenerate");
  return g;
}

SuperAlgebra build_q(int n) { return queer(n, QueerKind::Q); }
SuperAlgebra build_sq(int n) { return queer(n, QueerKind::SQ); }
SuperAlgebra build_pq(int n) { return queer(n, QueerKind::PQ); }
SuperAlgebra build_psq(int n) { return queer(n, QueerKind::PSQ); }

SuperAlgebra direct_sum(const SuperAlgebra& a, const SuperAlgebra& b) {
  std::vector<std::string> labels;
  std::vector<int> par;
  for (int i = 0; i < a.dim(); ++i) {
    labels.push_back(a.labels[static_cast<std::size_t>(i)] + "_1");
    par.push_back(a.parity(i));
  }
  for (int i = 0; i < b.dim(); ++i) {
    labels.push_back(b.labels[static_cast<std::size_t>(i)] + "_2");
    par.push_back(b.parity(i));
  }
  SuperAlgebra g(a.name + "+" + b.name, labels, par);
  const int da = a.dim();
  auto shift = [](const SparseVec& v, int s) {
    SparseVec out = v;
    for (auto& [k, c] : out) k += s;
    return out;
  };
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j) g.set_bracket(i, j, a.bracket(i, j));
  for (int i = 0; i < b.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j) g.set_bracket(da + i, da + j, shift(b.bracket(i, j), da));
  for (std::size_t t = 0; t < a.cartan.size(); ++t) {
    g.cartan.push_back(a.cartan[t]);
    g.cartan_names.push_back(a.cartan_name(a.cartan[t]) + "_1");
  }
  for (std::size_t t = 0; t < b.cartan.size(); ++t) {
    g.cartan.push_back(da + b.cartan[t]);
    g.cartan_names.push_back(b.cartan_name(b.cartan[t]) + "_2");
  }
  if (a.form && b.form && a.form->parity == b.form->parity) {
    InvariantForm f;
    f.parity = a.form->parity;
    const auto d = static_cast<std::size_t>(g.dim());
    f.gram.assign(d, std::vector<Rat>(d, 0));
    for (std::size_t i = 0; i < a.form->gram.size(); ++i)
      for (std::size_t j = 0; j < a.form->gram.size(); ++j) f.gram[i][j] = a.form->gram[i][j];
    for (std::size_t i = 0; i < b.form->gram.size(); ++i)
      for (std::size_t j = 0; j < b.form->gram.size(); ++j)
        f.gram[static_cast<std::size_t>(da) + i][static_cast<std::size_t>(da) + j] = b.form->gram[i][j];
    g.form = std::move(f);
  }
  if (a.splitter || b.splitter) {
    SparseVec h = a.splitter ? *a.splitter : SparseVec{};
    if (b.splitter) sv_axpy(h, 1, shift(*b.splitter, da));
    g.splitter = h;
  }
  if (a.sigma && b.sigma) {
    SignedPermutation s = *a.sigma;
    for (std::size_t i = 0; i < b.sigma->perm.size(); ++i) {
      s.perm.push_back(b.sigma->perm[i] + da);
      s.coef.push_back(b.sigma->coef[i]);
    }
    g.sigma = std::move(s);
  }
  const std::size_t ra = a.even_cartan().size(), rb = b.even_cartan().size();
  for (const auto& [nm, w] : a.named_weights) {
    Weight x(ra + rb, 0);
    std::copy(w.begin(), w.end(), x.begin());
    g.named_weights[nm + "_1"] = x;
  }
  for (const auto& [nm, w] : b.named_weights) {
    Weight x(ra + rb, 0);
    std::copy(w.begin(), w.end(), x.begin() + static_cast<std::ptrdiff_t>(ra));
    g.named_weights[nm + "_2"] = x;
  }
  return g;
}

SuperAlgebra with_parity_grading(SuperAlgebra g) {
  Grading gr;
  gr.r = 2;
  gr.classes = g.parities;
  g.grading = std::move(gr);
  return g;
}

SuperAlgebra build_family(std::string_view spec) {
  std::string s = trim(spec);
  // top-level '+' separates summands
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == '+' && depth == 0)
      return direct_sum(build_family(s.substr(0, i)), build_family(s.substr(i + 1)));
  }
  if (s.size() > 2 && s.rfind("sl", 0) == 0 && std::all_of(s.begin() + 2, s.end(), ::isdigit))
    return build_sl(std::stoi(s.substr(2)), 0);
  if (s.size() > 2 && s.rfind("gl", 0) == 0 && std::all_of(s.begin() + 2, s.end(), ::isdigit))
    return build_gl(std::stoi(s.substr(2)), 0);
  auto open = s.find('(');
  if (open == std::string::npos || s.back() != ')')
    throw MathError(ErrorCode::ParseError, "unknown algebra family '" + s + "'");
  std::string fam = s.substr(0, open);
  auto p = parse_params(s.substr(open + 1, s.size() - open - 2));
  auto need = [&](std::size_t k) {
    if (p.size() != k) throw MathError(ErrorCode::ParseError, "wrong number of parameters in '" + s + "'");
  };
  auto super_dim = [&]() {
    need(2);
    if (p[0] != 0) throw MathError(ErrorCode::InvalidParameters, fam + " takes (0|m)");
    return p[1];
  };
  if (fam == "poi") return build_poi(super_dim(), Presentation::XiEta);
  if (fam == "poi_theta") return build_poi(super_dim(), Presentation::Theta);
  if (fam == "h") return build_h(super_dim());
  if (fam == "h'" || fam == "hp") return build_hprime(super_dim());
  if (fam == "gl" || fam == "sl") {
    if (p.size() == 1) p.push_back(0);
    need(2);
    return fam == "gl" ? build_gl(p[0], p[1]) : build_sl(p[0], p[1]);
  }
  need(1);
  if (fam == "q") return build_q(p[0]);
  if (fam == "sq") return build_sq(p[0]);
  if (fam == "pq") return build_pq(p[0]);
  if (fam == "psq") return build_psq(p[0]);
  throw MathError(ErrorCode::ParseError, "unknown algebra family '" + fam + "'");
}

}  // namespace supercas
