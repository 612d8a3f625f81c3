#include "supercas/casimir.hpp"

#include "supercas/parallel.hpp"

namespace supercas {

namespace {

std::vector<PBWElement> residuals_of(const SuperAlgebra& g, const PBWAlgebra& U, const PBWElement& c, int pc,
                                     int jobs) {
  std::vector<PBWElement> out(static_cast<std::size_t>(g.dim()));
  parallel_for(out.size(), jobs, [&](std::size_t k) {
    int kk = static_cast<int>(k);
    out[k] = U.supercommutator(U.generator(kk), g.parity(kk), c, pc);
  });
  return out;
}

bool all_zero(const std::vector<PBWElement>& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

void require_form(const SuperAlgebra& g, int parity) {
  if (!g.form) throw MathError(ErrorCode::MissingData, g.name + " has no invariant form");
  if (g.form->parity != parity)
    throw MathError(ErrorCode::FormParityMismatch,
                    g.name + " carries an " + (g.form->parity ? "odd" : "even") + " form; this construction needs an " +
                        (parity ? "odd" : "even") + " one");
}

}  // namespace

bool QuadraticCasimir::central() const { return verified && all_zero(residuals); }
bool CubicCasimir::central() const { return verified && all_zero(residuals); }

Rat CubicCasimir::F_at(int k, int l, int m) const {
  auto it = F.find({k, l, m});
  return it == F.end() ? Rat(0) : it->second;
}

QuadraticCasimir omega0(const SuperAlgebra& g, const CasimirOptions& opt) {
  require_form(g, 0);
  QuadraticCasimir q;
  q.b = gram_inverse(g);
  auto U = std::make_shared<PBWAlgebra>(g);
  const int d = g.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Rat& c = q.b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (c != 0) q.element.add(U->word({i, j}), c);
    }
  if (opt.verify) {
    q.residuals = residuals_of(g, *U, q.element, 0, opt.jobs);
    q.verified = true;
  }
  q.U = std::move(U);
  return q;
}

std::vector<std::array<int, 3>> check_b_identity(const SuperAlgebra& g, const RatMatrix& b) {
  const int d = g.dim();
  std::vector<std::array<int, 3>> bad;
  for (int k = 0; k < d; ++k) {
    // s[i][j] = sum_l b_lj c_kl^i + (-1)^{p_i p_k} b_il c_kl^j
    std::vector<std::vector<Rat>> s(static_cast<std::size_t>(d), std::vector<Rat>(static_cast<std::size_t>(d), 0));
    for (int l = 0; l < d; ++l)
      for (const auto& [t, c] : g.bracket(k, l)) {
        for (int j = 0; j < d; ++j) {
          const Rat& blj = b[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)];
          if (blj != 0) s[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)] += blj * c;
        }
        for (int i = 0; i < d; ++i) {
          const Rat& bil = b[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)];
          if (bil == 0) continue;
          Rat sg = (g.parity(i) && g.parity(k)) ? Rat(-1) : Rat(1);
          s[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] += sg * bil * c;
        }
      }
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (s[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0) bad.push_back({i, j, k});
  }
  return bad;
}

AMapReport a_map(const SuperAlgebra& g) {
  require_form(g, 0);
  RatMatrix b = gram_inverse(g);
  const int d = g.dim();
  AMapReport rep;
  rep.matrix.assign(static_cast<std::size_t>(d), std::vector<Rat>(static_cast<std::size_t>(d), 0));
  for (int x = 0; x < d; ++x) {
    SparseVec acc;
    for (int i = 0; i < d; ++i) {
      const auto& xi = g.bracket(x, i);
      if (xi.empty()) continue;
      for (int j = 0; j < d; ++j) {
        const Rat& c = b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (c != 0) sv_axpy(acc, c, g.bracket(xi, sv_unit(j)));
      }
    }
    for (const auto& [k, c] : acc) rep.matrix[static_cast<std::size_t>(k)][static_cast<std::size_t>(x)] = c;
  }
  Rat lam = d ? rep.matrix[0][0] : Rat(0);
  rep.scalar = true;
  for (int i = 0; i < d && rep.scalar; ++i)
    for (int j = 0; j < d; ++j)
      if (rep.matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != (i == j ? lam : Rat(0))) {
        rep.scalar = false;
        break;
      }
  if (rep.scalar) rep.lambda = lam;
  return rep;
}

AdCommutationReport ad_commutes_with_A(const SuperAlgebra& g) { return ad_commutes_with_A(g, a_map(g)); }

AdCommutationReport ad_commutes_with_A(const SuperAlgebra& g, const AMapReport& A) {
  const int d = g.dim();
  auto apply = [&](const SparseVec& v) {
    SparseVec out;
    for (const auto& [j, c] : v)
      for (int i = 0; i < d; ++i) {
        const Rat& a = A.matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (a != 0) sv_axpy(out, c * a, sv_unit(i));
      }
    return out;
  };
  AdCommutationReport rep;
  for (int k = 0; k < d; ++k)
    for (int j = 0; j < d; ++j) {
      SparseVec lhs = g.bracket(sv_unit(k), apply(sv_unit(j)));
      SparseVec rhs = apply(g.bracket(k, j));
      if (lhs != rhs) rep.violations.emplace_back(k, j);
    }
  return rep;
}

CubicCasimir c3(const SuperAlgebra& g, const CasimirOptions& opt) {
  require_form(g, 1);
  CubicCasimir cc;
  cc.b = gram_inverse(g);
  const int d = g.dim();
  const auto& b = cc.b;
  // F(k,l,m) = sum_ij (-1)^{p_l} c_ij^k b_im b_jl
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (const auto& [k, c] : g.bracket(i, j))
        for (int m = 0; m < d; ++m) {
          const Rat& bim = b[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)];
          if (bim == 0) continue;
          for (int l = 0; l < d; ++l) {
            const Rat& bjl = b[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)];
            if (bjl == 0) continue;
            Rat v = c * bim * bjl;
            if (g.parity(l)) v = -v;
            auto [it, fresh] = cc.F.try_emplace({k, l, m}, v);
            if (!fresh) {
              it->second += v;
              if (it->second == 0) cc.F.erase(it);
            }
          }
        }
  auto U = std::make_shared<PBWAlgebra>(g);
  for (const auto& [klm, v] : cc.F) cc.element.add(U->word({klm[0], klm[1], klm[2]}), v);
  if (opt.verify) {
    int pc = U->parity(cc.element);
    cc.residuals = residuals_of(g, *U, cc.element, pc < 0 ? 0 : pc, opt.jobs);
    cc.verified = true;
  }
  cc.U = std::move(U);
  return cc;
}

std::vector<std::array<int, 3>> check_f_symmetry(const SuperAlgebra& g, const CubicCasimir& c) {
  std::vector<std::array<int, 3>> bad;
  const int d = g.dim();
  for (int k = 0; k < d; ++k)
    for (int l = 0; l < d; ++l)
      for (int m = 0; m < d; ++m) {
        Rat f = c.F_at(k, l, m);
        Rat s1 = (g.parity(k) && g.parity(l)) ? Rat(-1) : Rat(1);
        Rat s2 = (g.parity(l) && g.parity(m)) ? Rat(-1) : Rat(1);
        if (f != s1 * c.F_at(l, k, m) || f != s2 * c.F_at(k, m, l)) bad.push_back({k, l, m});
      }
  return bad;
}

}  // namespace supercas
