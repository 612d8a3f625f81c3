#include "supercas/loop_km.hpp"

#include <algorithm>
#include <set>

#include "supercas/casimir.hpp"
#include "supercas/parallel.hpp"

namespace supercas {

namespace {

int mod(int a, int r) { return ((a % r) + r) % r; }

void add_to(LoopElement& e, const LoopGen& g, const Rat& c) {
  if (c == 0) return;
  auto [it, fresh] = e.try_emplace(g, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) e.erase(it);
  }
}

using Pair = std::pair<LoopGen, LoopGen>;
using Quad = std::map<Pair, Rat>;

void add_to(Quad& q, const LoopGen& a, const LoopGen& b, const Rat& c) {
  if (c == 0) return;
  auto [it, fresh] = q.try_emplace(Pair{a, b}, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) q.erase(it);
  }
}

}  // namespace

LoopAlgebra::LoopAlgebra(const SuperAlgebra& g, int twist_r) : g_(g), r_(twist_r) {
  if (r_ < 1) throw MathError(ErrorCode::InvalidParameters, "twist must be a positive integer");
  if (r_ > 1 && (!g_.grading || g_.grading->r != r_))
    throw MathError(ErrorCode::GradingIncompatible, g_.name + " has no Z/" + std::to_string(r_) + " grading");
}

int LoopAlgebra::grading_class(int index) const {
  if (r_ == 1) return 0;
  return g_.grading->classes[static_cast<std::size_t>(index)];
}

bool LoopAlgebra::supported(const LoopGen& x) const {
  if (x.kind != LoopGen::Loop) return true;
  if (x.index < 0 || x.index >= g_.dim()) return false;
  return mod(x.degree - grading_class(x.index), r_) == 0;
}

int LoopAlgebra::parity(const LoopGen& x) const { return x.kind == LoopGen::Loop ? g_.parity(x.index) : 0; }

std::string LoopAlgebra::str(const LoopGen& x) const {
  if (x.kind == LoopGen::Z) return "z";
  if (x.kind == LoopGen::U) return "u";
  std::string l = g_.labels[static_cast<std::size_t>(x.index)];
  if (x.degree == 0) return l;
  return "t^" + std::to_string(x.degree) + "*" + (l.find('*') != std::string::npos ? "(" + l + ")" : l);
}

std::string LoopAlgebra::str(const LoopElement& x) const {
  if (x.empty()) return "0";
  std::string s;
  for (const auto& [g, c] : x) {
    if (!s.empty()) s += " + ";
    s += (c == 1 ? "" : c.get_str() + "*") + str(g);
  }
  return s;
}

LoopElement LoopAlgebra::bracket(const LoopGen& x, const LoopGen& y) const {
  for (const auto* v : {&x, &y})
    if (!supported(*v))
      throw MathError(ErrorCode::UnsupportedDegree, "t^" + std::to_string(v->degree) + " " +
                                                        g_.labels[static_cast<std::size_t>(std::max(0, v->index))] +
                                                        " is outside the twisted loop algebra");
  LoopElement out;
  if (x.kind == LoopGen::Z || y.kind == LoopGen::Z) return out;
  if (x.kind == LoopGen::U && y.kind == LoopGen::U) return out;
  if (x.kind == LoopGen::U) {
    add_to(out, y, Rat(y.degree));
    return out;
  }
  if (y.kind == LoopGen::U) {
    add_to(out, x, Rat(-x.degree));
    return out;
  }
  for (const auto& [k, c] : g_.bracket(x.index, y.index)) add_to(out, LoopGen::loop(x.degree + y.degree, k), c);
  if (x.degree + y.degree == 0 && x.degree != 0) {
    if (!g_.form) throw MathError(ErrorCode::MissingData, g_.name + " has no invariant form for the cocycle");
    const Rat& a = g_.form->gram[static_cast<std::size_t>(x.index)][static_cast<std::size_t>(y.index)];
    add_to(out, LoopGen::z(), Rat(x.degree) * a);
  }
  return out;
}

LoopElement LoopAlgebra::bracket(const LoopElement& x, const LoopElement& y) const {
  LoopElement out;
  for (const auto& [a, ca] : x)
    for (const auto& [b, cb] : y)
      for (const auto& [k, c] : bracket(a, b)) add_to(out, k, ca * cb * c);
  return out;
}

LoopElement km_bracket(const LoopElement& x, const LoopElement& y, const SuperAlgebra& g, int twist_r) {
  return LoopAlgebra(g, twist_r).bracket(x, y);
}

std::map<std::pair<int, int>, Rat> GradedQuadratic::slice(int p) const {
  std::map<std::pair<int, int>, Rat> out;
  if (p > 0) return out;
  Rat c = p == 0 ? Rat(1) : Rat(2);
  int s = mod(p, r);
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (mod(classes[i], r) != s) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (b[i][j] != 0) out[{static_cast<int>(i), static_cast<int>(j)}] = c * b[i][j];
  }
  return out;
}

GradedQuadratic omega_km(const SuperAlgebra& g, int twist_r) {
  if (!g.form) throw MathError(ErrorCode::MissingData, g.name + " has no invariant form");
  if (g.form->parity != 0) throw MathError(ErrorCode::FormParityMismatch, g.name + " carries an odd form");
  LoopAlgebra L(g, twist_r);
  GradedQuadratic q;
  q.r = twist_r;
  const int d = g.dim();
  for (int i = 0; i < d; ++i) q.classes.push_back(L.grading_class(i));
  if (twist_r > 1) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        for (const auto& [k, c] : g.bracket(i, j))
          if (mod(q.classes[static_cast<std::size_t>(i)] + q.classes[static_cast<std::size_t>(j)] -
                      q.classes[static_cast<std::size_t>(k)],
                  twist_r) != 0)
            throw MathError(ErrorCode::GradingIncompatible, "grading does not respect the bracket");
        if (g.form->gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0 &&
            mod(q.classes[static_cast<std::size_t>(i)] + q.classes[static_cast<std::size_t>(j)], twist_r) != 0)
          throw MathError(ErrorCode::GradingIncompatible, "grading does not respect the form");
      }
  }
  q.b = gram_inverse(g);
  auto A = a_map(g);
  if (!A.scalar) throw MathError(ErrorCode::NonScalarA, "A is not scalar on " + g.name);
  q.lambda = *A.lambda;
  q.u_coefficient = q.lambda / twist_r;
  return q;
}

bool CentralityCheck::ok() const {
  if (!tail_zero || !linear_residual.empty() || z_terms) return false;
  for (const auto& s : slices)
    if (!s.zero) return false;
  return true;
}

bool KMCentralityReport::ok() const {
  for (const auto& c : checks)
    if (!c.ok()) return false;
  return true;
}

std::size_t KMCentralityReport::slices_checked() const {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.slices.size();
  return n;
}

namespace {

CentralityCheck check_one(const LoopAlgebra& L, const GradedQuadratic& om, const LoopGen& X) {
  CentralityCheck res;
  res.x = X;
  const int r = om.r;
  const int m = X.kind == LoopGen::Loop ? X.degree : 0;
  const int lo = std::min(0, m) - 2 * r - 2, hi = std::max(0, m) + 2 * r + 2;
  const int px = L.parity(X);

  // Raw tensor terms of [X, Omega'] grouped by first-factor degree; z-terms kept apart.
  std::map<int, Quad> raw;
  Quad zq;
  auto put = [&](int a, const LoopGen& f, const LoopGen& s, const Rat& c) {
    if (f.kind == LoopGen::Z || s.kind == LoopGen::Z)
      add_to(zq, f, s, c);
    else
      add_to(raw[a], f, s, c);
  };
  for (int a = lo; a <= hi; ++a) {
    // first factor of degree a arises from the slices p = a - m ([X, A] B) and p = a (A [X, B])
    if (a - m <= 0)
      for (const auto& [ij, c] : om.slice(a - m)) {
        LoopGen A = LoopGen::loop(a - m, ij.first), B = LoopGen::loop(m - a, ij.second);
        for (const auto& [k, v] : L.bracket(X, A)) put(a, k, B, c * v);
      }
    if (a <= 0)
      for (const auto& [ij, c] : om.slice(a)) {
        LoopGen A = LoopGen::loop(a, ij.first), B = LoopGen::loop(-a, ij.second);
        Rat sg = (px && L.parity(A)) ? Rat(-1) : Rat(1);
        for (const auto& [k, v] : L.bracket(X, B)) put(a, A, k, sg * c * v);
      }
  }
  for (int a = lo; a < lo + r; ++a)
    if (raw.count(a) && !raw[a].empty()) res.tail_zero = false;
  for (int a = hi; a > hi - r; --a)
    if (raw.count(a) && !raw[a].empty()) res.tail_zero = false;

  // [X, 2 u z + lambda u] = 2 [X, u] z + lambda [X, u]
  LoopElement xu = L.bracket(X, LoopGen::u());
  for (const auto& [k, c] : xu) {
    add_to(zq, LoopGen::z(), k, om.uz_coefficient * c);
    add_to(res.linear_residual, k, om.u_coefficient * c);
  }
  for (const auto& [w, c] : om.degree0_linear)
    for (const auto& [k, v] : L.bracket(X, LoopGen::loop(0, w))) add_to(res.linear_residual, k, c * v);

  // normal ordering: pairs (x, y) with x <= y; odd squares halve to brackets
  std::map<std::pair<int, int>, SliceResult> slices;
  std::map<std::pair<int, int>, Quad> normal;
  for (const auto& [a, q] : raw)
    for (const auto& [xy, c] : q) {
      const auto& [x, y] = xy;
      std::pair<int, int> key{std::min(x.degree, y.degree), std::max(x.degree, y.degree)};
      auto& sr = slices[key];
      sr.a = key.first;
      sr.b = key.second;
      ++sr.terms;
      if (x == y) {
        if (L.parity(x)) {
          for (const auto& [k, v] : L.bracket(x, y)) add_to(res.linear_residual, k, c * v / 2);
        } else {
          add_to(normal[key], x, y, c);
        }
      } else if (x < y) {
        add_to(normal[key], x, y, c);
      } else {
        Rat sg = (L.parity(x) && L.parity(y)) ? Rat(-1) : Rat(1);
        add_to(normal[key], y, x, sg * c);
        for (const auto& [k, v] : L.bracket(x, y)) add_to(res.linear_residual, k, c * v);
      }
    }
  for (auto& [key, sr] : slices) sr.zero = normal[key].empty();
  for (auto& [key, sr] : slices) res.slices.push_back(sr);

  Quad zn;
  for (const auto& [xy, c] : zq) {
    const auto& [x, y] = xy;
    if (x.kind == LoopGen::Z)
      add_to(zn, x, y, c);
    else
      add_to(zn, y, x, c);  // z is even and central
  }
  res.z_terms = zn.size();
  return res;
}

}  // namespace

KMCentralityReport verify_km_centrality(const SuperAlgebra& g, int twist_r, int window, int jobs) {
  return verify_km_centrality(g, omega_km(g, twist_r), window, jobs);
}

KMCentralityReport verify_km_centrality(const SuperAlgebra& g, const GradedQuadratic& om, int window, int jobs) {
  const int twist_r = om.r;
  LoopAlgebra L(g, twist_r);
  KMCentralityReport rep;
  rep.twist = twist_r;
  rep.lambda = om.lambda;
  rep.window = window;
  std::vector<LoopGen> xs{LoopGen::z(), LoopGen::u()};
  for (int m = -window; m <= window; ++m)
    for (int k = 0; k < g.dim(); ++k) {
      LoopGen x = LoopGen::loop(m, k);
      if (L.supported(x)) xs.push_back(x);
    }
  rep.checks.resize(xs.size());
  parallel_for(xs.size(), jobs, [&](std::size_t i) { rep.checks[i] = check_one(L, om, xs[i]); });
  return rep;
}

std::optional<GradedQuadratic> solve_linear_part(const SuperAlgebra& g, GradedQuadratic omega, int window) {
  LoopAlgebra L(g, omega.r);
  omega.u_coefficient = 0;
  omega.degree0_linear.clear();
  auto rep = verify_km_centrality(g, omega, window);
  std::vector<int> g0;
  for (int c = 0; c < g.dim(); ++c)
    if (g.parity(c) == 0 && mod(L.grading_class(c), omega.r) == 0) g0.push_back(c);
  // unknowns: mu (u coefficient), w_c; one row per (X, output generator)
  const std::size_t cols = g0.size() + 2;
  std::vector<std::vector<Rat>> rows;
  for (const auto& chk : rep.checks) {
    if (chk.x.kind != LoopGen::Loop) continue;
    std::map<LoopGen, std::vector<Rat>> eq;
    auto row = [&](const LoopGen& k) -> std::vector<Rat>& {
      auto it = eq.find(k);
      if (it == eq.end()) it = eq.emplace(k, std::vector<Rat>(cols, 0)).first;
      return it->second;
    };
    for (const auto& [k, c] : L.bracket(chk.x, LoopGen::u())) row(k)[0] += c;
    for (std::size_t t = 0; t < g0.size(); ++t)
      for (const auto& [k, c] : L.bracket(chk.x, LoopGen::loop(0, g0[t]))) row(k)[t + 1] += c;
    for (const auto& [k, c] : chk.linear_residual) row(k)[cols - 1] += c;
    for (auto& [k, r] : eq) rows.push_back(std::move(r));
  }
  if (rows.empty()) return omega;
  for (const auto& v : null_space(rows, cols)) {
    if (v[cols - 1] == 0) continue;
    Rat s = 1 / v[cols - 1];
    omega.u_coefficient = v[0] * s;
    std::map<int, Rat> w;
    for (std::size_t t = 0; t < g0.size(); ++t)
      if (v[t + 1] != 0) w[g0[t]] = v[t + 1] * s;
    omega.degree0_linear = sv_from_map(w);
    if (!verify_km_centrality(g, omega, window).ok()) return std::nullopt;
    return omega;
  }
  return std::nullopt;
}

SuperAlgebra truncated_loop(const SuperAlgebra& g, int cutoff) {
  if (cutoff < 0) throw MathError(ErrorCode::InvalidParameters, "cutoff must be nonnegative");
  if (!g.form) throw MathError(ErrorCode::MissingData, g.name + " has no invariant form");
  if (g.form->parity != 0) throw MathError(ErrorCode::FormParityMismatch, g.name + " carries an odd form");
  if (!g.splitter) throw MathError(ErrorCode::MissingData, g.name + " has no splitter");
  const int d = g.dim();
  const int span = 2 * cutoff + 1;
  auto idx = [&](int a, int i) { return (a + cutoff) * d + i; };
  const int iu = span * d, iz = iu + 1;

  std::vector<std::string> labels;
  std::vector<int> par;
  for (int a = -cutoff; a <= cutoff; ++a)
    for (int i = 0; i < d; ++i) {
      labels.push_back(a == 0 ? g.labels[static_cast<std::size_t>(i)]
                              : "t^" + std::to_string(a) + "(" + g.labels[static_cast<std::size_t>(i)] + ")");
      par.push_back(g.parity(i));
    }
  labels.push_back("u");
  par.push_back(0);
  labels.push_back("z");
  par.push_back(0);
  SuperAlgebra out("loop " + g.name + " |t|<=" + std::to_string(cutoff), labels, par);

  LoopAlgebra L(g);
  auto to_index = [&](const LoopGen& x) -> int {
    if (x.kind == LoopGen::U) return iu;
    if (x.kind == LoopGen::Z) return iz;
    if (x.degree < -cutoff || x.degree > cutoff) return -1;
    return idx(x.degree, x.index);
  };
  std::vector<LoopGen> gens;
  for (int a = -cutoff; a <= cutoff; ++a)
    for (int i = 0; i < d; ++i) gens.push_back(LoopGen::loop(a, i));
  gens.push_back(LoopGen::u());
  gens.push_back(LoopGen::z());
  const int n = static_cast<int>(gens.size());
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      std::map<int, Rat> v;
      for (const auto& [k, c] : L.bracket(gens[static_cast<std::size_t>(x)], gens[static_cast<std::size_t>(y)])) {
        int t = to_index(k);
        if (t >= 0) v[t] += c;
      }
      out.set_bracket(x, y, sv_from_map(v));
    }

  InvariantForm f;
  f.parity = 0;
  f.gram.assign(static_cast<std::size_t>(n), std::vector<Rat>(static_cast<std::size_t>(n), 0));
  for (int a = -cutoff; a <= cutoff; ++a)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        f.gram[static_cast<std::size_t>(idx(a, i))][static_cast<std::size_t>(idx(-a, j))] =
            g.form->gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  f.gram[static_cast<std::size_t>(iu)][static_cast<std::size_t>(iz)] = 1;
  f.gram[static_cast<std::size_t>(iz)][static_cast<std::size_t>(iu)] = 1;
  out.form = std::move(f);

  for (std::size_t k = 0; k < g.cartan.size(); ++k) {
    out.cartan.push_back(idx(0, g.cartan[k]));
    out.cartan_names.push_back(g.cartan_names[k]);
  }
  out.cartan.push_back(iu);
  out.cartan_names.push_back("u");
  out.cartan.push_back(iz);
  out.cartan_names.push_back("z");

  RootDatum rd = root_decomposition(g);
  Rat big = 1;
  for (const auto& h : rd.height_of) big = std::max(big, Rat(abs(h) + 1));
  SparseVec H;
  for (const auto& [i, c] : *g.splitter) H.emplace_back(idx(0, i), c);
  H.emplace_back(iu, big);
  out.splitter = H;

  if (g.sigma) {
    SignedPermutation s;
    for (int a = -cutoff; a <= cutoff; ++a)
      for (int i = 0; i < d; ++i) {
        s.perm.push_back(idx(-a, g.sigma->perm[static_cast<std::size_t>(i)]));
        s.coef.push_back(g.sigma->coef[static_cast<std::size_t>(i)]);
      }
    s.perm.push_back(iu);
    s.coef.push_back(1);
    s.perm.push_back(iz);
    s.coef.push_back(1);
    out.sigma = std::move(s);
  }

  for (const auto& [name, w] : g.named_weights) {
    Weight x = w;
    x.push_back(0);
    x.push_back(0);
    out.named_weights[name] = x;
  }
  Weight tw(g.even_cartan().size() + 2, 0);
  tw[tw.size() - 2] = 1;
  out.named_weights["e'"] = tw;
  out.notes.push_back("brackets leaving |t-degree| <= " + std::to_string(cutoff) + " are dropped");
  return out;
}

}  // namespace supercas
