#include "supercas/scalars.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace supercas {

Rat parse_rat(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw MathError(ErrorCode::ParseError, "empty rational");
  if (s[0] == '+') s.erase(0, 1);
  bool ok = !s.empty();
  std::size_t slash = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) continue;
    if (c == '-' && i == 0) continue;
    if (c == '/' && slash == 0 && i > 0) {
      slash = i;
      continue;
    }
    ok = false;
  }
  if (!ok || s == "-" || s.back() == '/')
    throw MathError(ErrorCode::ParseError, "not a rational: " + std::string(text));
  Rat r;
  if (r.set_str(s, 10) != 0) throw MathError(ErrorCode::ParseError, "not a rational: " + s);
  if (r.get_den() == 0) throw MathError(ErrorCode::ParseError, "zero denominator: " + s);
  r.canonicalize();
  return r;
}

std::string to_string(const Rat& r) { return r.get_str(); }

// ---------------------------------------------------------------- CartanPoly

CartanPoly::CartanPoly(std::vector<std::string> variables) : vars_(std::move(variables)) {}

CartanPoly CartanPoly::constant(const Rat& c, std::vector<std::string> variables) {
  CartanPoly p(std::move(variables));
  if (c != 0) p.terms_[Exponents(p.vars_.size(), 0)] = c;
  return p;
}

CartanPoly CartanPoly::variable(const std::string& name, std::vector<std::string> variables) {
  auto it = std::find(variables.begin(), variables.end(), name);
  if (it == variables.end()) {
    variables.push_back(name);
    it = variables.end() - 1;
  }
  CartanPoly p(std::move(variables));
  Exponents e(p.vars_.size(), 0);
  e[static_cast<std::size_t>(it - p.vars_.begin())] = 1;
  p.terms_[e] = 1;
  return p;
}

bool CartanPoly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const auto& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](std::uint32_t x) { return x == 0; });
}

Rat CartanPoly::constant_term() const { return coefficient(Exponents(vars_.size(), 0)); }

Rat CartanPoly::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rat(0) : it->second;
}

int CartanPoly::total_degree() const {
  int d = terms_.empty() ? -1 : 0;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (auto x : e) s += static_cast<int>(x);
    d = std::max(d, s);
  }
  return d;
}

int CartanPoly::degree_in(const std::string& var) const {
  auto it = std::find(vars_.begin(), vars_.end(), var);
  if (it == vars_.end()) return terms_.empty() ? -1 : 0;
  std::size_t k = static_cast<std::size_t>(it - vars_.begin());
  int d = terms_.empty() ? -1 : 0;
  for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[k]));
  return d;
}

void CartanPoly::add_term(const Exponents& e, const Rat& c) {
  if (e.size() != vars_.size())
    throw MathError(ErrorCode::InvalidParameters, "exponent length does not match variables");
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

CartanPoly CartanPoly::aligned(const std::vector<std::string>& vars) const {
  if (vars == vars_) return *this;
  std::vector<std::size_t> pos(vars_.size());
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    auto it = std::find(vars.begin(), vars.end(), vars_[i]);
    pos[i] = it == vars.end() ? vars.size() : static_cast<std::size_t>(it - vars.begin());
  }
  CartanPoly out(vars);
  for (const auto& [e, c] : terms_) {
    Exponents f(vars.size(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (pos[i] == vars.size())
        throw MathError(ErrorCode::InvalidParameters, "variable " + vars_[i] + " not in target list");
      f[pos[i]] = e[i];
    }
    out.terms_.emplace(std::move(f), c);
  }
  return out;
}

CartanPoly CartanPoly::compacted() const {
  std::vector<std::string> used;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    bool occurs = false;
    for (const auto& [e, c] : terms_)
      if (e[i] != 0) {
        occurs = true;
        break;
      }
    if (occurs) used.push_back(vars_[i]);
  }
  return aligned(used);
}

std::pair<CartanPoly::Exponents, Rat> CartanPoly::leading_term() const {
  if (terms_.empty()) return {Exponents(vars_.size(), 0), Rat(0)};
  return *terms_.rbegin();
}

Rat CartanPoly::evaluate(const std::map<std::string, Rat>& point) const {
  CartanPoly s = specialize(point);
  if (!s.is_constant())
    throw MathError(ErrorCode::InvalidParameters, "evaluation point misses a variable");
  return s.constant_term();
}

CartanPoly CartanPoly::specialize(const std::map<std::string, Rat>& point) const {
  std::vector<std::string> keep;
  std::vector<std::size_t> keep_idx;
  std::vector<std::pair<std::size_t, Rat>> fixed;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    auto it = point.find(vars_[i]);
    if (it == point.end()) {
      keep.push_back(vars_[i]);
      keep_idx.push_back(i);
    } else {
      fixed.emplace_back(i, it->second);
    }
  }
  CartanPoly out(keep);
  for (const auto& [e, c] : terms_) {
    Rat v = c;
    for (const auto& [i, x] : fixed) {
      Rat pw = 1;
      for (std::uint32_t k = 0; k < e[i]; ++k) pw *= x;
      v *= pw;
    }
    Exponents f(keep.size());
    for (std::size_t j = 0; j < keep_idx.size(); ++j) f[j] = e[keep_idx[j]];
    out.add_term(f, v);
  }
  return out;
}

std::vector<std::string> merge_variables(const std::vector<std::string>& a,
                                         const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  for (const auto& v : b)
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  return out;
}

CartanPoly& CartanPoly::operator+=(const CartanPoly& o) {
  if (o.vars_ != vars_) {
    auto vars = merge_variables(vars_, o.vars_);
    *this = aligned(vars);
    CartanPoly b = o.aligned(vars);
    for (const auto& [e, c] : b.terms_) add_term(e, c);
    return *this;
  }
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

CartanPoly& CartanPoly::operator-=(const CartanPoly& o) { return *this += -o; }

CartanPoly& CartanPoly::operator*=(const Rat& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

CartanPoly CartanPoly::operator-() const {
  CartanPoly out = *this;
  for (auto& [e, v] : out.terms_) v = -v;
  return out;
}

CartanPoly operator*(const CartanPoly& a, const CartanPoly& b) {
  if (a.vars_ != b.vars_) {
    auto vars = merge_variables(a.vars_, b.vars_);
    return a.aligned(vars) * b.aligned(vars);
  }
  CartanPoly out(a.vars_);
  CartanPoly::Exponents e(a.vars_.size());
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  return out;
}

bool operator==(const CartanPoly& a, const CartanPoly& b) {
  if (a.vars_ == b.vars_) return a.terms_ == b.terms_;
  auto vars = merge_variables(a.vars_, b.vars_);
  return a.aligned(vars).terms_ == b.aligned(vars).terms_;
}

CartanPoly CartanPoly::pow(unsigned k) const {
  CartanPoly out = constant(1, vars_);
  CartanPoly base = *this;
  while (k) {
    if (k & 1u) out = out * base;
    k >>= 1u;
    if (k) base = base * base;
  }
  return out;
}

std::string CartanPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += vars_[i];
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    Rat a = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (mono.empty()) {
      os << a.get_str();
    } else if (a == 1) {
      os << mono;
    } else {
      os << a.get_str() << "*" << mono;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------- LinearForm

LinearForm::LinearForm(std::map<std::string, Rat> coefficients, Rat constant)
    : constant_(std::move(constant)) {
  for (auto& [k, v] : coefficients)
    if (v != 0) coeffs_.emplace(k, v);
}

LinearForm LinearForm::variable(const std::string& name, const Rat& shift) {
  return LinearForm({{name, Rat(1)}}, shift);
}

CartanPoly LinearForm::to_poly(const std::vector<std::string>& vars) const {
  std::vector<std::string> names = vars;
  for (const auto& [k, v] : coeffs_)
    if (std::find(names.begin(), names.end(), k) == names.end()) names.push_back(k);
  CartanPoly p = CartanPoly::constant(constant_, names);
  for (const auto& [k, v] : coeffs_) p += CartanPoly::variable(k, names) * v;
  return p;
}

std::string LinearForm::str() const {
  std::vector<std::string> names;
  for (const auto& [k, v] : coeffs_) names.push_back(k);
  return to_poly(names).str();
}

// ---------------------------------------------------------------- division

std::optional<CartanPoly> divide_exact(const CartanPoly& p, const CartanPoly& q) {
  if (q.is_zero()) throw MathError(ErrorCode::InvalidParameters, "division by zero polynomial");
  auto vars = merge_variables(p.variables(), q.variables());
  CartanPoly r = p.aligned(vars);
  CartanPoly d = q.aligned(vars);
  CartanPoly quot(vars);
  const auto [lq, cq] = d.leading_term();
  CartanPoly::Exponents t(vars.size());
  while (!r.is_zero()) {
    const auto [lr, cr] = r.leading_term();
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (lr[i] < lq[i]) return std::nullopt;
      t[i] = lr[i] - lq[i];
    }
    Rat c = cr / cq;
    quot.add_term(t, c);
    CartanPoly::Exponents e(vars.size());
    for (const auto& [eq, v] : d.terms()) {
      for (std::size_t i = 0; i < vars.size(); ++i) e[i] = eq[i] + t[i];
      r.add_term(e, -(v * c));
    }
  }
  return quot.aligned(p.variables().size() >= vars.size() ? p.variables() : vars);
}

TrialDivision trial_divide(const CartanPoly& p, const LinearForm& f) {
  if (f.is_zero()) return {p, false};
  auto q = divide_exact(p, f.to_poly(p.variables()));
  if (!q) return {p, false};
  return {*q, true};
}

int FactorizationReport::multiplicity(const LinearForm& f) const {
  for (const auto& [g, k] : factors)
    if (g == f) return k;
  return 0;
}

CartanPoly FactorizationReport::reconstruct() const {
  CartanPoly out = CartanPoly::constant(scalar, cofactor.variables());
  for (const auto& [f, k] : factors) out = out * f.to_poly().pow(static_cast<unsigned>(k));
  return out * cofactor;
}

FactorizationReport factor_over_candidates(const CartanPoly& p,
                                           const std::vector<LinearForm>& candidates) {
  FactorizationReport rep;
  rep.determinant = p;
  if (p.is_zero()) {
    rep.scalar = 0;
    rep.cofactor = p;
    return rep;
  }
  CartanPoly cur = p;
  std::vector<LinearForm> seen;
  for (const auto& f : candidates) {
    if (f.is_zero() || f.coefficients().empty()) continue;
    if (std::find(seen.begin(), seen.end(), f) != seen.end()) continue;
    seen.push_back(f);
    int k = 0;
    for (;;) {
      auto d = trial_divide(cur, f);
      if (!d.exact) break;
      cur = std::move(d.quotient);
      ++k;
    }
    if (k > 0) rep.factors.emplace_back(f, k);
  }
  cur = cur.compacted();
  rep.scalar = cur.leading_term().second;
  cur *= Rat(1) / rep.scalar;
  rep.cofactor = cur;
  return rep;
}

FactorizationReport report_from_product(const Rat& scalar,
                                        const std::vector<std::pair<LinearForm, int>>& factors,
                                        const std::vector<std::string>& vars) {
  FactorizationReport rep;
  rep.scalar = scalar;
  std::map<LinearForm, int> merged;
  std::vector<LinearForm> order;
  for (const auto& [f, k] : factors) {
    if (k == 0) continue;
    if (!merged.count(f)) order.push_back(f);
    merged[f] += k;
  }
  for (const auto& f : order)
    if (merged[f] != 0) rep.factors.emplace_back(f, merged[f]);
  rep.cofactor = CartanPoly::constant(1);
  rep.determinant = rep.reconstruct();
  if (!vars.empty()) rep.determinant = rep.determinant.aligned(merge_variables(vars, rep.determinant.variables()));
  return rep;
}

// ---------------------------------------------------------------- matrices

CartanPoly determinant(PolyMatrix m) {
  const std::size_t n = m.size();
  if (n == 0) return CartanPoly::constant(1);
  std::vector<std::string> vars;
  for (const auto& row : m) {
    if (row.size() != n) throw MathError(ErrorCode::InvalidParameters, "matrix is not square");
    for (const auto& x : row) vars = merge_variables(vars, x.variables());
  }
  for (auto& row : m)
    for (auto& x : row) x = x.aligned(vars);
  bool negate = false;
  CartanPoly prev = CartanPoly::constant(1, vars);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    // Full pivoting on (degree, term count): low pivots keep intermediate growth down.
    std::size_t bi = n, bj = n;
    std::pair<int, std::size_t> best{0, 0};
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = k; j < n; ++j) {
        if (m[i][j].is_zero()) continue;
        std::pair<int, std::size_t> key{m[i][j].total_degree(), m[i][j].size()};
        if (bi == n || key < best) {
          best = key;
          bi = i;
          bj = j;
        }
      }
    if (bi == n) return CartanPoly(vars);
    if (bi != k) {
      std::swap(m[k], m[bi]);
      negate = !negate;
    }
    if (bj != k) {
      for (auto& row : m) std::swap(row[k], row[bj]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        CartanPoly num = m[k][k] * m[i][j] - m[i][k] * m[k][j];
        if (k == 0 || prev.is_constant()) {
          Rat c = k == 0 ? Rat(1) : prev.constant_term();
          if (c != 1) num *= Rat(1) / c;
          m[i][j] = std::move(num);
        } else {
          auto q = divide_exact(num, prev);
          if (!q) throw MathError(ErrorCode::InvalidParameters, "inexact Bareiss step");
          m[i][j] = std::move(*q);
        }
      }
      m[i][k] = CartanPoly(vars);
    }
    prev = m[k][k];
  }
  CartanPoly d = m[n - 1][n - 1];
  return negate ? -d : d;
}

Rat determinant(std::vector<std::vector<Rat>> m) {
  const std::size_t n = m.size();
  Rat det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m[p][k] == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      std::swap(m[p], m[k]);
      det = -det;
    }
    det *= m[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m[i][k] == 0) continue;
      Rat f = m[i][k] / m[k][k];
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return det;
}

std::optional<std::vector<std::vector<Rat>>> inverse(std::vector<std::vector<Rat>> m) {
  const std::size_t n = m.size();
  std::vector<std::vector<Rat>> inv(n, std::vector<Rat>(n, 0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && m[p][k] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(m[p], m[k]);
    std::swap(inv[p], inv[k]);
    Rat piv = m[k][k];
    for (std::size_t j = 0; j < n; ++j) {
      m[k][j] /= piv;
      inv[k][j] /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || m[i][k] == 0) continue;
      Rat f = m[i][k];
      for (std::size_t j = 0; j < n; ++j) {
        m[i][j] -= f * m[k][j];
        inv[i][j] -= f * inv[k][j];
      }
    }
  }
  return inv;
}

std::vector<std::vector<Rat>> null_space(std::vector<std::vector<Rat>> m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    Rat piv = m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] /= piv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  std::vector<std::vector<Rat>> basis;
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rat> v(cols, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace supercas
