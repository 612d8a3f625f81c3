#include "supercas/uea.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <numeric>

namespace supercas {

void PBWElement::add(const PBWMonomial& m, const Rat& c) {
  if (c == 0) return;
  auto [it, fresh] = terms.try_emplace(m, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

void PBWElement::add(const PBWElement& o, const Rat& c) {
  if (c == 0) return;
  for (const auto& [m, x] : o.terms) add(m, c * x);
}

PBWElement& PBWElement::operator*=(const Rat& c) {
  if (c == 0) {
    terms.clear();
    return *this;
  }
  for (auto& [m, x] : terms) x *= c;
  return *this;
}

int PBWElement::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms) d = std::max(d, static_cast<int>(m.size()));
  return d;
}

std::size_t MonoHash::operator()(const PBWMonomial& m) const noexcept {
  std::size_t h = m.size();
  for (auto x : m) h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

PBWAlgebra::PBWAlgebra(const SuperAlgebra& g, const PBWOptions& opt) : g_(g), opt_(opt) {
  if (g_.splitter) rd_ = root_decomposition(g_);
  init(opt);
}

PBWAlgebra::PBWAlgebra(const SuperAlgebra& g, const RootDatum& rd, const PBWOptions& opt)
    : g_(g), rd_(rd), opt_(opt) {
  init(opt);
}

void PBWAlgebra::init(const PBWOptions& opt) {
  const int d = g_.dim();
  if (d >= 65535) throw MathError(ErrorCode::InvalidParameters, "algebra too large for PBW ranks");
  memo_ = std::make_unique<Memo>();
  basis_of_.clear();
  if (rd_) {
    for (const auto& r : rd_->negative)
      for (int i : r.indices) basis_of_.push_back(i);
    cartan_begin_ = static_cast<int>(basis_of_.size());
    std::vector<int> cart = opt.cartan_order;
    if (cart.empty()) {
      cart = g_.even_cartan();
      for (int c : g_.odd_cartan()) cart.push_back(c);
    } else {
      auto a = cart, b = g_.cartan;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a != b) throw MathError(ErrorCode::InvalidParameters, "cartan_order is not a permutation of the Cartan basis");
    }
    for (int c : cart) basis_of_.push_back(c);
    pos_begin_ = static_cast<int>(basis_of_.size());
    for (const auto& r : rd_->positive)
      for (int i : r.indices) basis_of_.push_back(i);
    if (static_cast<int>(basis_of_.size()) != d)
      throw MathError(ErrorCode::InvalidParameters, "root spaces and Cartan do not span the algebra");
  } else {
    if (opt.mode == PBWMode::VermaQuotient)
      throw MathError(ErrorCode::MissingData, g_.name + ": Verma quotient needs a splitter");
    basis_of_.resize(static_cast<std::size_t>(d));
    std::iota(basis_of_.begin(), basis_of_.end(), 0);
    cartan_begin_ = 0;
    pos_begin_ = d;
  }
  rank_of_.assign(static_cast<std::size_t>(d), -1);
  for (int r = 0; r < d; ++r) rank_of_[static_cast<std::size_t>(basis_of_[static_cast<std::size_t>(r)])] = r;

  rank_bracket_.assign(static_cast<std::size_t>(d) * d, {});
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      auto& out = rank_bracket_[static_cast<std::size_t>(a * d + b)];
      for (const auto& [k, c] : g_.bracket(basis_of(a), basis_of(b))) out.emplace_back(rank_of(k), c);
    }

  for (int k = 0; k < 2; ++k) {
    sigma_[k].reset();
    try {
      sigma_[k] = sigma_map(g_, k == 0 ? SigmaMode::IgnoreSign : SigmaMode::RespectSign);
    } catch (const MathError& e) {
      sigma_error_[k] = e.what();
    }
  }

  cartan_vars_.clear();
  even_cartan_slot_.assign(static_cast<std::size_t>(d), -1);
  if (rd_) {
    for (std::size_t s = 0; s < rd_->even_cartan.size(); ++s) {
      cartan_vars_.push_back(rd_->variables[s]);
      even_cartan_slot_[static_cast<std::size_t>(rank_of(rd_->even_cartan[s]))] = static_cast<int>(s);
    }
  }
}

bool PBWAlgebra::dropped(const PBWMonomial& m) const {
  return opt_.mode == PBWMode::VermaQuotient && !m.empty() && is_positive_rank(m.back());
}

PBWElement PBWAlgebra::one() const {
  PBWElement e;
  e.add(PBWMonomial{}, 1);
  return e;
}

PBWElement PBWAlgebra::generator(int basis_index, const Rat& c) const {
  PBWElement e;
  PBWMonomial m{static_cast<std::uint16_t>(rank_of(basis_index))};
  if (!dropped(m)) e.add(m, c);
  return e;
}

PBWElement PBWAlgebra::from_vector(const SparseVec& v) const {
  PBWElement e;
  for (const auto& [i, c] : v) e.add(generator(i, c));
  return e;
}

PBWElement PBWAlgebra::word(const std::vector<int>& basis_indices) const { return apply_word(basis_indices, one()); }

PBWElement PBWAlgebra::apply_word(const std::vector<int>& basis_indices, const PBWElement& a) const {
  PBWElement cur = a;
  for (auto it = basis_indices.rbegin(); it != basis_indices.rend() && !cur.is_zero(); ++it) cur = left_mul(*it, cur);
  return cur;
}

const PBWElement& PBWAlgebra::left_mul_mono(int rank, const PBWMonomial& m) const {
  PBWMonomial key;
  key.reserve(m.size() + 1);
  key.push_back(static_cast<std::uint16_t>(rank));
  key.insert(key.end(), m.begin(), m.end());
  {
    std::shared_lock lock(memo_->mu);
    auto it = memo_->table.find(key);
    if (it != memo_->table.end()) return *it->second;
  }
  auto val = std::make_unique<PBWElement>(compute_left_mul(rank, m));
  std::unique_lock lock(memo_->mu);
  auto [it, fresh] = memo_->table.try_emplace(std::move(key), std::move(val));
  return *it->second;
}

PBWElement PBWAlgebra::compute_left_mul(int x, const PBWMonomial& m) const {
  PBWElement out;
  const int d = g_.dim();
  const int px = parity_of_rank(x);
  if (m.empty() || x < m[0] || (x == m[0] && px == 0)) {
    PBWMonomial n;
    n.reserve(m.size() + 1);
    n.push_back(static_cast<std::uint16_t>(x));
    n.insert(n.end(), m.begin(), m.end());
    if (!dropped(n)) out.add(n, 1);
    return out;
  }
  const int y = m[0];
  PBWMonomial rest(m.begin() + 1, m.end());
  const auto& br = rank_bracket_[static_cast<std::size_t>(x * d + y)];
  if (x == y) {
    // x odd: x x = 1/2 [x, x]
    for (const auto& [k, c] : br) out.add(left_mul_mono(k, rest), c / 2);
    return out;
  }
  // x y rest = (-1)^{p_x p_y} y (x rest) + [x, y] rest
  Rat sign = (px && parity_of_rank(y)) ? Rat(-1) : Rat(1);
  PBWElement xr = left_mul_mono(x, rest);
  for (const auto& [n, c] : xr.terms) out.add(left_mul_mono(y, n), sign * c);
  for (const auto& [k, c] : br) out.add(left_mul_mono(k, rest), c);
  return out;
}

PBWElement PBWAlgebra::left_mul(int basis_index, const PBWElement& a) const {
  PBWElement out;
  int r = rank_of(basis_index);
  for (const auto& [m, c] : a.terms) out.add(left_mul_mono(r, m), c);
  return out;
}

PBWElement PBWAlgebra::mul(const PBWElement& a, const PBWElement& b) const {
  PBWElement out;
  for (const auto& [m, c] : a.terms) {
    PBWElement cur = b;
    for (auto it = m.rbegin(); it != m.rend() && !cur.is_zero(); ++it) {
      PBWElement next;
      for (const auto& [n, x] : cur.terms) next.add(left_mul_mono(*it, n), x);
      cur = std::move(next);
    }
    out.add(cur, c);
  }
  return out;
}

PBWElement PBWAlgebra::supercommutator(const PBWElement& a, int pa, const PBWElement& b, int pb) const {
  PBWElement out = mul(a, b);
  out.add(mul(b, a), (pa * pb) % 2 ? Rat(1) : Rat(-1));
  return out;
}

int PBWAlgebra::parity(const PBWElement& a) const {
  int p = -1;
  for (const auto& [m, c] : a.terms) {
    int q = 0;
    for (auto r : m) q ^= parity_of_rank(r);
    if (p >= 0 && p != q) return -1;
    p = q;
  }
  return p;
}

const SignedPermutation& PBWAlgebra::sigma_of(SigmaMode mode) const {
  int k = mode == SigmaMode::IgnoreSign ? 0 : 1;
  if (!sigma_[k]) throw MathError(g_.sigma ? ErrorCode::InvalidParameters : ErrorCode::MissingData, sigma_error_[k]);
  return *sigma_[k];
}

std::pair<Rat, std::vector<int>> PBWAlgebra::sigma_word(const PBWMonomial& m, SigmaMode mode) const {
  std::vector<int> letters;
  letters.reserve(m.size());
  for (auto r : m) letters.push_back(basis_of(r));
  return sigma_letters(letters, mode);
}

std::pair<Rat, std::vector<int>> PBWAlgebra::sigma_letters(const std::vector<int>& basis_word, SigmaMode mode) const {
  const SignedPermutation& s = sigma_of(mode);
  Rat coef = 1;
  std::vector<int> w;
  int odd = 0;
  for (auto it = basis_word.rbegin(); it != basis_word.rend(); ++it) {
    int b = *it;
    coef *= s.coef[static_cast<std::size_t>(b)];
    w.push_back(s.perm[static_cast<std::size_t>(b)]);
    odd += g_.parity(b);
  }
  if (mode == SigmaMode::RespectSign && (odd * (odd - 1) / 2) % 2) coef = -coef;
  return {coef, w};
}

PBWElement PBWAlgebra::apply_sigma(const PBWElement& a, SigmaMode mode) const {
  PBWElement out;
  for (const auto& [m, c] : a.terms) {
    auto [coef, w] = sigma_word(m, mode);
    out.add(word(w), c * coef);
  }
  return out;
}

CartanPoly PBWAlgebra::hc(const PBWElement& a) const {
  if (!rd_) throw MathError(ErrorCode::MissingData, g_.name + ": Harish-Chandra projection needs a splitter");
  CartanPoly p(cartan_vars_);
  for (const auto& [m, c] : a.terms) {
    CartanPoly::Exponents e(cartan_vars_.size(), 0);
    bool keep = true;
    for (auto r : m) {
      int slot = even_cartan_slot_[r];
      if (slot < 0) {
        keep = false;
        break;
      }
      ++e[static_cast<std::size_t>(slot)];
    }
    if (keep) p.add_term(e, c);
  }
  return p;
}

CliffordElement PBWAlgebra::hc_clifford(const PBWElement& a) const {
  if (!rd_) throw MathError(ErrorCode::MissingData, g_.name + ": Harish-Chandra projection needs a splitter");
  CliffordElement out;
  for (const auto& [m, c] : a.terms) {
    CartanPoly::Exponents e(cartan_vars_.size(), 0);
    std::vector<std::uint16_t> odd;
    bool keep = true;
    for (auto r : m) {
      if (!is_cartan_rank(r)) {
        keep = false;
        break;
      }
      int slot = even_cartan_slot_[r];
      if (slot >= 0)
        ++e[static_cast<std::size_t>(slot)];
      else
        odd.push_back(r);
    }
    if (!keep) continue;
    auto it = out.try_emplace(odd, CartanPoly(cartan_vars_)).first;
    it->second.add_term(e, c);
    if (it->second.is_zero()) out.erase(it);
  }
  return out;
}

std::string PBWAlgebra::monomial_str(const PBWMonomial& m) const {
  if (m.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < m.size();) {
    std::size_t j = i;
    while (j < m.size() && m[j] == m[i]) ++j;
    std::string l = g_.labels[static_cast<std::size_t>(basis_of(m[i]))];
    if (l.find_first_of("* +") != std::string::npos) l = "(" + l + ")";
    if (!s.empty()) s += " ";
    s += l;
    if (j - i > 1) s += "^" + std::to_string(j - i);
    i = j;
  }
  return s;
}

std::string PBWAlgebra::str(const PBWElement& a) const {
  if (a.is_zero()) return "0";
  std::string s;
  for (const auto& [m, c] : a.terms) {
    Rat x = c;
    if (s.empty()) {
      if (x < 0) s += "-";
    } else {
      s += x < 0 ? " - " : " + ";
    }
    x = abs(x);
    if (m.empty())
      s += x.get_str();
    else if (x == 1)
      s += monomial_str(m);
    else
      s += x.get_str() + "*" + monomial_str(m);
  }
  return s;
}

std::size_t PBWAlgebra::memo_size() const {
  std::shared_lock lock(memo_->mu);
  return memo_->table.size();
}

void PBWAlgebra::clear_memo() const {
  std::unique_lock lock(memo_->mu);
  memo_->table.clear();
}

std::vector<PBWMonomial> weight_basis(const PBWAlgebra& U, const Weight& chi, std::size_t limit) {
  const auto& rd = U.roots();
  if (!rd) throw MathError(ErrorCode::MissingData, U.algebra().name + ": weight basis needs a splitter");
  if (chi.size() != rd->even_cartan.size()) throw MathError(ErrorCode::NotAWeight, "weight has the wrong rank");
  std::vector<PBWMonomial> out;
  if (weight_is_zero(chi)) {
    out.push_back({});
    return out;
  }
  Rat target = rd->height(chi);
  if (target <= 0) return out;

  const int n = U.num_negative();
  std::vector<Rat> depth(static_cast<std::size_t>(n));
  std::vector<const Weight*> wt(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    int b = U.basis_of(r);
    depth[static_cast<std::size_t>(r)] = -rd->height_of[static_cast<std::size_t>(b)];
    wt[static_cast<std::size_t>(r)] = &rd->weight_of[static_cast<std::size_t>(b)];
  }
  std::size_t visited = 0;
  PBWMonomial cur;
  Weight acc(chi.size(), 0);
  std::function<void(int, const Rat&)> rec = [&](int start, const Rat& remaining) {
    if (++visited > limit)
      throw MathError(ErrorCode::InfinitePartitions, "weight basis enumeration exceeded " + std::to_string(limit));
    if (remaining == 0) {
      Weight w = acc;
      for (std::size_t c = 0; c < w.size(); ++c) w[c] += chi[c];
      if (weight_is_zero(w)) out.push_back(cur);
      return;
    }
    for (int r = start; r < n; ++r) {
      const Rat& dr = depth[static_cast<std::size_t>(r)];
      if (dr > remaining) break;
      if (!cur.empty() && cur.back() == r && U.parity_of_rank(r) == 1) continue;
      cur.push_back(static_cast<std::uint16_t>(r));
      const Weight& w = *wt[static_cast<std::size_t>(r)];
      for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += w[c];
      rec(r, remaining - dr);
      for (std::size_t c = 0; c < acc.size(); ++c) acc[c] -= w[c];
      cur.pop_back();
    }
  };
  rec(0, target);
  return out;
}

}  // namespace supercas
