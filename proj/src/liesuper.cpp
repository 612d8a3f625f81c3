#include "supercas/liesuper.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <mutex>
#include <random>
#include <sstream>

#include "supercas/parallel.hpp"

namespace supercas {

// ------------------------------------------------------------------ sparse vectors

SparseVec sv_unit(int i, const Rat& c) {
  if (c == 0) return {};
  return {{i, c}};
}

void sv_axpy(SparseVec& acc, const Rat& c, const SparseVec& v) {
  if (c == 0 || v.empty()) return;
  SparseVec out;
  out.reserve(acc.size() + v.size());
  std::size_t a = 0, b = 0;
  while (a < acc.size() || b < v.size()) {
    if (b == v.size() || (a < acc.size() && acc[a].first < v[b].first)) {
      out.push_back(std::move(acc[a++]));
    } else if (a == acc.size() || v[b].first < acc[a].first) {
      out.emplace_back(v[b].first, c * v[b].second);
      ++b;
    } else {
      Rat s = acc[a].second + c * v[b].second;
      if (s != 0) out.emplace_back(acc[a].first, s);
      ++a;
      ++b;
    }
  }
  acc = std::move(out);
}

SparseVec sv_scale(const SparseVec& v, const Rat& c) {
  if (c == 0) return {};
  SparseVec out = v;
  for (auto& [i, x] : out) x *= c;
  return out;
}

Rat sv_get(const SparseVec& v, int i) {
  auto it = std::lower_bound(v.begin(), v.end(), i, [](const auto& p, int k) { return p.first < k; });
  return (it != v.end() && it->first == i) ? it->second : Rat(0);
}

SparseVec sv_from_map(const std::map<int, Rat>& m) {
  SparseVec out;
  for (const auto& [i, c] : m)
    if (c != 0) out.emplace_back(i, c);
  return out;
}

std::string weight_str(const Weight& w) {
  std::string s = "(";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ", ";
    s += w[i].get_str();
  }
  return s + ")";
}

// ------------------------------------------------------------------ SuperAlgebra

SuperAlgebra::SuperAlgebra(std::string name_, std::vector<std::string> labels_, std::vector<int> parities_)
    : name(std::move(name_)), labels(std::move(labels_)), parities(std::move(parities_)) {
  if (labels.size() != parities.size())
    throw MathError(ErrorCode::InvalidParameters, "labels and parities differ in length");
  table.assign(labels.size() * labels.size(), {});
}

SparseVec SuperAlgebra::bracket(const SparseVec& x, const SparseVec& y) const {
  std::map<int, Rat> acc;
  for (const auto& [i, a] : x)
    for (const auto& [j, b] : y)
      for (const auto& [k, c] : bracket(i, j)) acc[k] += a * b * c;
  return sv_from_map(acc);
}

int SuperAlgebra::index_of(std::string_view label) const {
  for (int i = 0; i < dim(); ++i)
    if (labels[static_cast<std::size_t>(i)] == label) return i;
  return -1;
}

std::vector<int> SuperAlgebra::even_cartan() const {
  std::vector<int> out;
  for (int c : cartan)
    if (parity(c) == 0) out.push_back(c);
  return out;
}

std::vector<int> SuperAlgebra::odd_cartan() const {
  std::vector<int> out;
  for (int c : cartan)
    if (parity(c) == 1) out.push_back(c);
  return out;
}

bool SuperAlgebra::is_cartan(int i) const { return std::find(cartan.begin(), cartan.end(), i) != cartan.end(); }

std::string SuperAlgebra::cartan_name(int i) const {
  for (std::size_t t = 0; t < cartan.size(); ++t)
    if (cartan[t] == i) return t < cartan_names.size() ? cartan_names[t] : labels[static_cast<std::size_t>(i)];
  return "";
}

std::vector<std::string> SuperAlgebra::even_cartan_names() const {
  std::vector<std::string> out;
  for (int c : even_cartan()) out.push_back(cartan_name(c));
  return out;
}

Rat SuperAlgebra::form_value(const SparseVec& x, const SparseVec& y) const {
  if (!form) throw MathError(ErrorCode::MissingData, name + " has no invariant form");
  Rat s = 0;
  for (const auto& [i, a] : x)
    for (const auto& [j, b] : y) {
      const Rat& g = form->gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (g != 0) s += a * b * g;
    }
  return s;
}

// ------------------------------------------------------------------ verification

std::string VerifyReport::summary() const {
  std::ostringstream os;
  os << (ok() ? "pass" : "FAIL") << " (" << triples_checked << " triples, "
     << (exhaustive ? "exhaustive" : "sampled") << ", " << total_violations << " violations)";
  return os.str();
}

namespace {

struct Collector {
  std::mutex mu;
  VerifyReport* rep;
  std::size_t max_reported;
  void add(Violation v) {
    std::lock_guard<std::mutex> lock(mu);
    ++rep->total_violations;
    if (rep->violations.size() < max_reported) rep->violations.push_back(std::move(v));
  }
};

SparseVec ad_apply(const SuperAlgebra& g, int i, const SparseVec& v) {
  SparseVec out;
  for (const auto& [l, c] : v) sv_axpy(out, c, g.bracket(i, l));
  return out;
}

SparseVec ad_apply_right(const SuperAlgebra& g, const SparseVec& v, int k) {
  SparseVec out;
  for (const auto& [l, c] : v) sv_axpy(out, c, g.bracket(l, k));
  return out;
}

std::string sv_text(const SuperAlgebra& g, const SparseVec& v) {
  if (v.empty()) return "0";
  std::string s;
  for (const auto& [i, c] : v) {
    if (!s.empty()) s += " + ";
    s += c.get_str() + "*" + g.labels[static_cast<std::size_t>(i)];
  }
  return s;
}

}  // namespace

VerifyReport verify_algebra(const SuperAlgebra& g, const VerifyOptions& opt) {
  VerifyReport rep;
  Collector col{{}, &rep, opt.max_reported};
  const int d = g.dim();

  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const auto& v = g.bracket(i, j);
      for (const auto& [k, c] : v)
        if ((g.parity(i) + g.parity(j)) % 2 != g.parity(k))
          col.add({"parity", i, j, k, "bracket lands in the wrong parity"});
      if (j < i) continue;
      SparseVec sum = g.bracket(i, j);
      Rat s = (g.parity(i) * g.parity(j)) % 2 ? Rat(1) : Rat(-1);
      // [e_i,e_j] + (-1)^{p_i p_j} [e_j,e_i] must vanish
      sv_axpy(sum, -s, g.bracket(j, i));
      if (!sum.empty()) col.add({"anticommutativity", i, j, -1, sv_text(g, sum)});
    }

  auto jacobi_triple = [&](int i, int j, int k) {
    // [e_i,[e_j,e_k]] - [[e_i,e_j],e_k] - (-1)^{p_i p_j} [e_j,[e_i,e_k]]
    SparseVec lhs = ad_apply(g, i, g.bracket(j, k));
    sv_axpy(lhs, -1, ad_apply_right(g, g.bracket(i, j), k));
    Rat s = (g.parity(i) * g.parity(j)) % 2 ? Rat(1) : Rat(-1);
    sv_axpy(lhs, s, ad_apply(g, j, g.bracket(i, k)));
    if (!lhs.empty()) col.add({"jacobi", i, j, k, sv_text(g, lhs)});
    if (g.form) {
      Rat a = g.form_value(g.bracket(i, j), sv_unit(k));
      Rat b = g.form_value(sv_unit(i), g.bracket(j, k));
      if (a != b) col.add({"form-invariance", i, j, k, a.get_str() + " vs " + b.get_str()});
    }
  };

  if (d <= opt.exhaustive_limit) {
    rep.exhaustive = true;
    rep.triples_checked = static_cast<std::size_t>(d) * d * d;
    parallel_for(static_cast<std::size_t>(d), opt.jobs, [&](std::size_t i) {
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) jacobi_triple(static_cast<int>(i), j, k);
    });
  } else {
    rep.exhaustive = false;
    rep.triples_checked = opt.sampled_triples;
    std::size_t chunks = 64;
    parallel_for(chunks, opt.jobs, [&](std::size_t c) {
      std::mt19937_64 rng(opt.seed * 1000003ull + c);
      std::uniform_int_distribution<int> pick(0, d - 1);
      for (std::size_t t = c; t < opt.sampled_triples; t += chunks) jacobi_triple(pick(rng), pick(rng), pick(rng));
    });
  }

  if (g.form) {
    const auto& a = g.form->gram;
    if (a.size() != static_cast<std::size_t>(d))
      col.add({"form-shape", -1, -1, -1, "Gram matrix has wrong size"});
    else
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          const Rat& x = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
          if (x != 0 && (g.parity(i) + g.parity(j)) % 2 != g.form->parity)
            col.add({"form-parity", i, j, -1, "nonzero pairing of the wrong parity"});
          if (j < i) continue;
          Rat s = (g.parity(i) * g.parity(j)) % 2 ? Rat(-1) : Rat(1);
          if (x != s * a[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)])
            col.add({"form-symmetry", i, j, -1, "a_ij != (-1)^{p_i p_j} a_ji"});
        }
  }

  if (g.grading) {
    const auto& gr = *g.grading;
    auto cls = [&](int i) { return gr.classes[static_cast<std::size_t>(i)]; };
    if (gr.classes.size() != static_cast<std::size_t>(d) || gr.r < 1) {
      col.add({"grading-shape", -1, -1, -1, "grading has wrong size"});
    } else {
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          for (const auto& [k, c] : g.bracket(i, j))
            if (((cls(i) + cls(j) - cls(k)) % gr.r + gr.r) % gr.r != 0)
              col.add({"grading-bracket", i, j, k, "bracket does not respect the grading"});
          if (g.form && g.form->gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0 &&
              (cls(i) + cls(j)) % gr.r != 0)
            col.add({"grading-form", i, j, -1, "form pairs classes that do not sum to zero"});
        }
    }
  }
  return rep;
}

RatMatrix gram_inverse(const SuperAlgebra& g) {
  if (!g.form) throw MathError(ErrorCode::MissingData, g.name + " has no invariant form");
  auto inv = inverse(g.form->gram);
  if (!inv) throw MathError(ErrorCode::DegenerateForm, "Gram matrix of " + g.name + " is singular");
  return *inv;
}

RatMatrix ad_matrix(const SuperAlgebra& g, const SparseVec& x) {
  const auto d = static_cast<std::size_t>(g.dim());
  RatMatrix m(d, std::vector<Rat>(d, 0));
  for (std::size_t j = 0; j < d; ++j)
    for (const auto& [k, c] : g.bracket(x, sv_unit(static_cast<int>(j)))) m[static_cast<std::size_t>(k)][j] = c;
  return m;
}

// ------------------------------------------------------------------ roots

const Root* RootDatum::find(const Weight& w) const {
  for (const auto& r : positive)
    if (r.weight == w) return &r;
  for (const auto& r : negative)
    if (r.weight == w) return &r;
  return nullptr;
}

int RootDatum::sign_of(int i) const {
  const Rat& h = height_of[static_cast<std::size_t>(i)];
  return h > 0 ? 1 : (h < 0 ? -1 : 0);
}

Rat RootDatum::height(const Weight& w) const {
  Rat h = 0;
  for (std::size_t c = 0; c < w.size() && c < splitter_values.size(); ++c) h += splitter_values[c] * w[c];
  return h;
}

Weight weight_combination(const std::vector<std::pair<Rat, Weight>>& terms, std::size_t rank) {
  Weight w(rank, 0);
  for (const auto& [c, v] : terms)
    for (std::size_t i = 0; i < rank && i < v.size(); ++i) w[i] += c * v[i];
  return w;
}

bool weight_is_zero(const Weight& w) {
  return std::all_of(w.begin(), w.end(), [](const Rat& x) { return x == 0; });
}

RootDatum root_decomposition(const SuperAlgebra& g, const RootOptions& opt) {
  RootDatum rd;
  rd.even_cartan = g.even_cartan();
  rd.variables = g.even_cartan_names();
  const int d = g.dim();
  const std::size_t rank = rd.even_cartan.size();
  rd.weight_of.assign(static_cast<std::size_t>(d), Weight(rank, 0));
  rd.height_of.assign(static_cast<std::size_t>(d), 0);

  for (int i = 0; i < d; ++i)
    for (std::size_t c = 0; c < rank; ++c)
      rd.weight_of[static_cast<std::size_t>(i)][c] = sv_get(g.bracket(rd.even_cartan[c], i), i);

  // ad_h must preserve generalized weight spaces, acting nilpotently after
  // subtracting the weight.
  for (std::size_t c = 0; c < rank; ++c) {
    int h = rd.even_cartan[c];
    for (int i = 0; i < d; ++i)
      for (const auto& [k, v] : g.bracket(h, i)) {
        if (k == i) continue;
        if (!opt.allow_generalized)
          throw MathError(ErrorCode::NonDiagonalAction,
                          "ad " + g.labels[static_cast<std::size_t>(h)] + " is not diagonal at " +
                              g.labels[static_cast<std::size_t>(i)]);
        if (rd.weight_of[static_cast<std::size_t>(k)] != rd.weight_of[static_cast<std::size_t>(i)])
          throw MathError(ErrorCode::NonDiagonalAction,
                          "ad " + g.labels[static_cast<std::size_t>(h)] + " mixes weight spaces at " +
                              g.labels[static_cast<std::size_t>(i)]);
        rd.generalized = true;
      }
  }
  if (rd.generalized) {
    // nilpotency of ad_h - alpha(h) on each block
    std::map<Weight, std::vector<int>> blocks;
    for (int i = 0; i < d; ++i) blocks[rd.weight_of[static_cast<std::size_t>(i)]].push_back(i);
    for (std::size_t c = 0; c < rank; ++c) {
      int h = rd.even_cartan[c];
      for (const auto& [w, idx] : blocks) {
        for (int start : idx) {
          SparseVec v = sv_unit(start);
          for (std::size_t step = 0; step < idx.size() && !v.empty(); ++step) {
            SparseVec next = ad_apply(g, h, v);
            sv_axpy(next, -w[c], v);
            v = std::move(next);
          }
          if (!v.empty())
            throw MathError(ErrorCode::NonDiagonalAction, "ad " + g.labels[static_cast<std::size_t>(h)] +
                                                              " is not triangularizable on the basis");
        }
      }
    }
  }

  SparseVec H;
  if (g.splitter) H = *g.splitter;
  std::vector<Rat> hval(rank, 0);
  for (const auto& [i, c] : H) {
    auto it = std::find(rd.even_cartan.begin(), rd.even_cartan.end(), i);
    if (it == rd.even_cartan.end())
      throw MathError(ErrorCode::InvalidParameters, "splitter is not in the even Cartan part");
    hval[static_cast<std::size_t>(it - rd.even_cartan.begin())] = c;
  }

  rd.splitter_values = hval;
  std::map<Weight, Root> roots;
  for (int i = 0; i < d; ++i) {
    const Weight& w = rd.weight_of[static_cast<std::size_t>(i)];
    Rat ht = 0;
    for (std::size_t c = 0; c < rank; ++c) ht += hval[c] * w[c];
    rd.height_of[static_cast<std::size_t>(i)] = ht;
    if (g.is_cartan(i)) {
      if (!weight_is_zero(w))
        throw MathError(ErrorCode::NonDiagonalAction, "Cartan element " + g.labels[static_cast<std::size_t>(i)] +
                                                          " has a nonzero weight");
      continue;
    }
    if (weight_is_zero(w))
      throw MathError(ErrorCode::ZeroOnRoot,
                      "weight-zero vector " + g.labels[static_cast<std::size_t>(i)] + " outside the Cartan subalgebra");
    if (ht == 0)
      throw MathError(ErrorCode::ZeroOnRoot, "root " + weight_str(w) + " vanishes on the splitting element");
    Root& r = roots[w];
    r.weight = w;
    r.height = ht;
    r.indices.push_back(i);
    (g.parity(i) ? r.odd_dim : r.even_dim)++;
  }
  for (auto& [w, r] : roots) (r.height > 0 ? rd.positive : rd.negative).push_back(r);
  std::sort(rd.positive.begin(), rd.positive.end(), [](const Root& a, const Root& b) {
    return a.height != b.height ? a.height < b.height : a.weight < b.weight;
  });
  std::sort(rd.negative.begin(), rd.negative.end(), [](const Root& a, const Root& b) {
    return a.height != b.height ? a.height > b.height : a.weight < b.weight;
  });
  for (const auto& r : rd.positive) rd.positive_indices.insert(rd.positive_indices.end(), r.indices.begin(), r.indices.end());
  for (const auto& r : rd.negative) rd.negative_indices.insert(rd.negative_indices.end(), r.indices.begin(), r.indices.end());
  return rd;
}

Weight parse_weight(const SuperAlgebra& g, std::string_view text) {
  std::size_t rank = g.even_cartan().size();
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw MathError(ErrorCode::ParseError, "empty weight");
  Weight w(rank, 0);
  if (s == "0") return w;
  std::size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    while (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      if (s[i] == '-') sign = -sign;
      ++i;
    }
    std::size_t j = i;
    while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
    std::string term = s.substr(i, j - i);
    i = j;
    if (term.empty()) throw MathError(ErrorCode::ParseError, "dangling sign in weight " + s);
    std::size_t p = 0;
    while (p < term.size() && (std::isdigit(static_cast<unsigned char>(term[p])) || term[p] == '/')) ++p;
    Rat coef = p ? parse_rat(term.substr(0, p)) : Rat(1);
    std::string name = term.substr(p);
    if (!name.empty() && name[0] == '*') name.erase(0, 1);
    if (name.empty()) throw MathError(ErrorCode::ParseError, "weight term without a name: " + term);
    auto it = g.named_weights.find(name);
    if (it == g.named_weights.end())
      throw MathError(ErrorCode::ParseError, "unknown weight '" + name + "' for " + g.name);
    for (std::size_t c = 0; c < rank; ++c) w[c] += sign * coef * it->second[c];
  }
  return w;
}

// ------------------------------------------------------------------ sigma

namespace {

// Solves the GF(2) system x_k + x_a + x_b = p_a p_b over all nonzero c_ab^k,
// preferring solutions that fix the sign on the even Cartan part.
std::optional<std::vector<int>> respect_twist(const SuperAlgebra& g, bool fix_cartan) {
  const int d = g.dim();
  const std::size_t words = static_cast<std::size_t>(d + 1 + 63) / 64;
  using Row = std::vector<std::uint64_t>;
  std::vector<Row> rows;
  auto add_row = [&](std::vector<int> vars, int rhs) {
    Row r(words, 0);
    for (int v : vars) r[static_cast<std::size_t>(v) / 64] ^= std::uint64_t(1) << (v % 64);
    if (rhs) r[static_cast<std::size_t>(d) / 64] ^= std::uint64_t(1) << (d % 64);
    rows.push_back(std::move(r));
  };
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b)
      for (const auto& [k, c] : g.bracket(a, b)) add_row({k, a, b}, g.parity(a) * g.parity(b) % 2);
  if (fix_cartan)
    for (int h : g.even_cartan()) add_row({h}, 0);

  auto bit = [&](const Row& r, int v) { return (r[static_cast<std::size_t>(v) / 64] >> (v % 64)) & 1u; };
  std::vector<int> pivot_col;
  std::size_t rank = 0;
  for (int col = 0; col < d && rank < rows.size(); ++col) {
    std::size_t p = rank;
    while (p < rows.size() && !bit(rows[p], col)) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (r != rank && bit(rows[r], col))
        for (std::size_t w = 0; w < words; ++w) rows[r][w] ^= rows[rank][w];
    pivot_col.push_back(col);
    ++rank;
  }
  for (std::size_t r = rank; r < rows.size(); ++r)
    if (bit(rows[r], d)) return std::nullopt;
  std::vector<int> x(static_cast<std::size_t>(d), 0);
  for (std::size_t r = 0; r < rank; ++r) x[static_cast<std::size_t>(pivot_col[r])] = static_cast<int>(bit(rows[r], d));
  return x;
}

}  // namespace

SignedPermutation sigma_map(const SuperAlgebra& g, SigmaMode mode) {
  if (!g.sigma) throw MathError(ErrorCode::MissingData, g.name + " has no anti-automorphism attached");
  if (mode == SigmaMode::IgnoreSign) return *g.sigma;
  auto x = respect_twist(g, true);
  if (!x) x = respect_twist(g, false);
  if (!x) throw MathError(ErrorCode::InvalidParameters, "no sign twist makes sigma respect the sign rule");
  SignedPermutation s = *g.sigma;
  for (std::size_t i = 0; i < s.coef.size(); ++i)
    if ((*x)[i]) s.coef[i] = -s.coef[i];
  return s;
}

std::vector<Violation> check_sigma(const SuperAlgebra& g, SigmaMode mode) {
  SignedPermutation s = sigma_map(g, mode);
  auto apply = [&](const SparseVec& v) {
    std::map<int, Rat> m;
    for (const auto& [i, c] : v) m[s.perm[static_cast<std::size_t>(i)]] += c * s.coef[static_cast<std::size_t>(i)];
    return sv_from_map(m);
  };
  std::vector<Violation> out;
  const int d = g.dim();
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      SparseVec lhs = apply(g.bracket(a, b));
      SparseVec rhs = g.bracket(apply(sv_unit(b)), apply(sv_unit(a)));
      if (mode == SigmaMode::RespectSign && g.parity(a) * g.parity(b) % 2) rhs = sv_scale(rhs, -1);
      if (lhs != rhs) out.push_back({"sigma", a, b, -1, "sigma([a,b]) differs from [sigma b, sigma a]"});
    }
  return out;
}

// ------------------------------------------------------------------ coordinate solver

CoordinateSolver::CoordinateSolver(const std::vector<Ambient>& basis, const std::vector<Ambient>& ideal)
    : nbasis_(basis.size()) {
  std::vector<Ambient> all = basis;
  all.insert(all.end(), ideal.begin(), ideal.end());
  for (std::size_t col = 0; col < all.size(); ++col) {
    Ambient v = all[col];
    std::map<int, Rat> t{{static_cast<int>(col), Rat(1)}};
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      auto it = v.find(rows_[r].first);
      if (it == v.end()) continue;
      Rat f = it->second;
      for (const auto& [k, c] : rows_[r].second) {
        Rat& x = v[k];
        x -= f * c;
        if (x == 0) v.erase(k);
      }
      for (const auto& [k, c] : transforms_[r]) {
        Rat& x = t[k];
        x -= f * c;
        if (x == 0) t.erase(k);
      }
    }
    if (v.empty())
      throw MathError(ErrorCode::InvalidParameters, "realization basis is linearly dependent");
    int piv = v.begin()->first;
    Rat inv = Rat(1) / v.begin()->second;
    for (auto& [k, c] : v) c *= inv;
    for (auto& [k, c] : t) c *= inv;
    // keep rows reduced at every pivot
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      auto it = rows_[r].second.find(piv);
      if (it == rows_[r].second.end()) continue;
      Rat f = it->second;
      for (const auto& [k, c] : v) {
        Rat& x = rows_[r].second[k];
        x -= f * c;
        if (x == 0) rows_[r].second.erase(k);
      }
      for (const auto& [k, c] : t) {
        Rat& x = transforms_[r][k];
        x -= f * c;
        if (x == 0) transforms_[r].erase(k);
      }
    }
    rows_.emplace_back(piv, std::move(v));
    transforms_.push_back(std::move(t));
  }
}

std::optional<SparseVec> CoordinateSolver::solve(const Ambient& v) const {
  std::map<int, Rat> coords;
  Ambient rest = v;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    auto it = v.find(rows_[r].first);
    if (it == v.end()) continue;
    const Rat& f = it->second;
    for (const auto& [k, c] : rows_[r].second) {
      Rat& x = rest[k];
      x -= f * c;
      if (x == 0) rest.erase(k);
    }
    for (const auto& [k, c] : transforms_[r]) coords[k] += f * c;
  }
  if (!rest.empty()) return std::nullopt;
  SparseVec out;
  for (const auto& [k, c] : coords)
    if (c != 0 && static_cast<std::size_t>(k) < nbasis_) out.emplace_back(k, c);
  return out;
}

}  // namespace supercas
