#include "supercas/grassmann.hpp"

#include <bit>
#include <cctype>
#include <sstream>

namespace supercas {

namespace {

void require_same(const GrassmannElement& a, const GrassmannElement& b) {
  if (a.num_vars() != b.num_vars() || a.presentation() != b.presentation())
    throw MathError(ErrorCode::PresentationMismatch,
                    "operands live in different Grassmann algebras");
}

GrassMask full_mask(int m) { return m >= 32 ? ~GrassMask(0) : (GrassMask(1) << m) - 1; }

// Monomials of the derivative d_k applied to mask: (sign, new mask) or sign 0.
std::pair<int, GrassMask> strike(GrassMask mask, int k) {
  GrassMask bit = GrassMask(1) << k;
  if (!(mask & bit)) return {0, 0};
  int before = std::popcount(mask & (bit - 1));
  return {before % 2 ? -1 : 1, mask ^ bit};
}

GrassmannElement partial0(const GrassmannElement& f, int k) {
  GrassmannElement out(f.num_vars(), f.presentation());
  for (const auto& [mask, c] : f.terms()) {
    auto [s, rest] = strike(mask, k);
    if (s != 0) out.add_term(rest, s > 0 ? c : Rat(-c));
  }
  return out;
}

// Pairs (a, b) of flat generators entering the bracket: sum d_a f d_b g.
std::vector<std::pair<int, int>> bracket_pairs(int m, Presentation pres) {
  std::vector<std::pair<int, int>> pairs;
  if (pres == Presentation::Theta) {
    for (int k = 0; k < m; ++k) pairs.emplace_back(k, k);
  } else {
    int r = m / 2;
    for (int j = 0; j < r; ++j) {
      pairs.emplace_back(2 * j, 2 * j + 1);
      pairs.emplace_back(2 * j + 1, 2 * j);
    }
    if (m % 2) pairs.emplace_back(m - 1, m - 1);
  }
  return pairs;
}

}  // namespace

const char* presentation_name(Presentation p) {
  return p == Presentation::Theta ? "theta" : "xi-eta";
}

GrassmannElement::GrassmannElement(int num_vars, Presentation pres) : m_(num_vars), pres_(pres) {
  if (num_vars < 0 || num_vars > 30)
    throw MathError(ErrorCode::InvalidParameters, "Grassmann algebra size out of range");
}

GrassmannElement GrassmannElement::constant(int num_vars, Presentation pres, const Rat& c) {
  return monomial(num_vars, pres, 0, c);
}

GrassmannElement GrassmannElement::monomial(int num_vars, Presentation pres, GrassMask mask, const Rat& c) {
  GrassmannElement e(num_vars, pres);
  if (mask & ~full_mask(num_vars)) throw MathError(ErrorCode::IndexOutOfRange, "monomial outside G(m)");
  e.add_term(mask, c);
  return e;
}

GrassmannElement GrassmannElement::generator(int num_vars, Presentation pres, int k) {
  if (k < 0 || k >= num_vars) throw MathError(ErrorCode::IndexOutOfRange, "generator index");
  return monomial(num_vars, pres, GrassMask(1) << k);
}

GrassmannElement GrassmannElement::theta(int num_vars, int j) {
  return generator(num_vars, Presentation::Theta, j - 1);
}

GrassmannElement GrassmannElement::xi(int num_vars, int j) {
  if (j < 1 || j > num_vars / 2) throw MathError(ErrorCode::IndexOutOfRange, "xi index");
  return generator(num_vars, Presentation::XiEta, 2 * (j - 1));
}

GrassmannElement GrassmannElement::eta(int num_vars, int j) {
  if (j < 1 || j > num_vars / 2) throw MathError(ErrorCode::IndexOutOfRange, "eta index");
  return generator(num_vars, Presentation::XiEta, 2 * (j - 1) + 1);
}

GrassmannElement GrassmannElement::odd_theta(int num_vars) {
  if (num_vars % 2 == 0) throw MathError(ErrorCode::IndexOutOfRange, "no theta for even m");
  return generator(num_vars, Presentation::XiEta, num_vars - 1);
}

Rat GrassmannElement::coefficient(GrassMask mask) const {
  auto it = terms_.find(mask);
  return it == terms_.end() ? Rat(0) : it->second;
}

void GrassmannElement::add_term(GrassMask mask, const Rat& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(mask, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

GrassmannElement GrassmannElement::parity_part(int parity) const {
  GrassmannElement out(m_, pres_);
  for (const auto& [mask, c] : terms_)
    if (std::popcount(mask) % 2 == parity) out.terms_.emplace(mask, c);
  return out;
}

int GrassmannElement::parity() const {
  int p = -1;
  for (const auto& [mask, c] : terms_) {
    int q = std::popcount(mask) % 2;
    if (p == -1) p = q;
    else if (p != q) return -1;
  }
  return p;
}

GrassmannElement& GrassmannElement::operator+=(const GrassmannElement& o) {
  require_same(*this, o);
  for (const auto& [mask, c] : o.terms_) add_term(mask, c);
  return *this;
}

GrassmannElement& GrassmannElement::operator-=(const GrassmannElement& o) {
  require_same(*this, o);
  for (const auto& [mask, c] : o.terms_) add_term(mask, -c);
  return *this;
}

GrassmannElement& GrassmannElement::operator*=(const Rat& c) {
  if (c == 0) terms_.clear();
  for (auto& [mask, v] : terms_) v *= c;
  return *this;
}

int grassmann_sign(GrassMask a, GrassMask b) {
  if (a & b) return 0;
  int inversions = 0;
  while (b) {
    int j = std::countr_zero(b);
    b &= b - 1;
    // elements of a standing to the right of position j after sorting
    inversions += std::popcount(a >> j >> 1);
  }
  return inversions % 2 ? -1 : 1;
}

GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b) {
  require_same(a, b);
  GrassmannElement out(a.m_, a.pres_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) {
      int s = grassmann_sign(ma, mb);
      if (s == 0) continue;
      Rat c = ca * cb;
      if (s < 0) c = -c;
      out.add_term(ma | mb, c);
    }
  return out;
}

GrassmannElement gr_mul(const GrassmannElement& f, const GrassmannElement& g) { return f * g; }

std::string generator_name(int num_vars, Presentation pres, int k) {
  if (pres == Presentation::Theta) return "th" + std::to_string(k + 1);
  if (num_vars % 2 == 1 && k == num_vars - 1) return "th";
  return (k % 2 == 0 ? "x" : "e") + std::to_string(k / 2 + 1);
}

std::string monomial_name(int num_vars, Presentation pres, GrassMask mask) {
  if (mask == 0) return "1";
  std::string s;
  for (int k = 0; k < num_vars; ++k)
    if (mask & (GrassMask(1) << k)) {
      if (!s.empty()) s += "*";
      s += generator_name(num_vars, pres, k);
    }
  return s;
}

std::string GrassmannElement::str() const {
  if (terms_.empty()) return "0";
  std::vector<std::pair<GrassMask, Rat>> sorted(terms_.begin(), terms_.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) {
    int dx = std::popcount(x.first), dy = std::popcount(y.first);
    return dx != dy ? dx < dy : x.first < y.first;
  });
  std::ostringstream os;
  bool first = true;
  for (const auto& [mask, c] : sorted) {
    Rat a = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (mask == 0) os << a.get_str();
    else if (a == 1) os << monomial_name(m_, pres_, mask);
    else os << a.get_str() << "*" << monomial_name(m_, pres_, mask);
  }
  return os.str();
}

GrassmannElement GrassmannElement::parse(std::string_view text, int num_vars, Presentation pres) {
  std::map<std::string, int> names;
  for (int k = 0; k < num_vars; ++k) names[generator_name(num_vars, pres, k)] = k;
  GrassmannElement out(num_vars, pres);
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw MathError(ErrorCode::ParseError, "empty Grassmann expression");
  if (s == "0") return out;

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
    if (term.empty()) throw MathError(ErrorCode::ParseError, "dangling sign in " + s);
    i = j;

    GrassmannElement acc = constant(num_vars, pres, sign);
    std::size_t p = 0;
    while (p <= term.size()) {
      std::size_t q = term.find('*', p);
      if (q == std::string::npos) q = term.size();
      std::string factor = term.substr(p, q - p);
      p = q + 1;
      if (factor.empty()) throw MathError(ErrorCode::ParseError, "empty factor in " + term);
      if (std::isdigit(static_cast<unsigned char>(factor[0]))) {
        acc *= parse_rat(factor);
        continue;
      }
      int power = 1;
      auto caret = factor.find('^');
      if (caret != std::string::npos) {
        power = std::stoi(factor.substr(caret + 1));
        factor = factor.substr(0, caret);
      }
      auto it = names.find(factor);
      if (it == names.end())
        throw MathError(ErrorCode::ParseError, "unknown generator '" + factor + "' for " +
                                                   presentation_name(pres) + " m=" + std::to_string(num_vars));
      if (power < 0) throw MathError(ErrorCode::ParseError, "negative exponent");
      for (int t = 0; t < power; ++t) acc = acc * generator(num_vars, pres, it->second);
    }
    out += acc;
  }
  return out;
}

GrassmannElement partial(const GrassmannElement& f, int j) {
  if (j < 1 || j > f.num_vars()) throw MathError(ErrorCode::IndexOutOfRange, "derivative index");
  return partial0(f, j - 1);
}

Rat berezin(const GrassmannElement& f) { return f.coefficient(full_mask(f.num_vars())); }

GrassmannElement poisson(const GrassmannElement& f, const GrassmannElement& g) {
  require_same(f, g);
  const int m = f.num_vars();
  GrassmannElement out(m, f.presentation());
  auto pairs = bracket_pairs(m, f.presentation());
  for (int par = 0; par < 2; ++par) {
    GrassmannElement fp = f.parity_part(par);
    if (fp.is_zero()) continue;
    GrassmannElement sum(m, f.presentation());
    for (auto [a, b] : pairs) {
      GrassmannElement da = partial0(fp, a);
      if (da.is_zero()) continue;
      sum += da * partial0(g, b);
    }
    if (par == 1) sum *= Rat(-1);
    out += sum;
  }
  return out;
}

GrassmannElement HamiltonianField::apply(const GrassmannElement& g) const {
  GrassmannElement out(g.num_vars(), g.presentation());
  for (const auto& [coef, k] : terms) out += coef * partial0(g, k);
  return out;
}

HamiltonianField hamiltonian(const GrassmannElement& f) {
  if (f.presentation() != Presentation::XiEta)
    throw MathError(ErrorCode::PresentationMismatch, "hamiltonian fields use the xi-eta presentation");
  const int m = f.num_vars();
  HamiltonianField field;
  auto pairs = bracket_pairs(m, f.presentation());
  for (auto [a, b] : pairs) {
    GrassmannElement coef(m, f.presentation());
    for (int par = 0; par < 2; ++par) {
      GrassmannElement da = partial0(f.parity_part(par), a);
      coef += par ? -da : da;
    }
    if (!coef.is_zero()) field.terms.emplace_back(coef, b);
  }
  return field;
}

GrassmannElement hamiltonian_field(const GrassmannElement& f, const GrassmannElement& g) {
  require_same(f, g);
  return hamiltonian(f).apply(g);
}

}  // namespace supercas
