#include <random>

#include "doctest.h"
#include "supercas/scalars.hpp"

using namespace supercas;

namespace {

CartanPoly var(const std::string& n) { return CartanPoly::variable(n); }
CartanPoly cst(const Rat& c) { return CartanPoly::constant(c); }

CartanPoly random_poly(std::mt19937& rng, const std::vector<std::string>& vars, int terms, int maxdeg) {
  std::uniform_int_distribution<int> coef(-5, 5), den(1, 3), deg(0, maxdeg);
  CartanPoly p(vars);
  for (int t = 0; t < terms; ++t) {
    CartanPoly::Exponents e(vars.size());
    for (auto& x : e) x = static_cast<std::uint32_t>(deg(rng));
    p.add_term(e, rat(coef(rng), den(rng)));
  }
  return p;
}

LinearForm random_linear(std::mt19937& rng, const std::vector<std::string>& vars) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::map<std::string, Rat> c;
  for (const auto& v : vars) c[v] = coef(rng);
  if (std::all_of(c.begin(), c.end(), [](auto& kv) { return kv.second == 0; })) c[vars[0]] = 1;
  return LinearForm(c, rat(coef(rng), 2));
}

}  // namespace

TEST_CASE("rational parsing and canonical form") {
  CHECK(parse_rat("6/4") == rat(3, 2));
  CHECK(parse_rat(" -2/4 ").get_str() == "-1/2");
  CHECK(parse_rat("0/7").get_den() == 1);
  CHECK_THROWS_AS(parse_rat("1/0"), MathError);
  CHECK_THROWS_AS(parse_rat("x"), MathError);
}

TEST_CASE("poly arithmetic spot values") {
  auto h = var("h");
  CHECK(h + h == 2 * h);
  CHECK((h + cst(1)) * (h - cst(1)) == h * h - cst(1));
  CHECK((cst(0) * (h * h + cst(3))).is_zero());
  CHECK((h * h - cst(rat(1, 2)) * h).str() == "h^2 - 1/2*h");
}

TEST_CASE("alignment across variable lists") {
  auto a = var("h1") + var("h0");
  auto b = var("h0") - var("h1");
  CHECK((a + b) == 2 * var("h0"));
  CHECK((a * b) == var("h0").pow(2) - var("h1").pow(2));
}

TEST_CASE("trial division") {
  auto h = var("h");
  auto r = trial_divide(h * h - h, LinearForm::variable("h"));
  CHECK(r.exact);
  CHECK(r.quotient == h - cst(1));

  auto s = trial_divide(h * h + cst(1), LinearForm::variable("h"));
  CHECK_FALSE(s.exact);
  CHECK(s.quotient == h * h + cst(1));

  auto h1 = var("h1");
  auto f = LinearForm::variable("h1", rat(-1, 2));
  auto p = (h1 - cst(rat(1, 2))) * (h1 - cst(1));
  auto t = trial_divide(p, f);
  CHECK(t.exact);
  CHECK(t.quotient * f.to_poly() == p);
  CHECK(t.quotient == h1 - cst(1));
}

TEST_CASE("factor over candidates") {
  auto h = var("h");
  auto p = cst(6) * h * (h - cst(1));
  auto rep = factor_over_candidates(p, {LinearForm::variable("h"), LinearForm::variable("h", -1)});
  CHECK(rep.scalar == 6);
  CHECK(rep.multiplicity(LinearForm::variable("h")) == 1);
  CHECK(rep.multiplicity(LinearForm::variable("h", -1)) == 1);
  CHECK(rep.cofactor == cst(1));

  auto rep2 = factor_over_candidates(h * h + cst(1), {LinearForm::variable("h")});
  CHECK(rep2.scalar == 1);
  CHECK(rep2.factors.empty());
  CHECK(rep2.cofactor == h * h + cst(1));

  auto h0 = LinearForm::variable("h0");
  auto h1 = LinearForm::variable("h1", rat(-1, 2));
  auto q = h0.to_poly() * h1.to_poly().pow(2);
  auto rep3 = factor_over_candidates(q, {h0, h1});
  CHECK(rep3.multiplicity(h0) == 1);
  CHECK(rep3.multiplicity(h1) == 2);
  CHECK(rep3.cofactor == cst(1));
  CHECK(rep3.reconstruct() == q);
}

TEST_CASE("zero polynomial factors trivially") {
  auto rep = factor_over_candidates(CartanPoly(), {LinearForm::variable("h")});
  CHECK(rep.scalar == 0);
  CHECK(rep.reconstruct().is_zero());
}

TEST_CASE("ring axioms on random triples") {
  std::mt19937 rng(7);
  std::vector<std::string> vars{"a", "b", "c"};
  for (int it = 0; it < 40; ++it) {
    auto x = random_poly(rng, vars, 4, 2), y = random_poly(rng, vars, 4, 2), z = random_poly(rng, vars, 3, 2);
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * (y + z) == x * y + x * z);
    CHECK(x * y == y * x);
    CHECK((x + y) + z == x + (y + z));
  }
}

TEST_CASE("trial_divide(p*f, f) recovers p") {
  std::mt19937 rng(11);
  std::vector<std::string> vars{"h0", "h1"};
  for (int it = 0; it < 60; ++it) {
    auto p = random_poly(rng, vars, 5, 3);
    auto f = random_linear(rng, vars);
    auto r = trial_divide(p * f.to_poly(), f);
    CHECK(r.exact);
    CHECK(r.quotient == p);
  }
}

TEST_CASE("reconstruction on random products") {
  std::mt19937 rng(3);
  std::vector<std::string> vars{"x", "y"};
  for (int it = 0; it < 30; ++it) {
    auto f = random_linear(rng, vars), g = random_linear(rng, vars);
    auto rest = random_poly(rng, vars, 3, 2);
    auto p = f.to_poly() * f.to_poly() * g.to_poly() * rest;
    auto rep = factor_over_candidates(p, {f, g});
    CHECK(rep.reconstruct() == p);
    CHECK_FALSE(trial_divide(rep.cofactor, f).exact);
    CHECK_FALSE(trial_divide(rep.cofactor, g).exact);
  }
}

TEST_CASE("determinants") {
  auto x = var("x"), y = var("y");
  PolyMatrix m{{x, y}, {y, x}};
  CHECK(determinant(m) == x * x - y * y);

  PolyMatrix z{{cst(0), x, cst(1)}, {x, cst(0), y}, {cst(1), y, cst(0)}};
  // cofactor expansion oracle
  auto expected = -x * (cst(0) - y) + cst(1) * (x * y);
  CHECK(determinant(z) == expected);

  std::vector<std::vector<Rat>> r{{2, 1}, {4, 3}};
  CHECK(determinant(r) == 2);
  auto inv = inverse(r);
  REQUIRE(inv);
  CHECK((*inv)[0][0] == rat(3, 2));
  CHECK((*inv)[1][0] == -2);
  CHECK_FALSE(inverse({{1, 2}, {2, 4}}));
}

TEST_CASE("Bareiss agrees with Leibniz expansion on random 4x4") {
  std::mt19937 rng(5);
  std::vector<std::string> vars{"a", "b"};
  for (int it = 0; it < 8; ++it) {
    PolyMatrix m(4, std::vector<CartanPoly>(4));
    for (auto& row : m)
      for (auto& e : row) e = random_poly(rng, vars, 2, 1);
    std::vector<int> perm{0, 1, 2, 3};
    CartanPoly leib;
    do {
      int inv = 0;
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
          if (perm[i] > perm[j]) ++inv;
      CartanPoly t = cst(inv % 2 ? -1 : 1);
      for (int i = 0; i < 4; ++i) t = t * m[i][perm[i]];
      leib += t;
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(determinant(m) == leib);
  }
}

TEST_CASE("null space") {
  std::vector<std::vector<Rat>> m{{1, 2, 3}, {2, 4, 6}};
  auto ns = null_space(m, 3);
  CHECK(ns.size() == 2);
  for (const auto& v : ns) CHECK(v[0] + 2 * v[1] + 3 * v[2] == 0);
}
