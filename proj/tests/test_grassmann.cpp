#include <bit>
#include <random>

#include "doctest.h"
#include "supercas/grassmann.hpp"

using namespace supercas;

namespace {

using GE = GrassmannElement;

std::vector<GE> monomial_basis(int m, Presentation p) {
  std::vector<GE> out;
  for (GrassMask mask = 0; mask < (GrassMask(1) << m); ++mask) out.push_back(GE::monomial(m, p, mask));
  return out;
}

int par(const GE& x) { return x.parity(); }

GE random_homogeneous(std::mt19937& rng, int m, Presentation p, int parity) {
  std::uniform_int_distribution<int> coef(-3, 3);
  GE out(m, p);
  for (GrassMask mask = 0; mask < (GrassMask(1) << m); ++mask)
    if (std::popcount(mask) % 2 == parity && rng() % 3 == 0) out.add_term(mask, coef(rng));
  if (out.is_zero()) out.add_term(parity ? 1u : 0u, 1);
  return out;
}

GE jacobator(const GE& f, const GE& g, const GE& h) {
  int s = par(f) * par(g) % 2 ? -1 : 1;
  return poisson(f, poisson(g, h)) - poisson(poisson(f, g), h) - Rat(s) * poisson(g, poisson(f, h));
}

}  // namespace

TEST_CASE("products") {
  auto t1 = GE::theta(3, 1), t2 = GE::theta(3, 2);
  CHECK((t1 * t2).str() == "th1*th2");
  CHECK(t2 * t1 == -(t1 * t2));
  CHECK((t1 * t1).is_zero());
  CHECK(grassmann_sign(0b10, 0b01) == -1);
  CHECK(grassmann_sign(0b011, 0b100) == 1);
  CHECK(grassmann_sign(0b101, 0b010) == -1);
}

TEST_CASE("left derivative") {
  auto t1 = GE::theta(2, 1), t2 = GE::theta(2, 2);
  CHECK(partial(t1 * t2, 1) == t2);
  CHECK(partial(t1 * t2, 2) == -t1);
  CHECK(partial(GE::constant(2, Presentation::Theta, 1), 1).is_zero());
  CHECK_THROWS_AS(partial(t1, 3), MathError);
}

TEST_CASE("Berezin integral") {
  for (int m = 1; m <= 6; ++m) {
    GE top = GE::constant(m, Presentation::Theta, 1);
    for (int j = 1; j <= m; ++j) top = top * GE::theta(m, j);
    CHECK(berezin(top) == 1);
    CHECK(berezin(GE::constant(m, Presentation::Theta, 1)) == 0);
  }
  auto t1 = GE::theta(2, 1), t2 = GE::theta(2, 2);
  CHECK(berezin(Rat(5) * (t2 * t1)) == -5);
}

TEST_CASE("Poisson spot values") {
  auto one = GE::constant(3, Presentation::Theta, 1);
  for (const auto& g : monomial_basis(3, Presentation::Theta)) CHECK(poisson(one, g).is_zero());
  CHECK(poisson(GE::theta(3, 1), GE::theta(3, 1)) == GE::constant(3, Presentation::Theta, -1));
  CHECK(poisson(GE::xi(4, 1), GE::eta(4, 1)) == GE::constant(4, Presentation::XiEta, -1));
  CHECK(poisson(GE::odd_theta(3), GE::odd_theta(3)) == GE::constant(3, Presentation::XiEta, -1));
  CHECK_THROWS_AS(poisson(GE::theta(3, 1), GE::xi(4, 1)), MathError);
}

TEST_CASE("Hamiltonian fields agree with the bracket off constants") {
  auto x = GE::xi(2, 1), e = GE::eta(2, 1);
  CHECK(hamiltonian_field(x, e) == poisson(x, e));
  CHECK(hamiltonian_field(x * e, x) == poisson(x * e, x));
  CHECK(hamiltonian_field(x * e, x) == -x);
  auto one = GE::constant(2, Presentation::XiEta, 1);
  CHECK(hamiltonian_field(one, x * e).is_zero());
  CHECK_THROWS_AS(hamiltonian(GE::theta(2, 1)), MathError);

  for (int m = 2; m <= 5; ++m) {
    auto basis = monomial_basis(m, Presentation::XiEta);
    for (const auto& f : basis)
      for (const auto& g : basis) CHECK(hamiltonian_field(f, g) == poisson(f, g));
  }
}

TEST_CASE("super-antisymmetry, exhaustive m <= 5") {
  for (auto pres : {Presentation::Theta, Presentation::XiEta})
    for (int m = 1; m <= 5; ++m) {
      auto basis = monomial_basis(m, pres);
      int bad = 0;
      for (const auto& f : basis)
        for (const auto& g : basis) {
          int s = par(f) * par(g) % 2 ? 1 : -1;
          if (poisson(f, g) != Rat(s) * poisson(g, f)) ++bad;
        }
      CHECK(bad == 0);
    }
}

TEST_CASE("super Jacobi, exhaustive m <= 4") {
  for (auto pres : {Presentation::Theta, Presentation::XiEta})
    for (int m = 1; m <= 4; ++m) {
      auto basis = monomial_basis(m, pres);
      int bad = 0;
      for (const auto& f : basis)
        for (const auto& g : basis)
          for (const auto& h : basis)
            if (!jacobator(f, g, h).is_zero()) ++bad;
      CHECK(bad == 0);
    }
}

TEST_CASE("super Jacobi, randomized m = 5, 6") {
  std::mt19937 rng(17);
  for (auto pres : {Presentation::Theta, Presentation::XiEta})
    for (int m = 5; m <= 6; ++m)
      for (int it = 0; it < 60; ++it) {
        auto f = random_homogeneous(rng, m, pres, rng() % 2);
        auto g = random_homogeneous(rng, m, pres, rng() % 2);
        auto h = random_homogeneous(rng, m, pres, rng() % 2);
        CHECK(jacobator(f, g, h).is_zero());
      }
}

TEST_CASE("Leibniz rule, exhaustive m <= 4") {
  for (int m = 1; m <= 4; ++m) {
    auto basis = monomial_basis(m, Presentation::Theta);
    for (int j = 1; j <= m; ++j)
      for (const auto& f : basis)
        for (const auto& g : basis) {
          Rat s = par(f) ? -1 : 1;
          CHECK(partial(f * g, j) == partial(f, j) * g + s * (f * partial(g, j)));
        }
  }
}

TEST_CASE("Berezin form is invariant") {
  for (auto pres : {Presentation::Theta, Presentation::XiEta})
    for (int m = 2; m <= 4; ++m) {
      auto basis = monomial_basis(m, pres);
      int bad = 0;
      for (const auto& f : basis)
        for (const auto& g : basis)
          for (const auto& h : basis)
            if (berezin(poisson(f, g) * h) != berezin(f * poisson(g, h))) ++bad;
      CHECK(bad == 0);
    }
}

TEST_CASE("text round trip") {
  auto f = GE::parse("3*x1*e1 - 1/2*th", 3, Presentation::XiEta);
  CHECK(f.str() == "-1/2*th + 3*x1*e1");
  CHECK(GE::parse(f.str(), 3, Presentation::XiEta) == f);
  CHECK(GE::parse("3*x1^1*e1", 3, Presentation::XiEta) == GE::parse("3*x1*e1", 3, Presentation::XiEta));
  CHECK(GE::parse("e1*x1", 2, Presentation::XiEta) == -(GE::xi(2, 1) * GE::eta(2, 1)));
  CHECK(GE::parse("th2*th1 + 2", 2, Presentation::Theta).str() == "2 - th1*th2");
  CHECK(GE::parse("x1^2", 2, Presentation::XiEta).is_zero());
  CHECK_THROWS_AS(GE::parse("th", 4, Presentation::XiEta), MathError);

  std::mt19937 rng(2);
  for (int it = 0; it < 30; ++it) {
    auto g = random_homogeneous(rng, 5, Presentation::XiEta, it % 2);
    g *= Rat(1, 3);
    CHECK(GE::parse(g.str(), 5, Presentation::XiEta) == g);
  }
}
