#include <random>

#include "doctest.h"
#include "supercas/loop_km.hpp"

using namespace supercas;

namespace {

LoopElement single(const LoopGen& g, const Rat& c = 1) { return {{g, c}}; }

SuperAlgebra sl2_root_graded(int r) {
  auto g = build_family("sl2");
  Grading gr;
  gr.r = r;
  gr.classes.assign(3, 0);
  gr.classes[static_cast<std::size_t>(g.index_of("E1,2"))] = 1;
  gr.classes[static_cast<std::size_t>(g.index_of("E2,1"))] = r - 1;
  g.grading = gr;
  return g;
}

}  // namespace

TEST_CASE("Kac-Moody bracket") {
  auto g = build_family("sl2");
  LoopAlgebra L(g);
  int e = g.index_of("E1,2"), f = g.index_of("E2,1"), h = g.cartan[0];
  auto r = L.bracket(LoopGen::loop(1, e), LoopGen::loop(-1, f));
  CHECK(r == LoopElement{{LoopGen::z(), 1}, {LoopGen::loop(0, h), 1}});
  CHECK(L.bracket(LoopGen::z(), LoopGen::loop(5, e)).empty());
  CHECK(L.bracket(LoopGen::u(), LoopGen::loop(3, f)) == single(LoopGen::loop(3, f), 3));
  CHECK(L.bracket(LoopGen::loop(3, f), LoopGen::u()) == single(LoopGen::loop(3, f), -3));
  // (h|h) = 2
  CHECK(L.bracket(LoopGen::loop(2, h), LoopGen::loop(-2, h)) == single(LoopGen::z(), 4));
  CHECK(km_bracket(single(LoopGen::loop(0, e)), single(LoopGen::loop(0, f)), g) == single(LoopGen::loop(0, h)));
}

TEST_CASE("Kac-Moody bracket satisfies the super Jacobi identity") {
  for (const char* f : {"sl(2|1)", "poi(0|4)"}) {
    std::string name = f;
    CAPTURE(name);
    auto g = build_family(f);
    LoopAlgebra L(g);
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> deg(-2, 2), idx(0, g.dim() - 1), kind(0, 9);
    auto pick = [&] {
      int k = kind(rng);
      if (k == 0) return LoopGen::u();
      if (k == 1) return LoopGen::z();
      return LoopGen::loop(deg(rng), idx(rng));
    };
    for (int t = 0; t < 300; ++t) {
      LoopGen a = pick(), b = pick(), c = pick();
      LoopElement x = single(a), y = single(b), w = single(c);
      auto lhs = L.bracket(x, L.bracket(y, w));
      auto r1 = L.bracket(L.bracket(x, y), w);
      auto r2 = L.bracket(y, L.bracket(x, w));
      Rat s = (L.parity(a) && L.parity(b)) ? Rat(-1) : Rat(1);
      for (const auto& [k, v] : r2) r1[k] += s * v;
      std::erase_if(r1, [](const auto& p) { return p.second == 0; });
      CHECK(lhs == r1);
    }
  }
}

TEST_CASE("twisted support is enforced") {
  auto g = with_parity_grading(build_poi(4));
  LoopAlgebra L(g, 2);
  int odd = g.index_of("x1");
  CHECK(L.supported(LoopGen::loop(1, odd)));
  CHECK_FALSE(L.supported(LoopGen::loop(2, odd)));
  CHECK_THROWS_AS(L.bracket(LoopGen::loop(2, odd), LoopGen::u()), MathError);
  CHECK_THROWS_AS(LoopAlgebra(build_poi(4), 2), MathError);
}

TEST_CASE("omega_km preconditions") {
  auto code = [](auto fn) {
    try {
      fn();
    } catch (const MathError& e) {
      return e.code();
    }
    return ErrorCode::ParseError;
  };
  CHECK(code([] { omega_km(build_poi(2)); }) == ErrorCode::NonScalarA);
  CHECK(code([] { omega_km(build_poi(3)); }) == ErrorCode::FormParityMismatch);
  auto bad = build_family("sl2");
  bad.grading = Grading{2, {1, 0, 0}};
  CHECK(code([&] { omega_km(bad, 2); }) == ErrorCode::GradingIncompatible);
  CHECK(omega_km(build_poi(4)).lambda == 0);
  CHECK(omega_km(build_family("sl2")).lambda == 4);
}

TEST_CASE("Omega slices are Wick ordered and match across trivial gradings") {
  auto g = build_family("sl(2|1)");
  auto om = omega_km(g);
  auto gt = g;
  gt.grading = Grading{1, std::vector<int>(static_cast<std::size_t>(g.dim()), 0)};
  auto omt = omega_km(gt, 1);
  for (int p = -4; p <= 3; ++p) {
    CHECK(om.slice(p) == omt.slice(p));
    if (p > 0) CHECK(om.slice(p).empty());
  }
  auto b = gram_inverse(g);
  for (const auto& [ij, c] : om.slice(-2)) CHECK(c == 2 * b[static_cast<std::size_t>(ij.first)][static_cast<std::size_t>(ij.second)]);
  for (const auto& [ij, c] : om.slice(0)) CHECK(c == b[static_cast<std::size_t>(ij.first)][static_cast<std::size_t>(ij.second)]);
}

TEST_CASE("Kac-Moody Casimir is central slice by slice") {
  struct Case {
    SuperAlgebra g;
    int r, window;
  };
  std::vector<Case> cases = {{build_family("sl2"), 1, 3},
                             {build_family("sl(2|1)"), 1, 2},
                             {build_poi(4), 1, 3},
                             {with_parity_grading(build_poi(4)), 2, 2},
                             {with_parity_grading(build_family("sl(2|1)")), 2, 2},
                             {sl2_root_graded(2), 2, 3}};
  for (const auto& c : cases) {
    std::string label = c.g.name + " r=" + std::to_string(c.r);
    CAPTURE(label);
    auto rep = verify_km_centrality(c.g, c.r, c.window);
    CHECK(rep.ok());
    CHECK(rep.slices_checked() > 0);
    CHECK(rep.checks[0].x == LoopGen::z());
    CHECK(rep.checks[1].x == LoopGen::u());
    CHECK(rep.checks[0].ok());
    CHECK(rep.checks[1].ok());
  }
}

TEST_CASE("the check sees a wrong linear coefficient") {
  auto g = build_family("sl2");
  auto om = omega_km(g);
  om.u_coefficient += 1;
  CHECK_FALSE(verify_km_centrality(g, om, 1).ok());

  auto tw = with_parity_grading(build_family("sl(2|1)"));
  auto omt = omega_km(tw, 2);
  CHECK(omt.u_coefficient == 1);
  omt.u_coefficient = omt.lambda;  // lambda u instead of (lambda / r) u
  CHECK_FALSE(verify_km_centrality(tw, omt, 2).ok());

  auto om2 = omega_km(g);
  om2.uz_coefficient = 1;
  auto rep = verify_km_centrality(g, om2, 1);
  CHECK_FALSE(rep.ok());
}

TEST_CASE("gradings with r > 2 need a degree-zero linear term") {
  for (int r : {3, 4}) {
    CAPTURE(r);
    auto g = sl2_root_graded(r);
    auto om = omega_km(g, r);
    CHECK_FALSE(verify_km_centrality(g, om, r).ok());
    auto fixed = solve_linear_part(g, om, r);
    REQUIRE(fixed);
    CHECK(verify_km_centrality(g, *fixed, r + 2).ok());
    // the correction is a multiple of h
    REQUIRE(fixed->degree0_linear.size() == 1);
    CHECK(fixed->degree0_linear[0].first == g.cartan[0]);
  }
  // already central: the solver leaves the parity twist alone
  auto tw = with_parity_grading(build_poi(4));
  auto fixed = solve_linear_part(tw, omega_km(tw, 2), 2);
  REQUIRE(fixed);
  CHECK(fixed->u_coefficient == 0);
}
