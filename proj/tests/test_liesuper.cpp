#include <bit>
#include <set>

#include "doctest.h"
#include "supercas/liesuper.hpp"

using namespace supercas;

namespace {

int grassmann_degree(const std::string& label) {
  if (label == "1") return 0;
  return static_cast<int>(std::count(label.begin(), label.end(), '*')) + 1;
}

}  // namespace

TEST_CASE("Grassmann family dimensions and form parity") {
  auto p4 = build_poi(4);
  CHECK(p4.dim() == 16);
  REQUIRE(p4.form);
  CHECK(p4.form->parity == 0);
  auto p3 = build_poi(3);
  CHECK(p3.dim() == 8);
  CHECK(p3.form->parity == 1);
  CHECK(build_h(4).dim() == 15);
  CHECK(build_hprime(4).dim() == 14);
  CHECK(build_family("poi(0|5)").dim() == 32);
  CHECK_THROWS_AS(build_family("poi(1|2)"), MathError);
  CHECK_THROWS_AS(build_family("foo(2)"), MathError);
}

TEST_CASE("matrix family dimensions") {
  CHECK(build_gl(2, 1).dim() == 9);
  CHECK(build_sl(2, 1).dim() == 8);
  CHECK(build_family("sl2").dim() == 3);
  CHECK(build_family("sl(3)").dim() == 8);
  CHECK(build_q(2).dim() == 8);
  CHECK(build_sq(2).dim() == 7);
  CHECK(build_pq(2).dim() == 7);
  CHECK(build_psq(2).dim() == 6);
  CHECK(build_family("sl(2)+sl(3)").dim() == 11);
}

TEST_CASE("every shipped builder verifies") {
  std::vector<std::string> fams = {"poi(0|1)", "poi(0|2)", "poi(0|3)", "poi(0|4)", "poi(0|5)", "poi_theta(0|3)",
                                   "poi_theta(0|4)", "h(0|3)", "h(0|4)", "h(0|5)", "h'(0|3)", "h'(0|4)", "h'(0|5)",
                                   "gl(2|1)", "sl(2|1)", "sl(2|2)", "sl(3|1)", "sl2", "sl(3)", "gl(1|1)",
                                   "q(2)", "q(3)", "sq(2)", "sq(3)", "pq(2)", "pq(3)", "psq(2)", "psq(3)",
                                   "sl(2)+sl(3)", "sl(2|1)+poi(0|2)"};
  for (const auto& f : fams) {
    CAPTURE(f);
    auto g = build_family(f);
    auto rep = verify_algebra(g);
    CHECK(rep.exhaustive);
    CHECK(rep.ok());
    if (!rep.ok())
      for (const auto& v : rep.violations) MESSAGE(v.kind << " " << v.i << "," << v.j << "," << v.k << " " << v.detail);
  }
}

TEST_CASE("injected fault is caught at the right pair") {
  auto g = build_family("sl(2|1)");
  int i = -1, j = -1;
  for (int a = 0; a < g.dim() && i < 0; ++a)
    for (int b = a + 1; b < g.dim(); ++b)
      if (!g.bracket(a, b).empty()) {
        i = a;
        j = b;
        break;
      }
  REQUIRE(i >= 0);
  auto v = g.bracket(i, j);
  v[0].second = -v[0].second;
  g.set_bracket(i, j, v);
  auto rep = verify_algebra(g);
  CHECK_FALSE(rep.ok());
  bool found = false;
  for (const auto& x : rep.violations)
    if (x.kind == "anticommutativity" && x.i == i && x.j == j) found = true;
  CHECK(found);
}

TEST_CASE("gram inverse") {
  auto g = build_poi(2);
  auto b = gram_inverse(g);
  const auto& a = g.form->gram;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) {
      Rat s = 0;
      for (std::size_t k = 0; k < a.size(); ++k) s += a[i][k] * b[k][j];
      CHECK(s == (i == j ? 1 : 0));
    }
  // an even form has an even inverse
  auto p4 = build_poi(4);
  auto b4 = gram_inverse(p4);
  for (int i = 0; i < p4.dim(); ++i)
    for (int j = 0; j < p4.dim(); ++j)
      if (b4[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0) CHECK(p4.parity(i) == p4.parity(j));

  CHECK_THROWS_AS(gram_inverse(build_pq(2)), MathError);
  CHECK_THROWS_AS(gram_inverse(build_sq(2)), MathError);
  CHECK_NOTHROW(gram_inverse(build_psq(2)));
  try {
    gram_inverse(build_pq(2));
  } catch (const MathError& e) {
    CHECK(e.code() == ErrorCode::DegenerateForm);
  }

  SuperAlgebra id("id", {"a", "b"}, {0, 0});
  id.form = InvariantForm{{{1, 0}, {0, 1}}, 0};
  auto inv = gram_inverse(id);
  CHECK(inv == RatMatrix{{1, 0}, {0, 1}});
}

TEST_CASE("Berezin pairing joins complementary degrees") {
  for (int m = 2; m <= 5; ++m) {
    auto g = build_poi(m);
    for (int i = 0; i < g.dim(); ++i)
      for (int j = 0; j < g.dim(); ++j)
        if (g.form->gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] != 0)
          CHECK(grassmann_degree(g.labels[static_cast<std::size_t>(i)]) +
                    grassmann_degree(g.labels[static_cast<std::size_t>(j)]) ==
                m);
  }
}

TEST_CASE("h(0|m) matches Hamiltonian fields") {
  for (int m = 2; m <= 4; ++m) {
    auto h = build_h(m);
    std::vector<GrassmannElement> el;
    for (const auto& l : h.labels) el.push_back(GrassmannElement::parse(l, m, Presentation::XiEta));
    for (int i = 0; i < h.dim(); ++i)
      for (int j = 0; j < h.dim(); ++j) {
        GrassmannElement expect = hamiltonian_field(el[static_cast<std::size_t>(i)], el[static_cast<std::size_t>(j)]);
        GrassmannElement got(m, Presentation::XiEta);
        for (const auto& [k, c] : h.bracket(i, j)) got += c * el[static_cast<std::size_t>(k)];
        expect -= GrassmannElement::constant(m, Presentation::XiEta, expect.coefficient(0));
        CHECK(got == expect);
      }
  }
}

TEST_CASE("root decomposition of sl(2)") {
  auto g = build_family("sl2");
  auto rd = root_decomposition(g);
  REQUIRE(rd.positive.size() == 1);
  REQUIRE(rd.negative.size() == 1);
  CHECK(rd.positive[0].weight == Weight{2});
  CHECK(g.labels[static_cast<std::size_t>(rd.positive[0].indices[0])] == "E1,2");
  CHECK(parse_weight(g, "2a") == Weight{4});
  CHECK_FALSE(rd.generalized);
}

TEST_CASE("positive systems of poi(0|3) and poi(0|5)") {
  auto g3 = build_poi(3);
  auto rd3 = root_decomposition(g3);
  REQUIRE(rd3.positive.size() == 1);
  CHECK(rd3.positive[0].weight == g3.named_weights.at("e1"));
  CHECK(rd3.positive[0].even_dim == 1);
  CHECK(rd3.positive[0].odd_dim == 1);

  auto g5 = build_poi(5);
  auto rd5 = root_decomposition(g5);
  CHECK(rd5.generalized);
  Weight e1 = g5.named_weights.at("e1"), e2 = g5.named_weights.at("e2");
  std::set<Weight> expect{e1, e2, weight_combination({{1, e1}, {1, e2}}, e1.size()),
                          weight_combination({{1, e1}, {-1, e2}}, e1.size())};
  std::set<Weight> got;
  for (const auto& r : rd5.positive) got.insert(r.weight);
  CHECK(got == expect);
  CHECK(rd5.negative.size() == 4);

  CHECK_THROWS_AS(root_decomposition(g5, RootOptions{false}), MathError);
}

TEST_CASE("root space dimensions add up") {
  for (const char* f : {"poi(0|2)", "poi(0|3)", "poi(0|4)", "poi(0|5)", "poi(0|6)", "sl(2|1)", "gl(2|2)", "sl(2|2)",
                        "q(3)", "psq(3)", "h(0|5)", "sl(2)+sl(3)"}) {
    std::string name = f;
    CAPTURE(name);
    auto g = build_family(f);
    auto rd = root_decomposition(g);
    std::size_t total = 0;
    for (const auto& r : rd.positive) total += r.indices.size();
    for (const auto& r : rd.negative) total += r.indices.size();
    CHECK(total + g.cartan.size() == static_cast<std::size_t>(g.dim()));
  }
}

TEST_CASE("sigma is an anti-automorphism exchanging opposite root spaces") {
  for (const char* f : {"sl2", "sl(2|1)", "gl(2|1)", "poi(0|2)", "poi(0|3)", "poi(0|4)", "poi(0|5)", "h'(0|4)"}) {
    std::string name = f;
    CAPTURE(name);
    auto g = build_family(f);
    CHECK(check_sigma(g, SigmaMode::IgnoreSign).empty());
    CHECK(check_sigma(g, SigmaMode::RespectSign).empty());
    auto rd = root_decomposition(g);
    auto s = sigma_map(g, SigmaMode::IgnoreSign);
    for (int i = 0; i < g.dim(); ++i) {
      int j = s.perm[static_cast<std::size_t>(i)];
      CHECK(s.perm[static_cast<std::size_t>(j)] == i);
      CHECK(s.coef[static_cast<std::size_t>(i)] * s.coef[static_cast<std::size_t>(j)] == 1);
      Weight neg = rd.weight_of[static_cast<std::size_t>(i)];
      for (auto& x : neg) x = -x;
      CHECK(rd.weight_of[static_cast<std::size_t>(j)] == neg);
    }
    for (int c : g.even_cartan()) {
      auto sr = sigma_map(g, SigmaMode::RespectSign);
      CHECK(sr.perm[static_cast<std::size_t>(c)] == c);
    }
  }
}

TEST_CASE("weights parse against named roots") {
  auto g = build_family("sl(2|1)");
  auto a1 = g.named_weights.at("a1"), a2 = g.named_weights.at("a2");
  CHECK(parse_weight(g, "a1+2*a2") == weight_combination({{1, a1}, {2, a2}}, a1.size()));
  CHECK(parse_weight(g, "-a1 + 1/2a2") == weight_combination({{-1, a1}, {Rat(1, 2), a2}}, a1.size()));
  CHECK(weight_is_zero(parse_weight(g, "0")));
  CHECK_THROWS_AS(parse_weight(g, "b7"), MathError);
}

TEST_CASE("parity grading is compatible") {
  auto g = with_parity_grading(build_poi(4));
  CHECK(verify_algebra(g).ok());
  auto bad = build_poi(4);
  Grading gr;
  gr.r = 2;
  gr.classes.assign(16, 0);
  gr.classes[1] = 1;
  bad.grading = gr;
  CHECK_FALSE(verify_algebra(bad).ok());
}

TEST_CASE("queer family has no rational sign twist for the respect mode") {
  for (const char* f : {"q(2)", "psq(3)"}) {
    auto g = build_family(f);
    CHECK(check_sigma(g, SigmaMode::IgnoreSign).empty());
    CHECK_THROWS_AS(sigma_map(g, SigmaMode::RespectSign), MathError);
  }
}
