#include "supercas/algebra_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace supercas {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw MathError(ErrorCode::ParseError, msg); }

Rat rat_of(const json& v) {
  if (v.is_number_integer()) return Rat(v.get<long>());
  if (v.is_string()) return parse_rat(v.get<std::string>());
  fail("expected a rational, got " + v.dump());
}

std::string rat_text(const Rat& r) { return r.get_str(); }

int index_or_fail(const SuperAlgebra& g, const json& v) {
  if (!v.is_string()) fail("expected a basis label, got " + v.dump());
  int i = g.index_of(v.get<std::string>());
  if (i < 0) fail("unknown basis label '" + v.get<std::string>() + "'");
  return i;
}

SparseVec vector_of(const SuperAlgebra& g, const json& v) {
  if (!v.is_object()) fail("expected {label: coefficient}, got " + v.dump());
  std::map<int, Rat> m;
  for (const auto& [k, c] : v.items()) m[index_or_fail(g, json(k))] += rat_of(c);
  return sv_from_map(m);
}

json vector_json(const SuperAlgebra& g, const SparseVec& v) {
  json out = json::object();
  for (const auto& [i, c] : v) out[g.labels[static_cast<std::size_t>(i)]] = rat_text(c);
  return out;
}

std::string family_string(const json& j) {
  std::string fam = j.at("family").get<std::string>();
  if (!j.contains("params")) return fam;
  const auto& p = j["params"];
  if (!p.is_array() || p.empty() || p.size() > 2) fail("params must be a list of one or two integers");
  std::string s = fam + "(" + std::to_string(p[0].get<int>());
  if (p.size() == 2) s += "|" + std::to_string(p[1].get<int>());
  return s + ")";
}

SuperAlgebra explicit_algebra(const json& j) {
  if (!j.contains("basis")) fail("spec needs either 'family' or 'basis'");
  std::vector<std::string> labels;
  std::vector<int> parities;
  for (const auto& b : j["basis"]) {
    labels.push_back(b.at("label").get<std::string>());
    int p = b.value("parity", 0);
    if (p != 0 && p != 1) fail("parity must be 0 or 1");
    parities.push_back(p);
  }
  SuperAlgebra g(j.value("name", std::string("custom")), labels, parities);
  std::vector<bool> given(static_cast<std::size_t>(g.dim() * g.dim()), false);
  for (const auto& e : j.value("brackets", json::array())) {
    if (!e.is_array() || e.size() != 3) fail("bracket entries are [x, y, {z: c}]");
    int x = index_or_fail(g, e[0]), y = index_or_fail(g, e[1]);
    SparseVec v = vector_of(g, e[2]);
    g.set_bracket(x, y, v);
    given[static_cast<std::size_t>(x * g.dim() + y)] = true;
    if (x != y && !given[static_cast<std::size_t>(y * g.dim() + x)]) {
      int sign = (g.parity(x) && g.parity(y)) ? 1 : -1;
      g.set_bracket(y, x, sv_scale(v, sign));
    }
  }
  return g;
}

}  // namespace

SuperAlgebra parse_algebra_spec(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) fail("spec must be a JSON object");
  try {
    SuperAlgebra g = j.contains("family") ? build_family(family_string(j)) : explicit_algebra(j);
    if (j.contains("name")) g.name = j["name"].get<std::string>();

    if (j.contains("form")) {
      const auto& f = j["form"];
      if (f.is_null()) {
        g.form.reset();
      } else {
        InvariantForm form;
        form.parity = f.value("parity", 0);
        form.gram.assign(static_cast<std::size_t>(g.dim()), std::vector<Rat>(static_cast<std::size_t>(g.dim())));
        for (const auto& e : f.at("entries")) {
          if (!e.is_array() || e.size() != 3) fail("form entries are [x, y, c]");
          int x = index_or_fail(g, e[0]), y = index_or_fail(g, e[1]);
          Rat c = rat_of(e[2]);
          form.gram[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] = c;
        }
        g.form = form;
      }
    }
    if (j.contains("cartan")) {
      g.cartan.clear();
      g.cartan_names.clear();
      for (const auto& c : j["cartan"]) {
        int i = index_or_fail(g, c);
        g.cartan.push_back(i);
        g.cartan_names.push_back(g.labels[static_cast<std::size_t>(i)]);
      }
    }
    if (j.contains("cartan_names")) {
      auto names = j["cartan_names"].get<std::vector<std::string>>();
      if (names.size() != g.cartan.size()) fail("cartan_names must match cartan");
      g.cartan_names = names;
    }
    if (j.contains("splitter_H")) {
      if (j["splitter_H"].is_null())
        g.splitter.reset();
      else
        g.splitter = vector_of(g, j["splitter_H"]);
    }
    if (j.contains("grading")) {
      const auto& gr = j["grading"];
      if (gr.is_null()) {
        g.grading.reset();
      } else if (gr.is_string()) {
        if (gr.get<std::string>() != "parity") fail("unknown grading '" + gr.get<std::string>() + "'");
        g = with_parity_grading(std::move(g));
      } else {
        Grading G;
        G.r = gr.at("r").get<int>();
        if (G.r < 1) fail("grading r must be positive");
        G.classes.assign(static_cast<std::size_t>(g.dim()), 0);
        for (const auto& [k, c] : gr.at("classes").items()) {
          int cls = c.get<int>();
          if (cls < 0 || cls >= G.r) fail("grading class out of range for '" + k + "'");
          G.classes[static_cast<std::size_t>(index_or_fail(g, json(k)))] = cls;
        }
        g.grading = G;
      }
    }
    if (j.contains("sigma")) {
      const auto& s = j["sigma"];
      if (s.is_null()) {
        g.sigma.reset();
      } else {
        SignedPermutation p;
        p.perm.assign(static_cast<std::size_t>(g.dim()), -1);
        p.coef.assign(static_cast<std::size_t>(g.dim()), Rat(0));
        for (const auto& e : s) {
          if (!e.is_array() || e.size() != 3) fail("sigma entries are [x, y, c]");
          int x = index_or_fail(g, e[0]);
          p.perm[static_cast<std::size_t>(x)] = index_or_fail(g, e[1]);
          p.coef[static_cast<std::size_t>(x)] = rat_of(e[2]);
        }
        for (int v : p.perm)
          if (v < 0) fail("sigma must be given on every basis vector");
        g.sigma = p;
      }
    }
    if (j.contains("weights")) {
      const std::size_t rank = g.even_cartan().size();
      for (const auto& [k, w] : j["weights"].items()) {
        Weight v;
        for (const auto& c : w) v.push_back(rat_of(c));
        if (v.size() != rank) fail("weight '" + k + "' has the wrong length");
        g.named_weights[k] = v;
      }
    }
    if (j.contains("notes")) g.notes = j["notes"].get<std::vector<std::string>>();
    return g;
  } catch (const json::exception& e) {
    fail(std::string("bad spec field: ") + e.what());
  }
}

std::string algebra_spec_json(const SuperAlgebra& g, int indent) {
  json j;
  j["schema"] = "supercas.algebra/1";
  j["name"] = g.name;
  json basis = json::array();
  for (int i = 0; i < g.dim(); ++i) basis.push_back({{"label", g.labels[static_cast<std::size_t>(i)]}, {"parity", g.parity(i)}});
  j["basis"] = basis;
  json br = json::array();
  for (int x = 0; x < g.dim(); ++x)
    for (int y = x; y < g.dim(); ++y)
      if (!g.bracket(x, y).empty())
        br.push_back({g.labels[static_cast<std::size_t>(x)], g.labels[static_cast<std::size_t>(y)], vector_json(g, g.bracket(x, y))});
  j["brackets"] = br;
  if (g.form) {
    json entries = json::array();
    for (int x = 0; x < g.dim(); ++x)
      for (int y = 0; y < g.dim(); ++y) {
        const Rat& c = g.form->gram[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
        if (c != 0) entries.push_back({g.labels[static_cast<std::size_t>(x)], g.labels[static_cast<std::size_t>(y)], rat_text(c)});
      }
    j["form"] = {{"parity", g.form->parity}, {"entries", entries}};
  } else {
    j["form"] = nullptr;
  }
  json cartan = json::array();
  for (int c : g.cartan) cartan.push_back(g.labels[static_cast<std::size_t>(c)]);
  j["cartan"] = cartan;
  j["cartan_names"] = g.cartan_names;
  j["splitter_H"] = g.splitter ? vector_json(g, *g.splitter) : json(nullptr);
  if (g.grading) {
    json classes = json::object();
    for (int i = 0; i < g.dim(); ++i)
      if (g.grading->classes[static_cast<std::size_t>(i)] != 0)
        classes[g.labels[static_cast<std::size_t>(i)]] = g.grading->classes[static_cast<std::size_t>(i)];
    j["grading"] = {{"r", g.grading->r}, {"classes", classes}};
  } else {
    j["grading"] = nullptr;
  }
  if (g.sigma) {
    json s = json::array();
    for (int i = 0; i < g.dim(); ++i)
      s.push_back({g.labels[static_cast<std::size_t>(i)], g.labels[static_cast<std::size_t>(g.sigma->perm[static_cast<std::size_t>(i)])],
                   rat_text(g.sigma->coef[static_cast<std::size_t>(i)])});
    j["sigma"] = s;
  } else {
    j["sigma"] = nullptr;
  }
  json w = json::object();
  for (const auto& [k, v] : g.named_weights) {
    json a = json::array();
    for (const auto& c : v) a.push_back(rat_text(c));
    w[k] = a;
  }
  j["weights"] = w;
  j["notes"] = g.notes;
  return j.dump(indent);
}

SuperAlgebra load_algebra(std::string_view ref) {
  std::filesystem::path p{std::string(ref)};
  std::error_code ec;
  if (std::filesystem::is_regular_file(p, ec)) {
    std::ifstream in(p);
    if (!in) fail("cannot read '" + p.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_algebra_spec(ss.str());
  }
  return build_family(ref);
}

}  // namespace supercas
