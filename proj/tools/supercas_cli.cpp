// supercas: command line front end.
//
// Exit codes: 0 success, 1 usage or input error, 2 a mathematical check failed.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "supercas/algebra_io.hpp"
#include "supercas/casimir.hpp"
#include "supercas/loop_km.hpp"
#include "supercas/parallel.hpp"
#include "supercas/shapovalov.hpp"

using namespace supercas;
using nlohmann::json;

namespace {

constexpr const char* kReportSchema = "supercas.report/1";

struct Outcome {
  json report;
  std::string text;
  bool ok = true;
};

struct Common {
  std::string algebra;
  std::string out;
  int jobs = 0;
  bool json_stdout = false;
};

std::string rat_text(const Rat& r) { return r.get_str(); }

json weight_json(const Weight& w) {
  json a = json::array();
  for (const auto& x : w) a.push_back(rat_text(x));
  return a;
}

json factor_json(const FactorizationReport& r) {
  json j;
  j["scalar"] = rat_text(r.scalar);
  json fs = json::array();
  for (const auto& [f, k] : r.factors) fs.push_back({{"form", f.str()}, {"multiplicity", k}});
  j["factors"] = fs;
  j["cofactor"] = r.cofactor.str();
  j["det"] = r.expanded ? json(r.determinant.str()) : json(nullptr);
  return j;
}

std::string factor_text(const FactorizationReport& r) {
  std::ostringstream s;
  s << r.scalar;
  for (const auto& [f, k] : r.factors) s << " * (" << f.str() << ")^" << k;
  if (!r.cofactor.is_constant()) s << " * [" << r.cofactor.str() << "]";
  return s.str();
}

json base_report(const std::string& command, const SuperAlgebra& g) {
  return json{{"schema", kReportSchema}, {"command", command}, {"algebra", g.name}, {"dim", g.dim()}};
}

// ------------------------------------------------------------------ algebra

Outcome algebra_build(const Common& c) {
  auto g = load_algebra(c.algebra);
  Outcome o;
  o.report = base_report("algebra build", g);
  o.report["spec"] = json::parse(algebra_spec_json(g));
  std::ostringstream s;
  int odd = 0;
  for (int p : g.parities) odd += p;
  s << g.name << ": dim " << g.dim() - odd << "|" << odd << ", Cartan";
  for (int i : g.cartan) s << " " << g.cartan_name(i);
  s << "\n";
  if (g.splitter) {
    auto rd = root_decomposition(g);
    o.report["positive_roots"] = json::array();
    for (const auto& r : rd.positive) {
      o.report["positive_roots"].push_back({{"weight", weight_json(r.weight)}, {"height", rat_text(r.height)},
                                            {"even_dim", r.even_dim}, {"odd_dim", r.odd_dim}});
      s << "  root " << weight_str(r.weight) << "  height " << r.height << "  dim " << r.even_dim << "|" << r.odd_dim
        << "\n";
    }
    o.report["generalized_weight_spaces"] = rd.generalized;
  }
  for (const auto& n : g.notes) s << "  note: " << n << "\n";
  o.text = s.str();
  return o;
}

Outcome algebra_verify(const Common& c, int exhaustive_limit) {
  auto g = load_algebra(c.algebra);
  VerifyOptions vo;
  vo.exhaustive_limit = exhaustive_limit;
  vo.jobs = resolve_jobs(c.jobs);
  auto t0 = std::chrono::steady_clock::now();
  auto rep = verify_algebra(g, vo);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Outcome o;
  o.ok = rep.ok();
  o.report = base_report("algebra verify", g);
  o.report["ok"] = rep.ok();
  o.report["exhaustive"] = rep.exhaustive;
  o.report["triples_checked"] = rep.triples_checked;
  o.report["total_violations"] = rep.total_violations;
  json v = json::array();
  for (const auto& x : rep.violations) v.push_back({{"kind", x.kind}, {"i", x.i}, {"j", x.j}, {"k", x.k}, {"detail", x.detail}});
  o.report["violations"] = v;
  std::ostringstream s;
  s << g.name << ": " << rep.summary() << " (" << secs << " s)\n";
  o.text = s.str();
  return o;
}

// ------------------------------------------------------------------ casimir

Outcome casimir_quadratic(const Common& c) {
  auto g = load_algebra(c.algebra);
  CasimirOptions co;
  co.jobs = c.jobs;
  auto q = omega0(g, co);
  auto bad = check_b_identity(g, q.b);
  Outcome o;
  o.ok = q.central() && bad.empty();
  o.report = base_report("casimir quadratic", g);
  o.report["central"] = q.central();
  o.report["b_identity_violations"] = bad.size();
  o.report["element"] = q.U->str(q.element);
  o.report["hc"] = q.U->hc(q.element).str();
  json res = json::array();
  for (std::size_t k = 0; k < q.residuals.size(); ++k)
    if (!q.residuals[k].is_zero()) res.push_back({{"generator", g.labels[k]}, {"residual", q.U->str(q.residuals[k])}});
  o.report["nonzero_residuals"] = res;
  std::ostringstream s;
  s << g.name << ": Omega_0 = " << q.U->str(q.element) << "\n  HC = " << q.U->hc(q.element).str() << "\n  central: "
    << (q.central() ? "yes" : "NO") << ", b-identity violations: " << bad.size() << "\n";
  o.text = s.str();
  return o;
}

Outcome casimir_cubic(const Common& c) {
  auto g = load_algebra(c.algebra);
  CasimirOptions co;
  co.jobs = c.jobs;
  auto q = c3(g, co);
  auto bad = check_f_symmetry(g, q);
  int deg = q.element.degree();
  Outcome o;
  o.ok = q.central() && bad.empty();
  o.report = base_report("casimir cubic", g);
  o.report["central"] = q.central();
  o.report["f_symmetry_violations"] = bad.size();
  o.report["degree"] = deg;
  o.report["element"] = q.U->str(q.element);
  std::ostringstream s;
  s << g.name << ": C_3 of degree " << deg << ", central: " << (q.central() ? "yes" : "NO")
    << ", F-symmetry violations: " << bad.size() << "\n";
  o.text = s.str();
  return o;
}

Outcome casimir_amap(const Common& c) {
  auto g = load_algebra(c.algebra);
  auto A = a_map(g);
  auto ad = ad_commutes_with_A(g, A);
  Outcome o;
  o.ok = ad.ok();
  o.report = base_report("casimir amap", g);
  o.report["scalar"] = A.scalar;
  o.report["lambda"] = A.lambda ? json(rat_text(*A.lambda)) : json(nullptr);
  o.report["commutes_with_ad"] = ad.ok();
  json images = json::array();
  for (int j = 0; j < g.dim(); ++j) {
    json img = json::object();
    for (int i = 0; i < g.dim(); ++i) {
      const Rat& x = A.matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (x != 0) img[g.labels[static_cast<std::size_t>(i)]] = rat_text(x);
    }
    if (!img.empty()) images.push_back({{"x", g.labels[static_cast<std::size_t>(j)]}, {"A(x)", img}});
  }
  o.report["nonzero_images"] = images;
  std::ostringstream s;
  s << g.name << ": A ";
  if (A.scalar)
    s << "= " << *A.lambda << " * id";
  else
    s << "is not scalar (" << images.size() << " nonzero images)";
  s << ", commutes with ad: " << (ad.ok() ? "yes" : "NO") << "\n";
  o.text = s.str();
  return o;
}

// ------------------------------------------------------------------ loop

Outcome loop_check(const Common& c, int twist, int window, bool parity_grading) {
  auto g = load_algebra(c.algebra);
  if (parity_grading) g = with_parity_grading(std::move(g));
  auto rep = verify_km_centrality(g, twist, window, c.jobs);
  Outcome o;
  o.ok = rep.ok();
  o.report = base_report("loop check", g);
  o.report["twist"] = twist;
  o.report["window"] = window;
  o.report["lambda"] = rat_text(rep.lambda);
  o.report["ok"] = rep.ok();
  o.report["generators_checked"] = rep.checks.size();
  o.report["slices_checked"] = rep.slices_checked();
  json bad = json::array();
  LoopAlgebra L(g, twist);
  for (const auto& ch : rep.checks)
    if (!ch.ok()) bad.push_back({{"x", L.str(ch.x)}, {"tail_zero", ch.tail_zero}, {"linear_residual", L.str(ch.linear_residual)}});
  o.report["failures"] = bad;
  std::ostringstream s;
  s << g.name << " twist " << twist << " |m| <= " << window << ": " << rep.checks.size() << " generators, "
    << rep.slices_checked() << " slices, " << (rep.ok() ? "Omega central" : "NOT central") << "\n";
  o.text = s.str();
  return o;
}

// ------------------------------------------------------------------ shapovalov

struct ShapoArgs {
  std::vector<std::string> chi;
  std::string oracle;
  std::string vacuum = "clifford";
  std::string sigma = "ignore";
  std::string odd_rule = "literal";
  std::string lambda;
  std::string target = "poi03";
  int n = 1;
  int cutoff = 2;
  bool no_probe = false;
  bool raw_signs = false;
};

ShapovalovOptions shapo_options(const Common& c, const ShapoArgs& a) {
  ShapovalovOptions opt;
  opt.jobs = c.jobs;
  opt.sigma = a.sigma == "respect" ? SigmaMode::RespectSign : SigmaMode::IgnoreSign;
  if (a.vacuum == "trivial") opt.vacuum = Vacuum::Trivial;
  if (a.vacuum == "spinor") opt.vacuum = Vacuum::Spinor;
  return opt;
}

KKOptions kk_options(const ShapoArgs& a) {
  KKOptions k;
  if (a.odd_rule == "corrected") k.odd_rule = OddRootRule::Corrected;
  return k;
}

Outcome shapovalov_det_cmd(const Common& c, const ShapoArgs& a) {
  auto g = load_algebra(c.algebra);
  VermaContext ctx(g);
  auto opt = shapo_options(c, a);
  const bool bernstein = !ctx.odd_cartan().empty();
  std::optional<FormulaData> fd;
  if (!a.oracle.empty()) fd = formula_data(g);
  Outcome o;
  o.report = base_report("shapovalov det", g);
  o.report["form"] = bernstein ? "bernstein" : "plain";
  if (bernstein) o.report["vacuum"] = vacuum_name(opt.vacuum);
  o.report["sigma"] = a.sigma;
  json entries = json::array();
  std::ostringstream s;
  for (const auto& text : a.chi) {
    Weight chi = parse_weight(g, text);
    auto G = bernstein ? bsh_gram(ctx, chi, opt) : gram_matrix(ctx, chi, opt);
    std::vector<LinearForm> cand;
    if (fd) cand = kk_candidates(*fd, fd->coordinates(chi), kk_options(a));
    auto r = shapovalov_det(G, cand);
    json e = factor_json(r);
    e["chi"] = text;
    e["weight"] = weight_json(chi);
    e["basis_size"] = G.basis.size();
    e["gram_size"] = G.size();
    s << g.name << " chi = " << text << ": K = " << G.basis.size() << ", det = " << factor_text(r) << "\n";
    if (fd) {
      auto kk = kk_formula(*fd, chi, kk_options(a));
      auto p = proportional(r.reconstruct(), kk.reconstruct());
      e["oracle"] = {{"kind", "formula"}, {"odd_rule", a.odd_rule}, {"formula", factor_json(kk)}};
      e["oracle_match"] = p.has_value();
      if (p) e["oracle_ratio"] = rat_text(*p);
      if (!p) o.ok = false;
      s << "  formula: " << factor_text(kk) << "  -> " << (p ? "match up to " + rat_text(*p) : std::string("MISMATCH"))
        << "\n";
    }
    entries.push_back(e);
  }
  o.report["entries"] = entries;
  o.text = s.str();
  return o;
}

Outcome shapovalov_formula_cmd(const Common& c, const ShapoArgs& a) {
  auto g = load_algebra(c.algebra);
  auto fd = formula_data(g);
  Outcome o;
  o.report = base_report("shapovalov formula", g);
  json A = json::array();
  for (const auto& row : fd.A) {
    json r = json::array();
    for (const auto& x : row) r.push_back(rat_text(x));
    A.push_back(r);
  }
  o.report["cartan_matrix"] = A;
  json d = json::array();
  for (const auto& x : fd.d) d.push_back(rat_text(x));
  o.report["symmetrizer"] = d;
  o.report["odd_simple"] = fd.odd_simple;
  o.report["odd_rule"] = a.odd_rule;
  json entries = json::array();
  std::ostringstream s;
  for (const auto& text : a.chi) {
    Weight chi = parse_weight(g, text);
    auto coords = fd.coordinates(chi);
    auto r = kk_formula(fd, coords, kk_options(a));
    json e = factor_json(r);
    e["chi"] = text;
    e["coordinates"] = coords;
    e["partitions"] = partition_count(fd, coords);
    entries.push_back(e);
    s << g.name << " chi = " << text << ": " << factor_text(r) << "\n";
  }
  o.report["entries"] = entries;
  o.text = s.str();
  return o;
}

std::vector<Rat> parse_lambda(const std::string& text) {
  std::vector<Rat> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rat(item));
  return out;
}

Outcome shapovalov_singular_cmd(const Common& c, const ShapoArgs& a) {
  auto g = load_algebra(c.algebra);
  VermaContext ctx(g);
  auto lam = parse_lambda(a.lambda);
  if (lam.size() != ctx.U().cartan_variables().size())
    throw MathError(ErrorCode::InvalidParameters, "--lambda needs one value per even Cartan generator");
  Outcome o;
  o.report = base_report("shapovalov singular", g);
  json lj = json::object();
  for (std::size_t i = 0; i < lam.size(); ++i) lj[ctx.U().cartan_variables()[i]] = rat_text(lam[i]);
  o.report["lambda"] = lj;
  json entries = json::array();
  std::ostringstream s;
  for (const auto& text : a.chi) {
    auto sv = find_singular_vectors(ctx, lam, parse_weight(g, text));
    json vecs = json::array();
    for (const auto& v : sv.vectors) {
      PBWElement x;
      for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) x.add(sv.basis[i], v[i]);
      vecs.push_back(ctx.U().str(x));
    }
    entries.push_back({{"chi", text}, {"basis_size", sv.basis.size()}, {"vectors", vecs}});
    s << g.name << " chi = " << text << ": " << sv.vectors.size() << " singular vector(s)";
    for (const auto& v : vecs) s << "\n  " << v.get<std::string>();
    s << "\n";
  }
  o.report["entries"] = entries;
  o.text = s.str();
  return o;
}

Outcome shapovalov_conjecture_cmd(const Common& c, const ShapoArgs& a) {
  HarnessSpec spec;
  if (a.target == "poi03")
    spec.target = HarnessTarget::Poi03;
  else if (a.target == "poi05")
    spec.target = HarnessTarget::Poi05;
  else if (a.target == "poi_odd")
    spec.target = HarnessTarget::PoiOdd;
  else
    spec.target = HarnessTarget::LoopPoi;
  spec.n = a.n;
  spec.cutoff = a.cutoff;
  spec.options = shapo_options(c, a);
  spec.probe = !a.no_probe;
  spec.normalize_eps = !a.raw_signs;
  auto rep = conjecture_harness(spec, a.chi);
  Outcome o;
  o.report = {{"schema", kReportSchema}, {"command", "shapovalov conjecture"}, {"algebra", rep.algebra},
              {"target", rep.target}, {"vacuum", rep.vacuum}, {"variable_signs", rep.variable_signs}};
  json entries = json::array();
  std::ostringstream s;
  s << rep.algebra << " (" << rep.target << ", vacuum " << rep.vacuum << ")\n";
  for (const auto& E : rep.entries) {
    json e = factor_json(E.report);
    e["chi"] = E.chi_text;
    e["weight"] = weight_json(E.chi);
    e["basis_size"] = E.basis_size;
    e["gram_size"] = E.gram_size;
    json cand = json::array();
    for (const auto& x : E.candidates)
      cand.push_back({{"form", x.form.str()}, {"origin", x.origin}, {"condition", x.condition}, {"condition_holds", x.condition_holds}});
    e["candidates"] = cand;
    e["flags"] = E.flags;
    entries.push_back(e);
    s << "chi = " << E.chi_text << ": K = " << E.basis_size << ", Gram " << E.gram_size << ", " << E.seconds << " s\n  "
      << factor_text(E.report) << "\n";
    for (const auto& f : E.flags) s << "  flag: " << f << "\n";
  }
  o.report["entries"] = entries;
  o.text = s.str();
  return o;
}

// ------------------------------------------------------------------ output

void emit(const Common& c, const std::string& stem, const Outcome& o) {
  std::string dumped = o.report.dump(2) + "\n";
  if (c.json_stdout)
    std::cout << dumped;
  else
    std::cout << o.text;
  if (!c.out.empty()) {
    std::filesystem::create_directories(c.out);
    std::ofstream(std::filesystem::path(c.out) / (stem + ".json")) << dumped;
    std::ofstream(std::filesystem::path(c.out) / (stem + ".txt")) << o.text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lie superalgebras, Casimir elements and Shapovalov determinants in exact arithmetic"};
  app.require_subcommand(1);
  Common c;
  int exhaustive_limit = 64, twist = 1, window = 3;
  bool parity_grading = false;
  ShapoArgs sa;

  auto add_common = [&](CLI::App* cmd, bool needs_algebra = true) {
    auto* opt = cmd->add_option("--algebra,-a", c.algebra, "family string (sl(2|1), poi(0|4), ...) or spec file");
    if (needs_algebra) opt->required();
    cmd->add_option("--out,-o", c.out, "directory for <command>.json and <command>.txt");
    cmd->add_option("--jobs,-j", c.jobs, "worker threads (default: SUPERCAS_JOBS or 1)")->check(CLI::NonNegativeNumber);
    cmd->add_flag("--json", c.json_stdout, "print the JSON report instead of text");
  };
  auto add_chi = [&](CLI::App* cmd, bool required = true) {
    auto* o = cmd->add_option("--chi", sa.chi, "weights, e.g. 2a, a1+a2, 2*e1+e2, e'");
    if (required) o->required();
  };

  auto* alg = app.add_subcommand("algebra", "build or verify an algebra");
  alg->require_subcommand(1);
  auto* a_build = alg->add_subcommand("build", "structure constants, Cartan data and roots");
  add_common(a_build);
  auto* a_verify = alg->add_subcommand("verify", "super skew-symmetry, Jacobi, form invariance");
  add_common(a_verify);
  a_verify->add_option("--exhaustive-limit", exhaustive_limit, "exhaustive triple loop up to this dimension");

  auto* cas = app.add_subcommand("casimir", "Casimir elements and the operator A");
  cas->require_subcommand(1);
  auto* c_quad = cas->add_subcommand("quadratic", "Omega_0 and its centrality");
  add_common(c_quad);
  auto* c_cub = cas->add_subcommand("cubic", "C_3 for odd forms");
  add_common(c_cub);
  auto* c_amap = cas->add_subcommand("amap", "A(x) = sum b_ij [[x, e_i], e_j]");
  add_common(c_amap);

  auto* loop = app.add_subcommand("loop", "Kac-Moody extensions");
  loop->require_subcommand(1);
  auto* l_check = loop->add_subcommand("check", "centrality of Omega, slice by slice");
  add_common(l_check);
  l_check->add_option("--twist,-r", twist, "Z/r twist (needs a grading)")->check(CLI::PositiveNumber);
  l_check->add_option("--window,-w", window, "check t^m e_k for |m| <= window")->check(CLI::NonNegativeNumber);
  l_check->add_flag("--parity-grading", parity_grading, "grade by parity before twisting");

  auto* sh = app.add_subcommand("shapovalov", "Shapovalov forms and determinants");
  sh->require_subcommand(1);
  auto* s_det = sh->add_subcommand("det", "Gram determinant on a weight space");
  add_common(s_det);
  add_chi(s_det);
  s_det->add_option("--oracle", sa.oracle, "compare with the closed form")->check(CLI::IsMember({"formula"}));
  s_det->add_option("--vacuum", sa.vacuum, "Bernstein vacuum")->check(CLI::IsMember({"clifford", "trivial", "spinor"}));
  s_det->add_option("--sigma", sa.sigma, "anti-automorphism sign mode")->check(CLI::IsMember({"ignore", "respect"}));
  s_det->add_option("--odd-rule", sa.odd_rule, "closed-form odd root rule")->check(CLI::IsMember({"literal", "corrected"}));
  auto* s_form = sh->add_subcommand("formula", "closed-form product");
  add_common(s_form);
  add_chi(s_form);
  s_form->add_option("--odd-rule", sa.odd_rule, "odd root rule")->check(CLI::IsMember({"literal", "corrected"}));
  auto* s_sing = sh->add_subcommand("singular", "singular vectors of M^lambda");
  add_common(s_sing);
  add_chi(s_sing);
  s_sing->add_option("--lambda", sa.lambda, "values on the even Cartan generators, comma separated")->required();
  auto* s_conj = sh->add_subcommand("conjecture", "factor determinants over the conjectured families");
  add_common(s_conj, false);
  add_chi(s_conj);
  s_conj->add_option("--target", sa.target, "poi03, poi05, poi_odd, loop_poi")
      ->check(CLI::IsMember({"poi03", "poi05", "poi_odd", "loop_poi"}));
  s_conj->add_option("--n", sa.n, "poi_odd: poi(0|2n+1); loop_poi: poi(0|n)");
  s_conj->add_option("--cutoff", sa.cutoff, "loop_poi t-degree window");
  s_conj->add_option("--vacuum", sa.vacuum, "Bernstein vacuum")->check(CLI::IsMember({"clifford", "trivial", "spinor"}));
  s_conj->add_flag("--no-probe", sa.no_probe, "skip shifted probe forms");
  s_conj->add_flag("--raw-signs", sa.raw_signs, "read h_I literally instead of normalizing e_i(h_i) = 1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    Outcome o;
    std::string stem;
    if (a_build->parsed()) o = algebra_build(c), stem = "algebra_build";
    else if (a_verify->parsed()) o = algebra_verify(c, exhaustive_limit), stem = "algebra_verify";
    else if (c_quad->parsed()) o = casimir_quadratic(c), stem = "casimir_quadratic";
    else if (c_cub->parsed()) o = casimir_cubic(c), stem = "casimir_cubic";
    else if (c_amap->parsed()) o = casimir_amap(c), stem = "casimir_amap";
    else if (l_check->parsed()) o = loop_check(c, twist, window, parity_grading), stem = "loop_check";
    else if (s_det->parsed()) o = shapovalov_det_cmd(c, sa), stem = "shapovalov_det";
    else if (s_form->parsed()) o = shapovalov_formula_cmd(c, sa), stem = "shapovalov_formula";
    else if (s_sing->parsed()) o = shapovalov_singular_cmd(c, sa), stem = "shapovalov_singular";
    else if (s_conj->parsed()) o = shapovalov_conjecture_cmd(c, sa), stem = "shapovalov_conjecture";
    else return 1;
    emit(c, stem, o);
    return o.ok ? 0 : 2;
  } catch (const MathError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
