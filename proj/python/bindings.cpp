#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "supercas/algebra_io.hpp"
#include "supercas/casimir.hpp"
#include "supercas/loop_km.hpp"
#include "supercas/parallel.hpp"
#include "supercas/shapovalov.hpp"

namespace py = pybind11;
using namespace supercas;

namespace {

py::object fraction(const Rat& r) {
  static py::handle cls = py::object(py::module_::import("fractions").attr("Fraction")).release();
  return cls(r.get_str());
}

Rat rat_of(const py::handle& x) { return parse_rat(py::str(x).cast<std::string>()); }

py::list weight_list(const Weight& w) {
  py::list out;
  for (const auto& x : w) out.append(fraction(x));
  return out;
}

py::dict factor_dict(const FactorizationReport& r) {
  py::dict d;
  d["scalar"] = fraction(r.scalar);
  py::list fs;
  for (const auto& [f, k] : r.factors) fs.append(py::make_tuple(f.str(), k));
  d["factors"] = fs;
  d["cofactor"] = r.cofactor.str();
  d["fully_factored"] = r.fully_factored();
  d["det"] = r.expanded ? py::object(py::str(r.determinant.str())) : py::object(py::none());
  return d;
}

ShapovalovOptions shapo_options(const std::string& vacuum, const std::string& sigma, int jobs) {
  ShapovalovOptions opt;
  opt.jobs = jobs;
  if (sigma == "respect")
    opt.sigma = SigmaMode::RespectSign;
  else if (sigma != "ignore")
    throw MathError(ErrorCode::InvalidParameters, "sigma must be 'ignore' or 'respect'");
  if (vacuum == "trivial")
    opt.vacuum = Vacuum::Trivial;
  else if (vacuum == "spinor")
    opt.vacuum = Vacuum::Spinor;
  else if (vacuum != "clifford")
    throw MathError(ErrorCode::InvalidParameters, "vacuum must be 'clifford', 'trivial' or 'spinor'");
  return opt;
}

KKOptions kk_options(const std::string& odd_rule) {
  KKOptions k;
  if (odd_rule == "corrected")
    k.odd_rule = OddRootRule::Corrected;
  else if (odd_rule != "literal")
    throw MathError(ErrorCode::InvalidParameters, "odd_rule must be 'literal' or 'corrected'");
  return k;
}

HarnessTarget target_of(const std::string& t) {
  if (t == "poi03") return HarnessTarget::Poi03;
  if (t == "poi05") return HarnessTarget::Poi05;
  if (t == "poi_odd") return HarnessTarget::PoiOdd;
  if (t == "loop_poi") return HarnessTarget::LoopPoi;
  throw MathError(ErrorCode::InvalidParameters, "unknown target '" + t + "'");
}

py::dict sparse_dict(const SuperAlgebra& g, const SparseVec& v) {
  py::dict d;
  for (const auto& [i, c] : v) d[py::str(g.labels[static_cast<std::size_t>(i)])] = fraction(c);
  return d;
}

int label_index(const SuperAlgebra& g, const std::string& x) {
  int i = g.index_of(x);
  if (i < 0) throw MathError(ErrorCode::IndexOutOfRange, "unknown basis label '" + x + "'");
  return i;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact computations with Lie superalgebras, Casimir elements and Shapovalov determinants";

  static py::handle math_error =
      py::reinterpret_borrow<py::object>(PyErr_NewException("supercas.MathError", PyExc_ValueError, nullptr)).release();
  m.attr("MathError") = math_error;
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const MathError& e) {
      py::object inst = py::reinterpret_borrow<py::object>(math_error)(e.what());
      inst.attr("code") = error_code_name(e.code());
      PyErr_SetObject(math_error.ptr(), inst.ptr());
    }
  });

  py::class_<SuperAlgebra>(m, "Algebra")
      .def_readonly("name", &SuperAlgebra::name)
      .def_property_readonly("dim", &SuperAlgebra::dim)
      .def_readonly("labels", &SuperAlgebra::labels)
      .def_readonly("parities", &SuperAlgebra::parities)
      .def_property_readonly("cartan", [](const SuperAlgebra& g) {
        std::vector<std::string> out;
        for (int i : g.cartan) out.push_back(g.labels[static_cast<std::size_t>(i)]);
        return out;
      })
      .def_property_readonly("even_cartan_names", &SuperAlgebra::even_cartan_names)
      .def_readonly("notes", &SuperAlgebra::notes)
      .def_property_readonly("has_form", [](const SuperAlgebra& g) { return g.form.has_value(); })
      .def_property_readonly("form_parity", [](const SuperAlgebra& g) -> py::object {
        return g.form ? py::object(py::int_(g.form->parity)) : py::object(py::none());
      })
      .def("bracket",
           [](const SuperAlgebra& g, const std::string& x, const std::string& y) {
             return sparse_dict(g, g.bracket(label_index(g, x), label_index(g, y)));
           })
      .def("weight", [](const SuperAlgebra& g, const std::string& text) { return weight_list(parse_weight(g, text)); })
      .def("to_json", [](const SuperAlgebra& g, int indent) { return algebra_spec_json(g, indent); }, py::arg("indent") = 2)
      .def("with_parity_grading", [](const SuperAlgebra& g) { return with_parity_grading(SuperAlgebra(g)); })
      .def("__repr__", [](const SuperAlgebra& g) {
        int odd = 0;
        for (int p : g.parities) odd += p;
        return "<Algebra " + g.name + " dim " + std::to_string(g.dim() - odd) + "|" + std::to_string(odd) + ">";
      });

  m.def("build", [](const std::string& family) { return build_family(family); }, py::arg("family"),
        "Build a family such as 'sl(2|1)', 'q(2)' or 'poi(0|4)'.");
  m.def("load", [](const std::string& ref) { return load_algebra(ref); }, py::arg("ref"),
        "A spec file path or a family string.");
  m.def("from_json", [](const std::string& text) { return parse_algebra_spec(text); }, py::arg("text"));

  m.def(
      "verify",
      [](const SuperAlgebra& g, int exhaustive_limit, int jobs) {
        VerifyOptions vo;
        vo.exhaustive_limit = exhaustive_limit;
        vo.jobs = resolve_jobs(jobs);
        VerifyReport rep;
        {
          py::gil_scoped_release nogil;
          rep = verify_algebra(g, vo);
        }
        py::dict d;
        d["ok"] = rep.ok();
        d["exhaustive"] = rep.exhaustive;
        d["triples_checked"] = rep.triples_checked;
        d["total_violations"] = rep.total_violations;
        py::list v;
        for (const auto& x : rep.violations) v.append(py::make_tuple(x.kind, x.i, x.j, x.k, x.detail));
        d["violations"] = v;
        d["summary"] = rep.summary();
        return d;
      },
      py::arg("algebra"), py::arg("exhaustive_limit") = 64, py::arg("jobs") = 0);

  m.def(
      "omega0",
      [](const SuperAlgebra& g, int jobs) {
        CasimirOptions co;
        co.jobs = jobs;
        auto q = omega0(g, co);
        py::dict d;
        d["central"] = q.central();
        d["b_identity_violations"] = check_b_identity(g, q.b).size();
        d["element"] = q.U->str(q.element);
        d["hc"] = q.U->hc(q.element).str();
        return d;
      },
      py::arg("algebra"), py::arg("jobs") = 0);

  m.def(
      "c3",
      [](const SuperAlgebra& g, int jobs) {
        CasimirOptions co;
        co.jobs = jobs;
        auto q = c3(g, co);
        py::dict d;
        d["central"] = q.central();
        d["f_symmetry_violations"] = check_f_symmetry(g, q).size();
        d["degree"] = q.element.degree();
        d["element"] = q.U->str(q.element);
        return d;
      },
      py::arg("algebra"), py::arg("jobs") = 0);

  m.def(
      "a_map",
      [](const SuperAlgebra& g) {
        auto A = a_map(g);
        py::dict d;
        d["scalar"] = A.scalar;
        d["lambda"] = A.lambda ? fraction(*A.lambda) : py::object(py::none());
        d["commutes_with_ad"] = ad_commutes_with_A(g, A).ok();
        py::list rows;
        for (const auto& row : A.matrix) {
          py::list r;
          for (const auto& x : row) r.append(fraction(x));
          rows.append(r);
        }
        d["matrix"] = rows;
        return d;
      },
      py::arg("algebra"));

  m.def(
      "km_check",
      [](const SuperAlgebra& g, int twist, int window, int jobs) {
        KMCentralityReport rep;
        {
          py::gil_scoped_release nogil;
          rep = verify_km_centrality(g, twist, window, jobs);
        }
        py::dict d;
        d["ok"] = rep.ok();
        d["lambda"] = fraction(rep.lambda);
        d["generators_checked"] = rep.checks.size();
        d["slices_checked"] = rep.slices_checked();
        std::size_t bad = 0;
        for (const auto& ch : rep.checks) bad += ch.ok() ? 0 : 1;
        d["failures"] = bad;
        return d;
      },
      py::arg("algebra"), py::arg("twist") = 1, py::arg("window") = 3, py::arg("jobs") = 0);

  m.def(
      "shapovalov_det",
      [](const SuperAlgebra& g, const std::string& chi, const std::string& vacuum, const std::string& sigma,
         const std::string& oracle_rule, int jobs) {
        VermaContext ctx(g);
        auto opt = shapo_options(vacuum, sigma, jobs);
        const bool bernstein = !ctx.odd_cartan().empty();
        Weight w = parse_weight(g, chi);
        std::optional<FormulaData> fd;
        std::vector<LinearForm> cand;
        if (!oracle_rule.empty()) {
          fd = formula_data(g);
          cand = kk_candidates(*fd, fd->coordinates(w), kk_options(oracle_rule));
        }
        ShapovalovGram G;
        FactorizationReport r;
        {
          py::gil_scoped_release nogil;
          G = bernstein ? bsh_gram(ctx, w, opt) : gram_matrix(ctx, w, opt);
          r = shapovalov_det(G, cand);
        }
        py::dict d = factor_dict(r);
        d["weight"] = weight_list(w);
        d["bernstein"] = bernstein;
        d["basis_size"] = G.basis.size();
        d["gram_size"] = G.size();
        d["variables"] = G.variables;
        if (fd) {
          auto kk = kk_formula(*fd, w, kk_options(oracle_rule));
          auto p = proportional(r.reconstruct(), kk.reconstruct());
          d["formula"] = factor_dict(kk);
          d["oracle_ratio"] = p ? fraction(*p) : py::object(py::none());
        }
        return d;
      },
      py::arg("algebra"), py::arg("chi"), py::arg("vacuum") = "clifford", py::arg("sigma") = "ignore",
      py::arg("oracle") = "", py::arg("jobs") = 0,
      "Factored Gram determinant on the weight space chi. With oracle='literal' or "
      "'corrected' the closed form is computed too and compared up to a scalar.");

  m.def(
      "kk_formula",
      [](const SuperAlgebra& g, const std::string& chi, const std::string& odd_rule) {
        auto fd = formula_data(g);
        Weight w = parse_weight(g, chi);
        auto coords = fd.coordinates(w);
        py::dict d = factor_dict(kk_formula(fd, coords, kk_options(odd_rule)));
        d["coordinates"] = coords;
        d["partitions"] = partition_count(fd, coords);
        return d;
      },
      py::arg("algebra"), py::arg("chi"), py::arg("odd_rule") = "literal");

  m.def(
      "singular_vectors",
      [](const SuperAlgebra& g, const std::vector<py::object>& lambda, const std::string& chi) {
        std::vector<Rat> lam;
        for (const auto& x : lambda) lam.push_back(rat_of(x));
        VermaContext ctx(g);
        if (lam.size() != ctx.U().cartan_variables().size())
          throw MathError(ErrorCode::InvalidParameters, "lambda needs one value per even Cartan generator");
        auto sv = find_singular_vectors(ctx, lam, parse_weight(g, chi));
        std::vector<std::string> out;
        for (const auto& v : sv.vectors) {
          PBWElement x;
          for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0) x.add(sv.basis[i], v[i]);
          out.push_back(ctx.U().str(x));
        }
        return out;
      },
      py::arg("algebra"), py::arg("lam"), py::arg("chi"));

  m.def(
      "conjecture",
      [](const std::string& target, const std::vector<std::string>& chis, int n, int cutoff, bool probe,
         bool normalize_signs, const std::string& vacuum, int jobs) {
        HarnessSpec spec;
        spec.target = target_of(target);
        spec.n = n;
        spec.cutoff = cutoff;
        spec.probe = probe;
        spec.normalize_eps = normalize_signs;
        spec.options = shapo_options(vacuum, "ignore", jobs);
        HarnessReport rep;
        {
          py::gil_scoped_release nogil;
          rep = conjecture_harness(spec, chis);
        }
        py::dict d;
        d["algebra"] = rep.algebra;
        d["target"] = rep.target;
        d["vacuum"] = rep.vacuum;
        d["variable_signs"] = rep.variable_signs;
        py::list entries;
        for (const auto& E : rep.entries) {
          py::dict e = factor_dict(E.report);
          e["chi"] = E.chi_text;
          e["basis_size"] = E.basis_size;
          e["gram_size"] = E.gram_size;
          py::list cand;
          for (const auto& c : E.candidates)
            cand.append(py::dict(py::arg("form") = c.form.str(), py::arg("origin") = c.origin,
                                 py::arg("condition") = c.condition, py::arg("condition_holds") = c.condition_holds));
          e["candidates"] = cand;
          e["flags"] = E.flags;
          entries.append(e);
        }
        d["entries"] = entries;
        return d;
      },
      py::arg("target"), py::arg("chis"), py::arg("n") = 1, py::arg("cutoff") = 2, py::arg("probe") = true,
      py::arg("normalize_signs") = true, py::arg("vacuum") = "clifford", py::arg("jobs") = 0);
}
