#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "skewvnj/audit.hpp"
#include "skewvnj/banach_mazur.hpp"
#include "skewvnj/constants.hpp"
#include "skewvnj/errors.hpp"
#include "skewvnj/norm.hpp"
#include "skewvnj/report.hpp"

namespace py = pybind11;
using namespace skewvnj;

namespace {

using Pair = std::pair<double, double>;
Vec2 v2(Pair p) { return {p.first, p.second}; }
Pair tup(Vec2 v) { return {v.x1, v.x2}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Skew generalized Von Neumann-Jordan type constants of planar normed spaces";

  auto base = py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<UnsupportedDualError>(m, "UnsupportedDualError", PyExc_NotImplementedError);
  (void)base;

  py::class_<SearchConfig>(m, "SearchConfig")
      .def(py::init([](int grid_theta, int grid_t, int refine_rounds, int multistart,
                       std::uint64_t seed, double tol, int threads) {
             SearchConfig c{grid_theta, grid_t, refine_rounds, multistart, seed, tol, threads};
             c.validate();
             return c;
           }),
           py::arg("grid_theta") = 720, py::arg("grid_t") = 64, py::arg("refine_rounds") = 40,
           py::arg("multistart") = 8, py::arg("seed") = 0, py::arg("tol") = 1e-7,
           py::arg("threads") = 0)
      .def_readwrite("grid_theta", &SearchConfig::grid_theta)
      .def_readwrite("grid_t", &SearchConfig::grid_t)
      .def_readwrite("refine_rounds", &SearchConfig::refine_rounds)
      .def_readwrite("multistart", &SearchConfig::multistart)
      .def_readwrite("seed", &SearchConfig::seed)
      .def_readwrite("tol", &SearchConfig::tol)
      .def_readwrite("threads", &SearchConfig::threads);

  py::class_<Space>(m, "Space")
      .def_static("lp", &Space::lp, py::arg("p"))
      .def_static("weighted_lp", &Space::weighted_lp, py::arg("p"), py::arg("w1"), py::arg("w2"))
      .def_static("polytope",
                  [](const std::vector<Pair>& fs) {
                    std::vector<Vec2> v;
                    for (auto f : fs) v.push_back(v2(f));
                    return Space::polytope(std::move(v));
                  })
      .def_static("linear_image",
                  [](const Space& b, double a, double bb, double c, double d) {
                    return Space::linear_image(b, Mat2{a, bb, c, d});
                  },
                  py::arg("base"), py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"))
      .def_static("regular_polygon", &Space::regular_polygon)
      .def_static("parse", [](const std::string& d) { return parse_norm_descriptor(d); })
      .def("__call__", [](const Space& s, double x1, double x2) { return s(Vec2{x1, x2}); })
      .def("sphere_point", [](const Space& s, double theta) { return tup(sphere_point(s, theta)); })
      .def("dual", &dual_space)
      .def("dual_eval", [](const Space& s, double f1, double f2, const SearchConfig& c) {
             return dual_eval(s, Vec2{f1, f2}, c);
           },
           py::arg("f1"), py::arg("f2"), py::arg("config") = SearchConfig{})
      .def("describe", &describe)
      .def("__repr__", [](const Space& s) { return "Space(" + describe(s) + ")"; });

  py::enum_<ConstantKind>(m, "ConstantKind")
      .value("CP_MINUS_INF", ConstantKind::CpMinusInf)
      .value("CNJ_P", ConstantKind::CnjP)
      .value("CNJ", ConstantKind::Cnj)
      .value("JAMES", ConstantKind::James)
      .value("LYJ", ConstantKind::Lyj)
      .value("C_MINUS_INF", ConstantKind::CMinusInf)
      .value("CP_MINUS_INF_ZUO", ConstantKind::CpMinusInfZuo);

  py::class_<Query>(m, "Query")
      .def(py::init(&Query::make), py::arg("kind"), py::arg("lambda_") = 1.0, py::arg("mu") = 1.0,
           py::arg("p") = 2.0)
      .def_readonly("kind", &Query::kind)
      .def_readonly("lambda_", &Query::lambda)
      .def_readonly("mu", &Query::mu)
      .def_readonly("p", &Query::p);

  py::class_<Witness>(m, "Witness")
      .def_readonly("theta_x", &Witness::theta_x)
      .def_readonly("theta_y", &Witness::theta_y)
      .def_readonly("t", &Witness::t);

  py::class_<Estimate>(m, "Estimate")
      .def_readonly("value", &Estimate::value)
      .def_readonly("witness", &Estimate::witness)
      .def_readonly("samples_evaluated", &Estimate::samples_evaluated)
      .def_readonly("converged", &Estimate::converged);

  m.def("estimate_constant", &estimate_constant, py::arg("space"), py::arg("query"),
        py::arg("config") = SearchConfig{});
  m.def("universal_bounds", &universal_bounds);
  m.def("cp_lower_bound", &cp_lower_bound);

  py::class_<AuditParams>(m, "AuditParams")
      .def(py::init([](double l, double mu, double p) { return AuditParams{l, mu, p}; }),
           py::arg("lambda_") = 1.0, py::arg("mu") = 1.0, py::arg("p") = 2.0)
      .def_readwrite("lambda_", &AuditParams::lambda)
      .def_readwrite("mu", &AuditParams::mu)
      .def_readwrite("p", &AuditParams::p);

  py::class_<AuditRecord>(m, "AuditRecord")
      .def_readonly("theorem_id", &AuditRecord::theorem_id)
      .def_readonly("space_descr", &AuditRecord::space_descr)
      .def_readonly("params", &AuditRecord::params)
      .def_readonly("lhs", &AuditRecord::lhs)
      .def_readonly("rhs", &AuditRecord::rhs)
      .def_readonly("slack", &AuditRecord::slack)
      .def_readonly("passed", &AuditRecord::passed)
      .def_readonly("skipped", &AuditRecord::skipped)
      .def_property_readonly("regime", [](const AuditRecord& r) { return std::string(to_string(r.regime)); })
      .def_readonly("note", &AuditRecord::note);

  py::class_<AuditReport>(m, "AuditReport")
      .def_readonly("records", &AuditReport::records)
      .def_readonly("n_passed", &AuditReport::n_passed)
      .def_readonly("n_failed", &AuditReport::n_failed);

  m.def("run_full_audit",
        [](const std::vector<Space>& corpus, const std::vector<AuditParams>& grid,
           const SearchConfig& c) { return run_full_audit(corpus, grid, c); },
        py::arg("corpus"), py::arg("grid"), py::arg("config") = SearchConfig{});

  py::class_<BmEstimate>(m, "BmEstimate")
      .def_readonly("upper_bound", &BmEstimate::upper_bound)
      .def_readonly("converged", &BmEstimate::converged)
      .def_property_readonly("transform", [](const BmEstimate& b) {
        const Mat2& t = b.best_transform.matrix();
        return std::vector<double>{t.a, t.b, t.c, t.d};
      });
  m.def("bm_upper_bound",
        [](const Space& x, const Space& y, const SearchConfig& c) { return bm_upper_bound(x, y, c); },
        py::arg("x"), py::arg("y"), py::arg("config") = SearchConfig{});

  py::class_<PaperRow>(m, "PaperRow")
      .def_readonly("label", &PaperRow::label)
      .def_readonly("expected", &PaperRow::expected)
      .def_readonly("computed", &PaperRow::computed)
      .def_readonly("diff", &PaperRow::diff)
      .def_readonly("passed", &PaperRow::pass);
  m.def("reproduce_paper", &reproduce_paper, py::arg("config") = SearchConfig{});
  m.def("standard_corpus", &standard_corpus, py::arg("seed") = 0);
}
