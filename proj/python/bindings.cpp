#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "orlicz/cli.hpp"
#include "orlicz/envelope.hpp"
#include "orlicz/renorm.hpp"
#include "orlicz/scalarfn.hpp"
#include "orlicz/seqspace.hpp"
#include "orlicz/twisted.hpp"
#include "orlicz/youngmap.hpp"

namespace py = pybind11;
using namespace orlicz;

namespace {

using ScalarEntries = std::vector<std::pair<std::int64_t, double>>;

ScalarEntries entries_of(const VecSeq& s) {
  ScalarEntries out;
  for (const auto& e : s.entries()) out.emplace_back(e.index, e.value[0]);
  return out;
}

Point point_of(const std::vector<double>& v) {
  if (v.empty() || v.size() > kMaxDim) throw SchemaError("points have 1 to 3 coordinates");
  Point x{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < v.size(); ++i) x[i] = v[i];
  return x;
}

PairSeq pair_of(const ScalarEntries& x, const ScalarEntries& y) {
  return PairSeq(VecSeq::scalar(x), VecSeq::scalar(y));
}

py::dict constants_dict(const ScalarConstants& c) {
  py::dict d;
  d["p"] = c.p;
  d["C"] = c.C.value();
  d["M"] = c.M.value();
  d["S"] = c.S;
  d["M_prime"] = c.M_prime;
  d["delta2"] = c.delta2.value();
  d["indices"] = py::make_tuple(c.indices.alpha_lower, c.indices.beta_upper);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Orlicz sequence-space norms, twisted sums and star-iterated renormings.";

  py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);
  py::register_exception<NumericFailure>(m, "NumericFailure", PyExc_ArithmeticError);
  py::register_exception<CertificateFailure>(m, "CertificateFailure", PyExc_RuntimeError);

  py::class_<OrliczFn>(m, "OrliczFn")
      .def_static("power", &OrliczFn::power, py::arg("p"))
      .def_static("power_log", &OrliczFn::power_log, py::arg("p"))
      .def_static("extension", &OrliczFn::extension, py::arg("base"), py::arg("q"))
      .def_static("table", &OrliczFn::table, py::arg("knots"), py::arg("values"))
      .def("__call__", &OrliczFn::operator(), py::arg("t"))
      .def_property_readonly("exponent", &OrliczFn::exponent);

  m.def("extend", [](const OrliczFn& f, double p) { return extend(f, p); }, py::arg("f"),
        py::arg("p"));
  m.def(
      "certify",
      [](const OrliczFn& f, double p) { return constants_dict(certify(f, p).constants); },
      py::arg("f"), py::arg("p"),
      "Certified scalar constants (C, M, S, M_prime, delta2, indices) for type exponent p.");

  m.def(
      "luxemburg_norm",
      [](const OrliczFn& f, const ScalarEntries& s) {
        return luxemburg_norm(f, VecSeq::scalar(s));
      },
      py::arg("f"), py::arg("entries"), "Luxemburg norm of [(index, value), ...].");

  py::class_<TwistedSpace>(m, "TwistedSpace")
      .def_static("z2", &TwistedSpace::z2, py::arg("psi_halfwidth") = 2.0,
                  py::arg("psi_resolution") = 41)
      .def_static("zp", &TwistedSpace::zp, py::arg("p"), py::arg("psi_halfwidth") = 2.0,
                  py::arg("psi_resolution") = 41)
      .def_static("kp_softclip", &TwistedSpace::kp_softclip, py::arg("p"), py::arg("b"),
                  py::arg("psi_halfwidth") = 2.0, py::arg("psi_resolution") = 41)
      .def_readonly("preset", &TwistedSpace::preset)
      .def("phi", [](const TwistedSpace& s, double x, double y) {
        return s.phi_kp(Point{x, y, 0.0});
      })
      .def("psi", [](const TwistedSpace& s, double x, double y) {
        return s.psi.map()(Point{x, y, 0.0});
      })
      .def_property_readonly("L_bound", [](const TwistedSpace& s) {
        return kalton_peck_bound(s.f.constants, s.theta);
      });

  m.def(
      "kp_F",
      [](const TwistedSpace& s, const ScalarEntries& y) {
        return entries_of(kp_F(s, VecSeq::scalar(y)));
      },
      py::arg("space"), py::arg("y"));
  m.def(
      "twisted_norm",
      [](const TwistedSpace& s, const ScalarEntries& x, const ScalarEntries& y) {
        return twisted_norm(s, pair_of(x, y));
      },
      py::arg("space"), py::arg("x"), py::arg("y"));
  m.def(
      "s_functional",
      [](const TwistedSpace& s, const ScalarEntries& x, const ScalarEntries& y, double k) {
        return s_functional(s, pair_of(x, y), k);
      },
      py::arg("space"), py::arg("x"), py::arg("y"), py::arg("k"));
  m.def(
      "quasiconvexity_constant",
      [](const TwistedSpace& s, std::uint64_t trials, std::uint64_t seed) {
        return quasiconvexity_constant(s.phi_kp, trials, seed).L_hat;
      },
      py::arg("space"), py::arg("trials"), py::arg("seed") = 1);
  m.def(
      "equivalence_certificate",
      [](TwistedSpace& s, std::uint64_t trials, std::int64_t dim_max, std::uint64_t seed) {
        const EquivalenceCertificate c = equivalence_certificate(s, trials, dim_max, seed);
        py::dict d;
        d["ratio"] = py::make_tuple(c.ratio_min, c.ratio_max);
        d["ratio_doubled"] = py::make_tuple(c.ratio_min_doubled, c.ratio_max_doubled);
        d["stable"] = c.stable;
        d["finite_positive"] = c.finite_positive;
        return d;
      },
      py::arg("space"), py::arg("trials"), py::arg("dim_max") = 64, py::arg("seed") = 1);

  py::class_<Pipeline>(m, "Pipeline")
      .def_property_readonly("alpha", [](const Pipeline& p) { return p.phitilde.gauge.alpha(); })
      .def_property_readonly("M", [](const Pipeline& p) { return p.phitilde.gauge.M(); })
      .def_property_readonly("n", [](const Pipeline& p) { return p.N.dim(); })
      .def("phitilde", [](const Pipeline& p, const std::vector<double>& x) {
        return p.phitilde.map(point_of(x));
      })
      .def("gauge", [](const Pipeline& p, const std::vector<double>& x) {
        return p.phitilde.gauge(point_of(x));
      })
      .def("N", [](const Pipeline& p, double x0, const std::vector<double>& x) {
        return p.N(x0, point_of(x));
      })
      .def("star_iterate", [](const Pipeline& p, const std::vector<std::vector<double>>& blocks) {
        BlockSeq xi{p.N.dim(), {}};
        for (const auto& b : blocks) xi.blocks.push_back(point_of(b));
        return star_iterate(p.N, xi);
      })
      .def("lambda_norm", [](const Pipeline& p, const std::vector<std::vector<double>>& blocks) {
        BlockSeq xi{p.N.dim(), {}};
        for (const auto& b : blocks) xi.blocks.push_back(point_of(b));
        return lambda_norm(p.N, xi);
      })
      .def("triangle_max_violation", [](const Pipeline& p, std::uint64_t samples,
                                        std::uint64_t seed) {
        return triangle_check(p.N, samples, seed).max_violation;
      }, py::arg("samples"), py::arg("seed") = 1);

  m.def("t2_pipeline", [](int n) { return t2_pipeline(n); }, py::arg("n") = 1);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs an orlicz-cert command; returns (exit_code, stdout, stderr).");
}
