#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "diamatch/campaign.hpp"
#include "diamatch/error.hpp"
#include "diamatch/intersection.hpp"
#include "diamatch/kgon.hpp"
#include "diamatch/lemma_lab.hpp"
#include "diamatch/matching.hpp"
#include "diamatch/report.hpp"

namespace py = pybind11;
using namespace diamatch;

namespace pybind11::detail {

/// Points cross the boundary as (x, y) tuples.
template <>
struct type_caster<Point2> {
  PYBIND11_TYPE_CASTER(Point2, const_name("tuple[float, float]"));

  bool load(handle src, bool) {
    if (!isinstance<sequence>(src)) return false;
    const auto seq = reinterpret_borrow<sequence>(src);
    if (seq.size() != 2) return false;
    value = {seq[0].cast<double>(), seq[1].cast<double>()};
    return true;
  }

  static handle cast(Point2 p, return_value_policy, handle) { return py::make_tuple(p.x, p.y).release(); }
};

}  // namespace pybind11::detail

namespace {

Tolerance make_tol(double rel, double abs) {
  const Tolerance tol{rel, abs};
  if (!tol.valid()) throw ValidationError("bad_tolerance", "tolerance needs rel > 0 and abs >= 0");
  return tol;
}

}  // namespace

PYBIND11_MODULE(_diamatch, m) {
  m.doc() = "Maximum-weight red-blue matchings and their diametral disks";

  static py::exception<ValidationError> validation_error(m, "ValidationError", PyExc_ValueError);
  static py::exception<GeometryError> geometry_error(m, "GeometryError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      py::object err = py::reinterpret_borrow<py::object>(validation_error)(e.what());
      err.attr("code") = e.code();
      PyErr_SetObject(validation_error.ptr(), err.ptr());
    } catch (const GeometryError& e) {
      py::set_error(geometry_error, e.what());
    }
  });

  py::class_<Tolerance>(m, "Tolerance")
      .def(py::init(&make_tol), py::arg("rel") = 1e-9, py::arg("abs") = 0.0)
      .def_readonly("rel", &Tolerance::rel)
      .def_readonly("abs", &Tolerance::abs)
      .def("band", &Tolerance::band, py::arg("scale"));

  py::class_<Disk>(m, "Disk")
      .def(py::init([](Point2 c, double r) { return Disk{c, r}; }), py::arg("center"), py::arg("radius"))
      .def_readwrite("center", &Disk::center)
      .def_readwrite("radius", &Disk::radius)
      .def("slack", &Disk::slack, py::arg("point"))
      .def("__repr__", [](const Disk& d) {
        return py::str("Disk(center=({}, {}), radius={})").format(d.center.x, d.center.y, d.radius);
      });

  py::class_<Instance>(m, "Instance")
      .def(py::init([](std::vector<Point2> reds, std::vector<Point2> blues, bool allow_duplicates) {
             Instance inst{std::move(reds), std::move(blues), allow_duplicates};
             inst.validate();
             return inst;
           }),
           py::arg("reds"), py::arg("blues"), py::arg("allow_duplicates") = false)
      .def_readonly("reds", &Instance::reds)
      .def_readonly("blues", &Instance::blues)
      .def_readonly("allow_duplicates", &Instance::allow_duplicates)
      .def("diameter", &Instance::diameter)
      .def("__len__", &Instance::size);

  py::class_<Matching>(m, "Matching")
      .def_readonly("pairs", &Matching::pairs)
      .def_readonly("weight", &Matching::weight)
      .def("__eq__", [](const Matching& a, const Matching& b) { return a == b; })
      .def("__repr__", [](const Matching& mt) {
        return py::str("Matching(pairs={}, weight={})").format(mt.pairs, mt.weight);
      });

  py::class_<WitnessReport>(m, "WitnessReport")
      .def_readonly("feasible", &WitnessReport::feasible)
      .def_readonly("boundary", &WitnessReport::boundary)
      .def_readonly("witness", &WitnessReport::witness)
      .def_readonly("slack", &WitnessReport::slack)
      .def_readonly("certificate", &WitnessReport::certificate)
      .def_readonly("band", &WitnessReport::band);

  py::class_<Lemma1Report>(m, "Lemma1Report")
      .def_readonly("is_max_for_four", &Lemma1Report::is_max_for_four)
      .def_readonly("projection_ok", &Lemma1Report::projection_ok)
      .def_readonly("straight_sum", &Lemma1Report::straight_sum)
      .def_readonly("crossed_sum", &Lemma1Report::crossed_sum)
      .def_readonly("x_q1", &Lemma1Report::x_q1)
      .def_readonly("x_q2", &Lemma1Report::x_q2)
      .def("implication_holds", &Lemma1Report::implication_holds);

  py::class_<RegularKGon>(m, "RegularKGon")
      .def_readonly("k", &RegularKGon::k)
      .def_readonly("center", &RegularKGon::center)
      .def_readonly("circumradius", &RegularKGon::circumradius)
      .def_readonly("orientation", &RegularKGon::orientation)
      .def("vertices", &RegularKGon::vertices)
      .def("area", &RegularKGon::area)
      .def("boundary_distance", &RegularKGon::boundary_distance, py::arg("point"));

  py::class_<Separation>(m, "Separation")
      .def_readonly("disjoint", &Separation::disjoint)
      .def_readonly("gap", &Separation::gap);

  py::class_<KGonPairing>(m, "KGonPairing")
      .def_readonly("pairs", &KGonPairing::pairs)
      .def_readonly("kgons", &KGonPairing::kgons)
      .def_readonly("separation", &KGonPairing::separation);

  py::class_<SquareReport>(m, "SquareReport")
      .def_readonly("k", &SquareReport::k)
      .def_readonly("side", &SquareReport::side)
      .def_readonly("instance", &SquareReport::instance)
      .def_readonly("matchings", &SquareReport::matchings)
      .def_readonly("all_disjoint", &SquareReport::all_disjoint);

  const Tolerance dflt;
  m.def("diametral_disk", [](Point2 p, Point2 q) { return diametral_disk(p, q).disk; }, py::arg("p"), py::arg("q"));
  m.def("orient2d_sign", &orient2d_sign, py::arg("a"), py::arg("b"), py::arg("c"));
  m.def("max_matching", &max_matching, py::arg("instance"), py::arg("tol") = dflt);
  m.def("brute_force_max_matching", &brute_force_max_matching, py::arg("instance"), py::arg("tol") = dflt);
  m.def("make_matching", &make_matching, py::arg("instance"), py::arg("pairs"));
  m.def("diametral_disks",
        [](const Instance& inst, const Matching& mt) { return DiskFamily::from_matching(inst, mt).disks; },
        py::arg("instance"), py::arg("matching"));
  m.def("pairwise_intersects", py::overload_cast<const Disk&, const Disk&, const Tolerance&>(&pairwise_intersects),
        py::arg("d1"), py::arg("d2"), py::arg("tol") = dflt);
  m.def("triple_intersects", &triple_intersects, py::arg("d1"), py::arg("d2"), py::arg("d3"), py::arg("tol") = dflt);
  m.def("common_intersection_witness",
        [](const std::vector<Disk>& disks, const Tolerance& tol) { return common_intersection_witness(disks, tol); },
        py::arg("disks"), py::arg("tol") = dflt);
  m.def("check_lemma1", &check_lemma1, py::arg("p1"), py::arg("p2"), py::arg("q1"), py::arg("q2"),
        py::arg("tol") = dflt);
  m.def("diametral_kgon", &diametral_kgon, py::arg("p"), py::arg("q"), py::arg("k"), py::arg("tol") = dflt);
  m.def("kgon_disjoint", &kgon_disjoint, py::arg("g1"), py::arg("g2"), py::arg("tol") = dflt);
  m.def("square_counterexample", &square_counterexample, py::arg("k"), py::arg("side") = 2.0,
        py::arg("tol") = dflt);
  m.def("generate_instance",
        [](std::size_t n, std::uint64_t seed, const std::string& dist) {
          return generate_instance(n, seed, parse_distribution(dist));
        },
        py::arg("n"), py::arg("seed"), py::arg("distribution") = "uniform");
  m.def("read_instance", [](const std::string& path) { return read_instance_file(path).instance; },
        py::arg("path"));
  m.def("match_report_json",
        [](const std::string& path, const Tolerance& tol) {
          return match_report_json(run_match(read_instance_file(path), tol));
        },
        py::arg("path"), py::arg("tol") = dflt);
  m.def("verify_report_json",
        [](std::size_t n_min, std::size_t n_max, std::uint64_t seed_start, std::uint64_t seeds,
           const std::string& dist, const Tolerance& tol, unsigned jobs) {
          VerifyOptions o;
          o.n_min = n_min;
          o.n_max = n_max;
          o.seed_start = seed_start;
          o.seeds = seeds;
          o.distribution = parse_distribution(dist);
          o.tol = tol;
          o.jobs = jobs;
          VerifyReport report;
          {
            py::gil_scoped_release release;
            report = run_verify(o);
          }
          return verify_report_json(report, false);
        },
        py::arg("n_min") = 2, py::arg("n_max") = 16, py::arg("seed_start") = 0, py::arg("seeds") = 100,
        py::arg("distribution") = "uniform", py::arg("tol") = dflt, py::arg("jobs") = 1);
  m.def("suite_names", &suite_names);
  m.def("run_suite",
        [](const std::string& name, std::uint64_t cases, std::uint64_t seed_start, const Tolerance& tol) {
          SuiteOptions o;
          o.seed_start = seed_start;
          o.tol = tol;
          const SuiteResult r = run_suite(name, cases, o);
          py::dict metrics;
          for (const auto& [key, value] : r.metrics) metrics[py::str(key)] = value;
          py::dict out;
          out["name"] = r.name;
          out["cases"] = r.cases;
          out["passed"] = r.passed;
          out["failed"] = r.failed;
          out["skipped"] = r.skipped;
          out["metrics"] = metrics;
          return out;
        },
        py::arg("name"), py::arg("cases") = 100, py::arg("seed_start") = 0, py::arg("tol") = dflt);
}
