#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "nhmms/harness.hpp"
#include "nhmms/maximal.hpp"
#include "nhmms/operators.hpp"
#include "nhmms/parallel.hpp"

namespace py = pybind11;
using namespace nhmms;

namespace {

using Values = std::vector<double>;

py::array_t<double> to_array(const SpaceFunction& f) {
  return py::array_t<double>(static_cast<py::ssize_t>(f.size()), f.values().data());
}

py::object to_python(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json from_python(const py::object& o) {
  return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

KernelSpec kernel(std::size_t m, double alpha, const std::string& family) {
  KernelSpec k;
  k.family = family;
  k.m = m;
  k.alpha = alpha;
  k.validate();
  return k;
}

std::vector<SpaceFunction> bind_all(const MetricMeasureSpace& s, const std::vector<Values>& vs) {
  std::vector<SpaceFunction> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.emplace_back(s, v);
  return out;
}

}  // namespace

PYBIND11_MODULE(_nhmms, m) {
  m.doc() = "Finite metric measure spaces, fractional integrals and their commutators";

  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<SuiteError>(m, "SuiteError", PyExc_ValueError);

  py::class_<MetricMeasureSpace>(m, "Space")
      .def(py::init([](const std::vector<Values>& dist, Values masses) {
             Values flat;
             for (const auto& row : dist) {
               if (row.size() != dist.size()) throw SpaceError("distance matrix must be square");
               flat.insert(flat.end(), row.begin(), row.end());
             }
             return MetricMeasureSpace(std::move(flat), std::move(masses));
           }),
           py::arg("distance_matrix"), py::arg("masses"))
      .def_static("from_points", &MetricMeasureSpace::from_points, py::arg("points"), py::arg("masses"))
      .def_property_readonly("size", &MetricMeasureSpace::size)
      .def("__len__", &MetricMeasureSpace::size)
      .def_property_readonly("id", &MetricMeasureSpace::id)
      .def_property_readonly("masses", [](const MetricMeasureSpace& s) {
        return Values(s.masses().begin(), s.masses().end());
      })
      .def_property_readonly("admissible_radii", [](const MetricMeasureSpace& s) {
        return Values(s.admissible_radii().begin(), s.admissible_radii().end());
      })
      .def_property_readonly("diameter", &MetricMeasureSpace::diameter)
      .def_property_readonly("total_mass", &MetricMeasureSpace::total_mass)
      .def("distance", &MetricMeasureSpace::distance)
      .def("ball", [](const MetricMeasureSpace& s, Index c, double r) { return ball_members(s, {c, r}); })
      .def("measure", [](const MetricMeasureSpace& s, Index c, double r) { return measure(s, Ball{c, r}); })
      .def("__repr__", [](const MetricMeasureSpace& s) {
        return "<Space n=" + std::to_string(s.size()) + " id=" + s.id() + ">";
      });

  py::class_<DominatingFunction>(m, "Lambda")
      .def_static("power", &DominatingFunction::power, py::arg("C"), py::arg("k"))
      .def_static("floored_power", &DominatingFunction::floored_power, py::arg("C"), py::arg("k"),
                  py::arg("floors"))
      .def_static("per_point_power", &DominatingFunction::per_point_power, py::arg("scales"), py::arg("k"))
      .def_static("two_power", &DominatingFunction::two_power, py::arg("C"), py::arg("k"), py::arg("k2"))
      .def("__call__", &DominatingFunction::operator(), py::arg("x"), py::arg("r"))
      .def_property_readonly("family", [](const DominatingFunction& l) { return to_string(l.family()); })
      .def_property_readonly("C", &DominatingFunction::C)
      .def_property_readonly("k", &DominatingFunction::k);

  m.def("set_threads", &set_thread_count, py::arg("n"));
  m.def("threads", &thread_count);

  m.def(
      "generate",
      [](const std::string& family, int dim, int side, double spacing, int level,
         double exponent, int count) {
        auto g = generate({space_family_from_string(family), dim, side, spacing, level, exponent, count});
        return py::make_tuple(std::move(g.space), std::move(g.lambda));
      },
      py::arg("family"), py::arg("dim") = 1, py::arg("side") = 4, py::arg("spacing") = 1.0,
      py::arg("level") = 3, py::arg("exponent") = 1.0, py::arg("count") = 16);

  m.def("load_space", [](const std::filesystem::path& p) {
    auto sf = load_space(p);
    return py::make_tuple(std::move(sf.space), std::move(sf.lambda));
  });
  m.def("save_space", [](const std::filesystem::path& p, const MetricMeasureSpace& s, const DominatingFunction& l) {
    write_json(p, space_to_json(s, l));
  });

  m.def(
      "check_upper_doubling",
      [](const MetricMeasureSpace& s, const DominatingFunction& l, double epsilon, std::size_t samples,
         std::uint64_t seed, std::optional<double> beta0) {
        DoublingCheckOptions o;
        o.epsilon = epsilon;
        o.weak_growth_samples = samples;
        o.seed = seed;
        o.beta0 = beta0;
        return to_python(to_json(check_upper_doubling(s, l, o)));
      },
      py::arg("space"), py::arg("lam"), py::arg("epsilon") = 0.5, py::arg("samples") = 10000,
      py::arg("seed") = 1, py::arg("beta0") = py::none());
  m.def("default_beta0", &default_beta0, py::arg("space"), py::arg("lam"));
  m.def(
      "k_coefficient",
      [](const MetricMeasureSpace& s, const DominatingFunction& l, Index c, double r, Index c2, double r2,
         double gamma) { return k_coefficient(s, l, {c, r}, {c2, r2}, gamma); },
      py::arg("space"), py::arg("lam"), py::arg("center"), py::arg("radius"), py::arg("outer_center"),
      py::arg("outer_radius"), py::arg("gamma") = 0.0);

  m.def(
      "lp_norm", [](const MetricMeasureSpace& s, const Values& f, double p) { return lp_norm(s, {s, f}, p); },
      py::arg("space"), py::arg("f"), py::arg("p"));
  m.def(
      "rbmo_norm",
      [](const MetricMeasureSpace& s, const DominatingFunction& l, const Values& b, double rho, double p,
         std::optional<double> beta0) { return rbmo_norm(s, l, {s, b}, rho, p, beta0); },
      py::arg("space"), py::arg("lam"), py::arg("b"), py::arg("rho") = 6.0, py::arg("p") = 1.0,
      py::arg("beta0") = py::none());

  m.def(
      "fractional_integral",
      [](const MetricMeasureSpace& s, const DominatingFunction& l, const Values& f, double alpha, bool centered) {
        const SpaceFunction g(s, f);
        return to_array(centered ? fractional_integral_centered(s, l, alpha, g) : fractional_integral(s, l, alpha, g));
      },
      py::arg("space"), py::arg("lam"), py::arg("f"), py::arg("alpha"), py::arg("centered") = false);
  m.def(
      "multilinear_fractional_integral",
      [](const MetricMeasureSpace& s, const DominatingFunction& l, const std::vector<Values>& fs, double alpha,
         const std::string& family) {
        return to_array(multilinear_fractional_integral(s, l, kernel(fs.size(), alpha, family), bind_all(s, fs)));
      },
      py::arg("space"), py::arg("lam"), py::arg("fs"), py::arg("alpha"), py::arg("kernel") = "standard");
  m.def(
      "commutator",
      [](const MetricMeasureSpace& s, const DominatingFunction& l, const std::vector<Values>& bs,
         const std::vector<Values>& fs, double alpha, const std::string& family) {
        return to_array(commutator(s, l, kernel(fs.size(), alpha, family), bind_all(s, bs), bind_all(s, fs)));
      },
      py::arg("space"), py::arg("lam"), py::arg("bs"), py::arg("fs"), py::arg("alpha"),
      py::arg("kernel") = "standard");
  m.def(
      "single_commutator",
      [](const MetricMeasureSpace& s, const DominatingFunction& l, int slot, const Values& b, const Values& f1,
         const Values& f2, double alpha) {
        return to_array(single_commutator(s, l, kernel(2, alpha, "standard"), slot, {s, b}, {s, f1}, {s, f2}));
      },
      py::arg("space"), py::arg("lam"), py::arg("slot"), py::arg("b"), py::arg("f1"), py::arg("f2"),
      py::arg("alpha"));

  m.def(
      "sharp_maximal",
      [](const MetricMeasureSpace& s, const DominatingFunction& l, const Values& f, double beta,
         std::optional<double> beta0) { return to_array(sharp_maximal(s, l, {s, f}, beta, beta0)); },
      py::arg("space"), py::arg("lam"), py::arg("f"), py::arg("beta"), py::arg("beta0") = py::none());
  m.def(
      "doubling_maximal",
      [](const MetricMeasureSpace& s, const Values& f, double beta0) {
        return to_array(doubling_maximal(s, {s, f}, beta0));
      },
      py::arg("space"), py::arg("f"), py::arg("beta0"));
  m.def(
      "fractional_maximal",
      [](const MetricMeasureSpace& s, const Values& f, double r, double rho, double alpha) {
        return to_array(fractional_maximal(s, {s, f}, r, rho, alpha));
      },
      py::arg("space"), py::arg("f"), py::arg("r"), py::arg("rho") = 5.0, py::arg("alpha") = 0.0);

  m.def(
      "run_suite",
      [](const py::object& config, const std::filesystem::path& base_dir) {
        auto r = run_suite(from_python(config), base_dir);
        return py::make_tuple(to_python(r.report), r.pass);
      },
      py::arg("config"), py::arg("base_dir") = std::filesystem::path{});
}
