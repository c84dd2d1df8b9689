#include <pybind11/pybind11.h>
#include <pybind11/stl.h>


#include "wodzicki/config.hpp"
#include "wodzicki/errors.hpp"
#include "wodzicki/parallel.hpp"
#include "wodzicki/residue.hpp"
#include "wodzicki/verify.hpp"

namespace py = pybind11;
using namespace wodzicki;

namespace {

py::object to_python(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectral functionals of (noncommutative) tori";

  static py::exception<ConfigurationError> config_error(m, "ConfigurationError", PyExc_ValueError);
  static py::exception<NumericalError> numerical_error(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigurationError& e) {
      config_error(e.what());
    } catch (const ArgumentError& e) {
      config_error(e.what());
    } catch (const PreconditionError& e) {
      config_error(e.what());
    } catch (const NumericalError& e) {
      numerical_error(e.what());
    }
  });

  m.def("suite_names", &suite_names, "Names of the verification suites in criterion order.");

  m.def(
      "run_suite",
      [](const std::string& name) {
        nlohmann::json j;
        {
          py::gil_scoped_release release;
          j = suite_to_json(run_suite(name));
        }
        return to_python(j);
      },
      py::arg("name"), "Runs one suite and returns its checks as a dict.");

  m.def(
      "compute",
      [](const std::string& text, int depth) {
        nlohmann::json j;
        {
          py::gil_scoped_release release;
          RunConfig config = parse_run_config(text);
          if (depth > 0) config.options.depth = depth;
          j = run_compute(config);
        }
        return to_python(j);
      },
      py::arg("config"), py::arg("depth") = 0,
      "Evaluates a TOML or JSON run configuration given as text.");

  m.def(
      "sphere_moment",
      [](const std::vector<int>& alpha) {
        if (alpha.size() != 2 && alpha.size() != 4) throw ArgumentError("alpha needs 2 or 4 entries");
        MultiIndex a{};
        for (std::size_t i = 0; i < alpha.size(); ++i) a[i] = alpha[i];
        const SphereMoment s = sphere_moment(static_cast<int>(alpha.size()), a);
        return py::make_tuple(s.num, s.den, s.value());
      },
      py::arg("alpha"),
      "Integral of xi^alpha over the unit sphere as (num, den, value) with value = num/den * vol.");

  m.def("sphere_volume", &sphere_volume, py::arg("n"), "Volume of the unit sphere S^(n-1).");
  m.def("thread_count", &thread_count);
  m.def("set_thread_count", &set_thread_count, py::arg("n"));
}
