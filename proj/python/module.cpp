#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "rbfpu/error.hpp"
#include "rbfpu/harness.hpp"
#include "rbfpu/model_io.hpp"
#include "rbfpu/selection.hpp"

namespace py = pybind11;
using namespace rbfpu;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

PointSet to_points(const Array& a) {
  if (a.ndim() == 1) return PointSet(1, std::vector<double>(a.data(), a.data() + a.size()));
  if (a.ndim() != 2) throw Error(ErrorCode::DimensionMismatch, "points must be a 1-D or 2-D array");
  return PointSet(static_cast<std::size_t>(a.shape(1)), std::vector<double>(a.data(), a.data() + a.size()));
}

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw Error(ErrorCode::DimensionMismatch, "values must be a 1-D array");
  return {a.data(), a.data() + a.size()};
}

Array to_array(const PointSet& p) {
  Array out({p.size(), p.dim()});
  std::copy(p.coords().begin(), p.coords().end(), out.mutable_data());
  return out;
}

Array to_array(const std::vector<double>& v) {
  Array out(v.size());
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

StoredModel fit(const Array& points, const Array& values, const std::string& mode, const std::string& kernel,
                std::size_t shapes, std::pair<double, double> shape_range, double h, std::size_t P,
                double eps, std::size_t min_nodes, bool rescale, std::size_t threads) {
  const Dataset raw(to_points(points), to_vector(values));
  ExperimentConfig config;
  apply_config_setting(config, "kernel", kernel);
  apply_config_setting(config, "mode", mode);
  config.n_shapes = shapes;
  config.shape_min = shape_range.first;
  config.shape_max = shape_range.second;
  config.upper_factor = h;
  config.n_radii = P;
  config.fixed_shape = eps;
  config.min_nodes = min_nodes;
  config.threads = threads;
  config.validate();
  auto [unit, transform] = rescale ? rescale_to_unit(raw)
                                   : std::pair{raw, DomainTransform::identity(raw.dim())};
  {
    py::gil_scoped_release release;
    PUModel model = config.run_variable ? fit_pu_variable(unit, config.variable_options())
                                        : fit_pu_fixed(unit, config.fixed_options());
    return {std::move(model), transform};
  }
}

Array evaluate_model(const StoredModel& m, const Array& points) {
  const PointSet raw = to_points(points);
  if (raw.dim() != m.model.dim()) throw Error(ErrorCode::DimensionMismatch, "query dimension differs from model");
  std::vector<double> v;
  {
    py::gil_scoped_release release;
    v = m.model.evaluate(m.transform.forward(raw));
  }
  return to_array(v);
}

py::list subdomain_info(const StoredModel& m) {
  py::list out;
  for (const auto& p : m.model.subdomains()) {
    py::dict d;
    d["center"] = p.center;
    d["radius"] = p.radius;
    d["shape"] = p.kernel.shape();
    d["radius_lower_bound"] = p.radius_lower_bound;
    d["loocv_score"] = p.loocv_score;
    d["members"] = p.members;
    out.append(d);
  }
  return out;
}

py::list benchmark(const std::vector<std::size_t>& sizes, const std::string& mode, const std::string& kernel,
                   std::size_t grid) {
  ExperimentConfig config;
  config.sizes = sizes;
  config.grid = grid;
  apply_config_setting(config, "mode", mode);
  apply_config_setting(config, "kernel", kernel);
  config.validate();
  std::vector<BenchmarkRow> rows;
  {
    py::gil_scoped_release release;
    rows = run_benchmark(config);
  }
  py::list out;
  for (const auto& r : rows) {
    py::dict d;
    d["N"] = r.n_nodes;
    if (r.variable) {
      d["rmse_var"] = r.variable->rmse;
      d["mae_var"] = r.variable->mae;
    }
    if (r.fixed) {
      d["rmse_fixed"] = r.fixed->rmse;
      d["mae_fixed"] = r.fixed->mae;
    }
    d["error"] = r.error;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_rbfpu, m) {
  m.doc() = "Partition-of-unity RBF interpolation with per-subdomain LOOCV parameter selection.";

  static py::exception<Error> error(m, "Error", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), (std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  m.def("halton", [](std::size_t n, std::size_t dim, std::size_t skip) { return to_array(halton_sequence(n, dim, skip)); },
        py::arg("n"), py::arg("dim"), py::arg("skip") = 0);
  m.def("product_function", [](const Array& x) {
    const PointSet p = to_points(x);
    std::vector<double> v(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) v[i] = product_function(p[i]);
    return to_array(v);
  });
  m.def("eval_grid", [](std::size_t g, std::size_t dim) { return to_array(eval_grid(g, dim)); },
        py::arg("g"), py::arg("dim") = 2);
  m.def("kernel", [](const std::string& tag, double shape, const Array& r) {
    const Kernel k(parse_kernel_tag(tag), shape);
    std::vector<double> v = to_vector(r);
    for (auto& x : v) x = k(x);
    return to_array(v);
  }, py::arg("tag"), py::arg("shape"), py::arg("r"));
  m.def("rippa_errors", [](const Array& c, const Array& d) { return to_array(rippa_errors(to_vector(c), to_vector(d))); },
        py::arg("coefficients"), py::arg("inverse_diagonal"));
  m.def("loocv_score", [](const Array& pts, const Array& values, const std::string& tag, double shape) {
    return loocv_score(to_points(pts), to_vector(values), Kernel(parse_kernel_tag(tag), shape));
  }, py::arg("points"), py::arg("values"), py::arg("kernel"), py::arg("shape"));

  py::class_<StoredModel>(m, "Model")
      .def_property_readonly("dim", [](const StoredModel& s) { return s.model.dim(); })
      .def_property_readonly("mode", [](const StoredModel& s) { return to_string(s.model.provenance().mode); })
      .def_property_readonly("kernel", [](const StoredModel& s) { return to_string(s.model.provenance().kernel); })
      .def_property_readonly("n_subdomains", [](const StoredModel& s) { return s.model.subdomains().size(); })
      .def_property_readonly("warnings", [](const StoredModel& s) { return s.model.provenance().warnings; })
      .def_property_readonly("offset", [](const StoredModel& s) { return s.transform.offset; })
      .def_property_readonly("scale", [](const StoredModel& s) { return s.transform.scale; })
      .def("subdomains", &subdomain_info)
      .def("evaluate", &evaluate_model, py::arg("points"))
      .def("__call__", &evaluate_model, py::arg("points"))
      .def("to_json", &serialize_model)
      .def_static("from_json", &deserialize_model, py::arg("text"))
      .def("save", [](const StoredModel& s, const std::filesystem::path& p) { save_model(p, s); }, py::arg("path"))
      .def_static("load", [](const std::filesystem::path& p) { return load_model(p); }, py::arg("path"));

  m.def("fit", &fit, py::arg("points"), py::arg("values"), py::arg("mode") = "variable",
        py::arg("kernel") = "imq", py::arg("shapes") = 30,
        py::arg("shape_range") = std::pair<double, double>{1e-3, 10.0}, py::arg("h") = 2.0, py::arg("P") = 6,
        py::arg("eps") = 0.6, py::arg("min_nodes") = kDefaultMinNodes, py::arg("rescale") = true,
        py::arg("threads") = 0);
  m.def("benchmark", &benchmark, py::arg("sizes"), py::arg("mode") = "both", py::arg("kernel") = "imq",
        py::arg("grid") = 40);
  m.attr("SCHEMA_VERSION") = kModelSchemaVersion;
}
