#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "despeckle/divergence.hpp"
#include "despeckle/errors.hpp"
#include "despeckle/filters.hpp"
#include "despeckle/gamma_model.hpp"
#include "despeckle/metrics.hpp"
#include "despeckle/montecarlo.hpp"
#include "despeckle/phantom.hpp"

namespace py = pybind11;
using namespace despeckle;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

IntensityRaster to_raster(const Array& a) {
  if (a.ndim() != 2) throw DomainError("expected a 2-D array");
  const auto h = static_cast<std::size_t>(a.shape(0));
  const auto w = static_cast<std::size_t>(a.shape(1));
  std::vector<double> data(a.data(), a.data() + w * h);
  return IntensityRaster(w, h, std::move(data));
}

Array to_array(const IntensityRaster& r) {
  Array out({r.height(), r.width()});
  std::memcpy(out.mutable_data(), r.data().data(), r.size() * sizeof(double));
  return out;
}

py::array_t<std::uint8_t> labels_to_array(const LabelRaster& r) {
  py::array_t<std::uint8_t> out({r.height(), r.width()});
  auto* dst = out.mutable_data();
  for (std::size_t i = 0; i < r.size(); ++i) dst[i] = static_cast<std::uint8_t>(r.data()[i]);
  return out;
}

LabelRaster labels_from_array(const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw DomainError("expected a 2-D label array");
  const auto h = static_cast<std::size_t>(a.shape(0));
  const auto w = static_cast<std::size_t>(a.shape(1));
  LabelRaster out(w, h);
  for (std::size_t i = 0; i < w * h; ++i) {
    if (a.data()[i] > 3) throw DomainError("label values must be 0..3");
    out.data()[i] = static_cast<Label>(a.data()[i]);
  }
  return out;
}

py::dict record_dict(const MetricsRecord& r) {
  py::dict d;
  d["replicate"] = r.replicate;
  d["looks"] = r.looks;
  d["filter"] = r.filter_name;
  d["nel"] = r.nel;
  d["line_pres"] = r.line_pres;
  d["edge_grad"] = r.edge_grad;
  d["edge_var"] = r.edge_var;
  d["q_index"] = r.q_index;
  d["beta_rho"] = r.beta_rho;
  d["flags"] = format_flags(r.flags);
  return d;
}

PhantomSpec phantom_spec(std::size_t side, double background, double line) {
  PhantomSpec spec;
  spec.side = side;
  spec.background_mean = background;
  spec.line_mean = line;
  return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gamma-model speckle filtering and evaluation";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DegenerateSampleError>(m, "DegenerateSampleError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<GeometryError>(m, "GeometryError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  m.def(
      "gamma_density", [](double z, double looks, double mean) { return gamma_density(z, {looks, mean}); },
      py::arg("z"), py::arg("looks"), py::arg("mean"));
  m.def(
      "mle_estimate",
      [](const std::vector<double>& values) {
        const MleFit fit = mle_estimate(RegionSample(values));
        return py::dict(py::arg("looks") = fit.params.looks, py::arg("mean") = fit.params.mean,
                        py::arg("iterations") = fit.iterations, py::arg("converged") = fit.converged,
                        py::arg("clamped") = fit.clamped);
      },
      py::arg("values"));
  m.def("kl_distance", &kl_distance_gamma, py::arg("mean1"), py::arg("mean2"), py::arg("looks"));
  m.def(
      "kl_statistic",
      [](std::size_t m_, std::size_t n, double looks, double a, double b) { return kl_statistic(m_, n, looks, a, b); },
      py::arg("m"), py::arg("n"), py::arg("looks"), py::arg("mean1"), py::arg("mean2"));
  m.def("chi2_p_value", &chi2_p_value, py::arg("statistic"), py::arg("df") = 1);
  m.def(
      "decide",
      [](double s, int df, double eta) {
        const TestOutcome t = decide(s, df, eta);
        return py::make_tuple(t.accepted, t.p_value);
      },
      py::arg("statistic"), py::arg("df") = 1, py::arg("significance") = 0.05,
      "(accepted, p_value) for a chi-square statistic.");

  m.def(
      "filter_image",
      [](const Array& image, const std::string& method, double significance, const std::string& looks_mode,
         double looks, int window, int df, const std::string& region_union, unsigned threads) {
        FilterConfig cfg;
        cfg.method = parse_filter_method(method);
        cfg.significance = significance;
        cfg.looks_mode = parse_looks_mode(looks_mode);
        cfg.nominal_looks = looks;
        cfg.window_side = window;
        cfg.degrees_of_freedom = df;
        cfg.region_union = parse_region_union(region_union);
        cfg.threads = threads;
        cfg.validate();
        const IntensityRaster in = to_raster(image);
        IntensityRaster out;
        {
          py::gil_scoped_release release;
          out = filter_image(in, cfg);
        }
        return to_array(out);
      },
      py::arg("image"), py::arg("method") = "kl", py::arg("significance") = 0.05, py::arg("looks_mode") = "pooled",
      py::arg("looks") = 1.0, py::arg("window") = 5, py::arg("df") = 1, py::arg("region_union") = "multiset",
      py::arg("threads") = 1);

  m.def(
      "generate_phantom",
      [](std::size_t side, double background, double line) {
        const Phantom ph = generate_phantom(phantom_spec(side, background, line));
        return py::make_tuple(to_array(ph.truth), labels_to_array(ph.labels));
      },
      py::arg("side") = 256, py::arg("background") = 30.0, py::arg("line") = 120.0,
      "(truth, labels) with labels 0 background, 1 line, 2 block, 3 edge band.");
  m.def(
      "corrupt", [](const Array& truth, double looks, std::uint64_t seed) {
        return to_array(corrupt(to_raster(truth), looks, seed));
      },
      py::arg("truth"), py::arg("looks"), py::arg("seed"));
  m.def(
      "compute_metrics",
      [](const Array& filtered, const Array& truth, const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& labels,
         double background, double line) {
        const IntensityRaster f = to_raster(filtered);
        Phantom ph{to_raster(truth), labels_from_array(labels)};
        if (!f.same_shape(ph.truth) || !f.same_shape(ph.labels) || f.width() != f.height()) {
          throw DomainError("compute_metrics: expected square rasters of one shape");
        }
        return record_dict(compute_metrics(f, ph, phantom_spec(f.width(), background, line)));
      },
      py::arg("filtered"), py::arg("truth"), py::arg("labels"), py::arg("background") = 30.0, py::arg("line") = 120.0);
  m.def("q_index", [](const Array& x, const Array& y) { return q_index(to_raster(x), to_raster(y)); });
  m.def("beta_rho", [](const Array& x, const Array& y) { return beta_rho(to_raster(x), to_raster(y)); });
  m.def("enl", [](const std::vector<double>& v) { return enl(v); });

  m.def(
      "run_protocol",
      [](const std::string& ini) {
        RunConfig config;
        apply_ini(config, ini);
        config.validate();
        ProtocolResult res;
        {
          py::gil_scoped_release release;
          res = run_protocol(config);
        }
        py::list out;
        for (const auto& r : res.records) out.append(record_dict(r));
        return out;
      },
      py::arg("config") = "",
      "Runs the Monte Carlo protocol for an INI-style configuration and returns one dict per record.");
  m.def("records_csv", [](const std::string& ini) {
    RunConfig config;
    apply_ini(config, ini);
    py::gil_scoped_release release;
    return format_records_csv(run_protocol(config).records);
  });
}
