#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

#include "hebs/pipeline.h"

namespace py = pybind11;
using namespace hebs;

namespace {

py::object to_python(const nlohmann::ordered_json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

// uint8 arrays are 8-bit codes; float arrays are samples in [0, 1].
Image image_from_array(py::array array) {
  if (array.ndim() != 2 && !(array.ndim() == 3 && array.shape(2) == 3)) {
    throw py::value_error("expected an (H, W) or (H, W, 3) array");
  }
  const int h = static_cast<int>(array.shape(0));
  const int w = static_cast<int>(array.shape(1));
  const int c = array.ndim() == 3 ? 3 : 1;
  if (py::isinstance<py::array_t<std::uint8_t>>(array)) {
    auto codes = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>::ensure(array);
    return Image::from_codes(w, h, c, {codes.data(), static_cast<std::size_t>(codes.size())});
  }
  auto samples = py::array_t<double, py::array::c_style | py::array::forcecast>::ensure(array);
  if (!samples) throw py::value_error("expected a numeric array");
  return Image(w, h, c, std::vector<double>(samples.data(), samples.data() + samples.size()));
}

py::array_t<double> image_to_array(const Image& img) {
  std::vector<py::ssize_t> shape{img.height(), img.width()};
  if (img.channels() == 3) shape.push_back(3);
  py::array_t<double> out(shape);
  std::memcpy(out.mutable_data(), img.samples().data(), img.samples().size() * sizeof(double));
  return out;
}

template <typename T>
py::array_t<T> to_array(const T* data, std::size_t n) {
  py::array_t<T> out(std::vector<py::ssize_t>{static_cast<py::ssize_t>(n)});
  std::memcpy(out.mutable_data(), data, n * sizeof(T));
  return out;
}

PipelineConfig make_config(std::size_t segments, int sources, std::optional<int> dac_bits, const std::string& cdf_mode,
                           const std::string& distortion_map, double beta_floor, bool include_panel,
                           std::optional<std::filesystem::path> curve) {
  PipelineConfig cfg;
  cfg.transform.vertices = segments + 1;
  cfg.transform.cdf_mode = parse_cdf_mode(cdf_mode);
  cfg.quality.distortion_map = parse_distortion_map(distortion_map);
  cfg.sources = sources;
  cfg.dac_bits = dac_bits;
  cfg.beta_floor = beta_floor;
  cfg.include_panel = include_panel;
  if (curve) cfg.curve = load_curve(*curve);
  return cfg;
}

TransferTable table_from_values(const std::vector<double>& values) {
  if (values.size() != kLevels) throw py::value_error("a transfer table has 256 entries");
  TransferTable t;
  std::copy(values.begin(), values.end(), t.values.begin());
  return t;
}

std::vector<std::pair<double, double>> vertex_pairs(const std::vector<Vertex>& v) {
  std::vector<std::pair<double, double>> out;
  for (const auto& p : v) out.emplace_back(p.x, p.y);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Histogram-equalized backlight scaling";
  m.attr("__version__") = HEBS_VERSION;

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<Image>(m, "Image")
      .def(py::init(&image_from_array), py::arg("array"))
      .def_property_readonly("width", &Image::width)
      .def_property_readonly("height", &Image::height)
      .def_property_readonly("channels", &Image::channels)
      .def("to_numpy", &image_to_array)
      .def("luminance", [](const Image& img) {
        py::array_t<double> out({img.height(), img.width()});
        std::memcpy(out.mutable_data(), img.luminance().data(), img.pixel_count() * sizeof(double));
        return out;
      })
      .def("__repr__", [](const Image& img) {
        return "<hebs.Image " + std::to_string(img.width()) + "x" + std::to_string(img.height()) + "x" +
               std::to_string(img.channels()) + ">";
      });
  py::implicitly_convertible<py::array, Image>();

  m.def("load_image", [](const std::filesystem::path& p) { return load_image(p); }, py::arg("path"));
  m.def("save_image", &save_image, py::arg("image"), py::arg("path"));

  m.def("histogram", [](const Image& img) {
    const auto h = histogram(img);
    return to_array(h.counts.data(), h.counts.size());
  }, py::arg("image"));

  m.def("equalize", [](const Image& img, double g_min, double g_max, const std::string& cdf_mode) {
    const auto t = equalize(histogram(img), g_min, g_max, parse_cdf_mode(cdf_mode));
    return to_array(t.values.data(), t.values.size());
  }, py::arg("image"), py::arg("g_min") = 0.0, py::arg("g_max") = 1.0,
        py::arg("cdf_mode") = "inclusive-renormalized");

  m.def("breakpoints", [](const std::vector<double>& table) { return vertex_pairs(breakpoints(table_from_values(table))); },
        py::arg("table"), "Slope-change vertices of a 256-entry transfer table.");

  m.def("coarsen", [](const std::vector<std::pair<double, double>>& points, std::size_t m) {
    std::vector<Vertex> v;
    for (const auto& [x, y] : points) v.push_back({x, y});
    const auto r = coarsen(v, m);
    return py::make_tuple(vertex_pairs(r.curve.vertices()), r.mse);
  }, py::arg("points"), py::arg("m"), "Optimal m-vertex approximation; returns (vertices, mse).");

  m.def("uqi", [](const Image& a, const Image& b, int window, int stride) { return uqi(a, b, {window, stride}); },
        py::arg("a"), py::arg("b"), py::arg("window") = 8, py::arg("stride") = 1);
  m.def("distortion", [](const Image& a, const Image& b, const std::string& map) {
    QualityConfig cfg;
    cfg.distortion_map = parse_distortion_map(map);
    return distortion(a, b, cfg);
  }, py::arg("original"), py::arg("transformed"), py::arg("distortion_map") = "half-complement");

  m.def("ccfl_power", [](double beta) { return ccfl_power({}, beta); }, py::arg("beta"));
  m.def("tft_power", [](double t) { return tft_power({}, t); }, py::arg("mean_transmissivity"));

  m.def("ladder_levels", [](const std::vector<std::pair<double, double>>& curve, double beta, int sources,
                            std::optional<int> dac_bits) {
    std::vector<Vertex> v;
    for (const auto& [x, y] : curve) v.push_back({x, y});
    return ladder_from_curve(PiecewiseLinearCurve(std::move(v)), beta, sources, dac_bits).levels();
  }, py::arg("curve"), py::arg("beta"), py::arg("sources") = 10, py::arg("dac_bits") = 10);

  m.def("sweep", [](const Image& img, std::optional<std::vector<double>> ranges, std::size_t segments) {
    TransformConfig cfg;
    cfg.vertices = segments + 1;
    std::vector<std::pair<double, double>> out;
    for (const auto& s : sweep(img, ranges.value_or(default_ranges()), cfg)) out.emplace_back(s.range, s.distortion);
    return out;
  }, py::arg("image"), py::arg("ranges") = py::none(), py::arg("segments") = 10,
        "Distortion at each dynamic range; returns [(R, D), ...].");

  m.def("run_hebs", [](const Image& img, double d_max, std::size_t segments, int sources, std::optional<int> dac_bits,
                       const std::string& cdf_mode, const std::string& distortion_map, double beta_floor,
                       bool include_panel, std::optional<std::filesystem::path> curve) {
    const auto cfg = make_config(segments, sources, dac_bits, cdf_mode, distortion_map, beta_floor, include_panel, curve);
    ScalingPlan plan;
    {
      py::gil_scoped_release release;
      plan = run_hebs(img, d_max, cfg);
    }
    return py::make_tuple(to_python(to_json(plan)), image_to_array(plan.transformed));
  }, py::arg("image"), py::arg("d_max"), py::arg("segments") = 10, py::arg("sources") = 10, py::arg("dac_bits") = 10,
        py::arg("cdf_mode") = "inclusive-renormalized", py::arg("distortion_map") = "half-complement",
        py::arg("beta_floor") = 0.0, py::arg("include_panel") = false, py::arg("curve") = py::none(),
        "Returns (plan dict, transformed image array).");

  m.def("compare", [](const Image& img, double d_max) {
    Comparison c;
    {
      py::gil_scoped_release release;
      c = compare(img, d_max);
    }
    return to_python(to_json(c));
  }, py::arg("image"), py::arg("d_max"));
}
