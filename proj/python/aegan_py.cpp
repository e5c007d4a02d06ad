// Python bindings over the core library. Arrays cross the boundary as
// float64 numpy arrays with the batch dimension first.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "aegan/checkpoint.hpp"
#include "aegan/config.hpp"
#include "aegan/errors.hpp"
#include "aegan/eval.hpp"
#include "aegan/losses.hpp"
#include "aegan/training.hpp"

namespace py = pybind11;
using namespace aegan;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Tensor to_tensor(const Array& a) {
  Shape shape(a.shape(), a.shape() + a.ndim());
  return Tensor(std::move(shape), std::vector<double>(a.data(), a.data() + a.size()));
}

Array to_array(const Tensor& t) {
  std::vector<py::ssize_t> shape(t.shape().begin(), t.shape().end());
  Array out(shape);
  std::copy(t.values().begin(), t.values().end(), out.mutable_data());
  return out;
}

std::vector<double> to_vector(const Array& a) { return {a.data(), a.data() + a.size()}; }

py::dict breakdown_dict(const LossBreakdown& b) {
  py::dict d;
  auto put = [&](const char* key, const std::optional<double>& v) {
    d[key] = v ? py::cast(*v) : py::none();
  };
  put("gan_x_hat", b.gan_x_hat);
  put("gan_x_tilde", b.gan_x_tilde);
  put("gan_z_hat", b.gan_z_hat);
  put("gan_z_tilde", b.gan_z_tilde);
  put("recon_x", b.recon_x);
  put("recon_z", b.recon_z);
  d["total"] = b.total;
  return d;
}

py::list metrics_list(const std::vector<MetricsRow>& rows) {
  py::list out;
  for (const auto& r : rows) {
    py::dict d = breakdown_dict(r.breakdown);
    d["step"] = r.step;
    out.append(d);
  }
  return out;
}

const Network& require_encoder(const TrainingState& s) {
  if (!is_active(s.config.training.mode, NetworkRole::encoder)) {
    throw UsageError("mode " + std::string(to_string(s.config.training.mode)) + " has no trained encoder");
  }
  return s.model.encoder;
}

}  // namespace

PYBIND11_MODULE(_aegan, m) {
  m.doc() = "AEGAN training, checkpoints and evaluation";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<RunConfig>(m, "Config")
      .def(py::init<>())
      .def_static("parse", &parse_config, py::arg("text"))
      .def_static("load", &load_config, py::arg("path"))
      .def("set", [](RunConfig& c, const std::string& key, const std::string& value) {
        apply_override(c, key, value);
      }, py::arg("key"), py::arg("value"), "Override one dotted key, e.g. set('training.seed', '3').")
      .def("validate", [](const RunConfig& c) { validate(c); })
      .def("to_text", &to_config_text)
      .def("hash", &config_hash)
      .def_property("mode", [](const RunConfig& c) { return std::string(to_string(c.training.mode)); },
                    [](RunConfig& c, const std::string& v) { c.training.mode = parse_training_mode(v); })
      .def_property("seed", [](const RunConfig& c) { return c.training.seed; },
                    [](RunConfig& c, std::uint64_t v) { c.training.seed = v; })
      .def_property("total_steps", [](const RunConfig& c) { return c.training.total_steps; },
                    [](RunConfig& c, std::uint64_t v) { c.training.total_steps = v; })
      .def_property_readonly("latent_dim", [](const RunConfig& c) { return c.model.latent_dim; })
      .def("__repr__", [](const RunConfig& c) {
        return "<Config mode=" + std::string(to_string(c.training.mode)) + " seed=" +
               std::to_string(c.training.seed) + ">";
      });

  m.def("dataset", [](const RunConfig& c) { return to_array(load_dataset(c.data).samples); }, py::arg("config"),
        "Samples of the dataset a config describes.");

  py::class_<TrainingState>(m, "Model")
      .def_static("load", &load_checkpoint, py::arg("path"))
      .def("save", [](const TrainingState& s, const std::filesystem::path& p) { save_checkpoint(s, p); },
           py::arg("path"))
      .def_property_readonly("step", [](const TrainingState& s) { return s.step; })
      .def_property_readonly("config", [](const TrainingState& s) { return s.config; })
      .def("parameter_hash", [](const TrainingState& s, const std::string& role) {
        return s.model.get(parse_network_role(role)).parameters().hash();
      }, py::arg("role"))
      .def("generate", [](const TrainingState& s, const Array& z) {
        return to_array(generate(s.model.generator, to_tensor(z)));
      }, py::arg("z"))
      .def("encode", [](const TrainingState& s, const Array& x) {
        return to_array(encode(require_encoder(s), to_tensor(x)));
      }, py::arg("x"))
      .def("reconstruct", [](const TrainingState& s, const Array& x) {
        return to_array(generate(s.model.generator, encode(require_encoder(s), to_tensor(x))));
      }, py::arg("x"))
      .def("sample", [](const TrainingState& s, std::size_t n, std::uint64_t seed) {
        Rng rng(seed);
        return to_array(generate(s.model.generator, sample_prior({s.config.model.latent_dim}, n, rng)));
      }, py::arg("n"), py::arg("seed") = 0)
      .def("interpolate", [](const TrainingState& s, const Array& x1, const Array& x2, std::size_t n_steps) {
        const auto r = interpolate_real(require_encoder(s), s.model.generator, to_tensor(x1), to_tensor(x2),
                                        n_steps);
        return py::make_tuple(to_array(r.latent_path), to_array(r.frames));
      }, py::arg("x1"), py::arg("x2"), py::arg("n_steps") = 10,
         "Returns (latent_path, frames) for the straight line between the two encodings.");

  m.def("initialize", &initialize_training, py::arg("config"));
  m.def("train", [](const RunConfig& c) {
    std::optional<TrainResult> r;
    {
      py::gil_scoped_release release;
      r.emplace(train(c, load_dataset(c.data)));
    }
    return py::make_tuple(std::move(r->state), metrics_list(r->metrics));
  }, py::arg("config"), "Trains from scratch. Returns (model, metrics).");
  m.def("resume", [](TrainingState s, std::uint64_t total_steps) {
    s.config.training.total_steps = total_steps;
    const Dataset data = load_dataset(s.config.data);
    std::optional<TrainResult> r;
    {
      py::gil_scoped_release release;
      r.emplace(resume(std::move(s), data));
    }
    return py::make_tuple(std::move(r->state), metrics_list(r->metrics));
  }, py::arg("model"), py::arg("total_steps"));

  m.def("mode_coverage", [](const Array& samples, const RunConfig& c, std::optional<double> radius,
                            std::optional<std::size_t> min_count) {
    const Tensor t = to_tensor(samples);
    const MixtureSpec& spec = c.data.mixture;
    const auto r = mode_coverage(t, mixture_centers(spec), radius.value_or(default_capture_radius(spec)),
                                 min_count.value_or(default_min_count(t.batch())));
    py::dict d;
    d["modes_hit"] = r.modes_hit;
    d["assignment_counts"] = r.assignment_counts;
    d["coverage_fraction"] = r.coverage_fraction;
    d["high_quality_fraction"] = r.high_quality_fraction;
    return d;
  }, py::arg("samples"), py::arg("config"), py::arg("radius") = py::none(), py::arg("min_count") = py::none());

  m.def("gan_loss", [](const Array& real, const Array& fake) {
    return adversarial_term(to_vector(real), to_vector(fake));
  }, py::arg("real"), py::arg("fake"), "Mean log D(real) plus mean log(1 - D(fake)).");
  m.def("reconstruction_loss", [](const Array& x, const Array& x_recon, const Array& z, const Array& z_recon,
                                  double lambda_rx, double lambda_rz) {
    const auto r = reconstruction_loss(to_tensor(x), to_tensor(x_recon), to_tensor(z), to_tensor(z_recon),
                                       {lambda_rx, lambda_rz});
    return py::make_tuple(r.recon_x, r.recon_z, r.weighted_sum);
  }, py::arg("x"), py::arg("x_recon"), py::arg("z"), py::arg("z_recon"), py::arg("lambda_rx") = 1.0,
     py::arg("lambda_rz") = 1.0);
  m.def("linear_path", [](const Array& z1, const Array& z2, std::size_t n_steps) {
    return to_array(linear_path(to_vector(z1), to_vector(z2), n_steps));
  }, py::arg("z1"), py::arg("z2"), py::arg("n_steps"));
}
