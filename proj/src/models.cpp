#include "aegan/models.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "aegan/errors.hpp"

namespace aegan {

namespace {

using detail::Layer;
using detail::LayerKind;

constexpr std::size_t kConvKernel = 3;

[[noreturn]] void config_error(const std::string& field, const std::string& message) {
  throw ConfigError("network spec field '" + field + "': " + message);
}

// out[i, :] = b + in[i, :] * W, with W stored (in, out) row-major. The
// accumulation order per output row does not depend on the batch size, so a
// batch of n gives bitwise the same rows as n singleton batches.
void affine_rows(const double* in, std::size_t rows, std::size_t in_dim, const double* weight,
                 const double* bias, std::size_t out_dim, double* out) {
  for (std::size_t i = 0; i < rows; ++i) {
    double* o = out + i * out_dim;
    std::copy(bias, bias + out_dim, o);
    const double* x = in + i * in_dim;
    for (std::size_t k = 0; k < in_dim; ++k) {
      const double a = x[k];
      const double* w = weight + k * out_dim;
      for (std::size_t j = 0; j < out_dim; ++j) o[j] += a * w[j];
    }
  }
}

// Parameter gradients of affine_rows: dW += in^T dout, db += sum(dout).
void affine_param_grads(const double* in, const double* dout, std::size_t rows, std::size_t in_dim,
                        std::size_t out_dim, double* dweight, double* dbias) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* g = dout + i * out_dim;
    const double* x = in + i * in_dim;
    for (std::size_t j = 0; j < out_dim; ++j) dbias[j] += g[j];
    for (std::size_t k = 0; k < in_dim; ++k) {
      const double a = x[k];
      if (a == 0.0) continue;
      double* dw = dweight + k * out_dim;
      for (std::size_t j = 0; j < out_dim; ++j) dw[j] += a * g[j];
    }
  }
}

// din = dout * W^T.
void affine_input_grads(const double* dout, std::size_t rows, const double* weight,
                        std::size_t in_dim, std::size_t out_dim, double* din) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* g = dout + i * out_dim;
    double* d = din + i * in_dim;
    for (std::size_t k = 0; k < in_dim; ++k) {
      const double* w = weight + k * out_dim;
      double s = 0.0;
      for (std::size_t j = 0; j < out_dim; ++j) s += g[j] * w[j];
      d[k] = s;
    }
  }
}

struct ConvGeometry {
  std::size_t h, w, cin, oh, ow, cout, k, stride, pad;

  static ConvGeometry of(const Layer& l) {
    return {l.in_shape[0], l.in_shape[1], l.in_shape[2], l.out_shape[0], l.out_shape[1],
            l.out_shape[2], l.kernel, l.stride, l.pad};
  }
  std::size_t patch() const { return k * k * cin; }
  std::size_t positions() const { return oh * ow; }
};

// Unrolls one NHWC sample into (oh * ow, k * k * cin) patches, zero padded.
void im2col(const double* image, const ConvGeometry& g, double* cols) {
  for (std::size_t oy = 0; oy < g.oh; ++oy) {
    for (std::size_t ox = 0; ox < g.ow; ++ox) {
      double* c = cols + (oy * g.ow + ox) * g.patch();
      for (std::size_t ky = 0; ky < g.k; ++ky) {
        const auto iy = static_cast<std::ptrdiff_t>(oy * g.stride + ky) -
                        static_cast<std::ptrdiff_t>(g.pad);
        for (std::size_t kx = 0; kx < g.k; ++kx) {
          const auto ix = static_cast<std::ptrdiff_t>(ox * g.stride + kx) -
                          static_cast<std::ptrdiff_t>(g.pad);
          double* dst = c + (ky * g.k + kx) * g.cin;
          if (iy < 0 || ix < 0 || iy >= static_cast<std::ptrdiff_t>(g.h) ||
              ix >= static_cast<std::ptrdiff_t>(g.w)) {
            std::fill(dst, dst + g.cin, 0.0);
          } else {
            const double* src = image + (static_cast<std::size_t>(iy) * g.w +
                                         static_cast<std::size_t>(ix)) * g.cin;
            std::copy(src, src + g.cin, dst);
          }
        }
      }
    }
  }
}

void col2im_accumulate(const double* cols, const ConvGeometry& g, double* image) {
  for (std::size_t oy = 0; oy < g.oh; ++oy) {
    for (std::size_t ox = 0; ox < g.ow; ++ox) {
      const double* c = cols + (oy * g.ow + ox) * g.patch();
      for (std::size_t ky = 0; ky < g.k; ++ky) {
        const auto iy = static_cast<std::ptrdiff_t>(oy * g.stride + ky) -
                        static_cast<std::ptrdiff_t>(g.pad);
        if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.h)) continue;
        for (std::size_t kx = 0; kx < g.k; ++kx) {
          const auto ix = static_cast<std::ptrdiff_t>(ox * g.stride + kx) -
                          static_cast<std::ptrdiff_t>(g.pad);
          if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(g.w)) continue;
          const double* src = c + (ky * g.k + kx) * g.cin;
          double* dst = image + (static_cast<std::size_t>(iy) * g.w +
                                 static_cast<std::size_t>(ix)) * g.cin;
          for (std::size_t ch = 0; ch < g.cin; ++ch) dst[ch] += src[ch];
        }
      }
    }
  }
}

Layer dense_layer(Shape in, std::size_t out, std::size_t weight_index) {
  Layer l;
  l.kind = LayerKind::dense;
  l.in_shape = std::move(in);
  l.out_shape = {out};
  l.weight_index = weight_index;
  return l;
}

Layer elementwise(LayerKind kind, const Shape& shape, double slope = 0.0, double scale = 1.0) {
  Layer l;
  l.kind = kind;
  l.in_shape = shape;
  l.out_shape = shape;
  l.slope = slope;
  l.scale = scale;
  return l;
}

Layer conv_layer(const Shape& in, std::size_t cout, std::size_t stride, std::size_t weight_index) {
  Layer l;
  l.kind = LayerKind::conv2d;
  l.kernel = kConvKernel;
  l.stride = stride;
  l.pad = kConvKernel / 2;
  l.in_shape = in;
  const std::size_t oh = (in[0] + 2 * l.pad - l.kernel) / stride + 1;
  const std::size_t ow = (in[1] + 2 * l.pad - l.kernel) / stride + 1;
  l.out_shape = {oh, ow, cout};
  l.weight_index = weight_index;
  return l;
}

void append_output_activation(std::vector<Layer>& layers, const NetworkSpec& spec) {
  const Shape& s = layers.back().out_shape;
  switch (spec.output_activation) {
    case OutputActivation::bounded_symmetric:
      layers.push_back(elementwise(LayerKind::tanh, s, 0.0, spec.output_scale));
      break;
    case OutputActivation::probability:
      layers.push_back(elementwise(LayerKind::sigmoid, s));
      break;
    case OutputActivation::identity:
      break;
  }
}

std::vector<Layer> plan_layers(const NetworkSpec& spec) {
  std::vector<Layer> layers;
  std::size_t weight_index = 0;
  const auto& widths = spec.layer_widths;

  if (spec.family == ArchitectureFamily::dense) {
    for (std::size_t i = 0; i + 1 < widths.size(); ++i) {
      layers.push_back(dense_layer({widths[i]}, widths[i + 1], weight_index));
      weight_index += 2;
      if (i + 2 < widths.size()) {
        layers.push_back(elementwise(LayerKind::leaky_relu, {widths[i + 1]}, spec.leaky_slope));
      }
    }
    append_output_activation(layers, spec);
    return layers;
  }

  const std::size_t levels = widths.size();
  const std::size_t factor = std::size_t{1} << levels;
  const ImageShape& img = spec.image;

  if (spec.role == NetworkRole::generator) {
    Shape base{img.height / factor, img.width / factor, widths[0]};
    layers.push_back(dense_layer({spec.latent_dim}, element_count(base), weight_index));
    layers.back().out_shape = base;
    weight_index += 2;
    layers.push_back(elementwise(LayerKind::leaky_relu, base, spec.leaky_slope));
    Shape current = base;
    for (std::size_t i = 0; i < levels; ++i) {
      Layer up = elementwise(LayerKind::upsample2x, current);
      up.out_shape = {current[0] * 2, current[1] * 2, current[2]};
      layers.push_back(up);
      const bool last = i + 1 == levels;
      const std::size_t cout = last ? img.channels : widths[i + 1];
      layers.push_back(conv_layer(up.out_shape, cout, 1, weight_index));
      weight_index += 2;
      current = layers.back().out_shape;
      if (!last) layers.push_back(elementwise(LayerKind::leaky_relu, current, spec.leaky_slope));
    }
    append_output_activation(layers, spec);
    return layers;
  }

  Shape current{img.height, img.width, img.channels};
  for (std::size_t width : widths) {
    layers.push_back(conv_layer(current, width, 2, weight_index));
    weight_index += 2;
    current = layers.back().out_shape;
    layers.push_back(elementwise(LayerKind::leaky_relu, current, spec.leaky_slope));
  }
  const std::size_t out = spec.role == NetworkRole::encoder ? spec.latent_dim : 1;
  layers.push_back(dense_layer(current, out, weight_index));
  append_output_activation(layers, spec);
  return layers;
}

// (weight shape, bias shape) for a parameterized layer.
std::pair<Shape, Shape> parameter_shapes(const Layer& l) {
  if (l.kind == LayerKind::dense) {
    return {{element_count(l.in_shape), element_count(l.out_shape)}, {element_count(l.out_shape)}};
  }
  const std::size_t cin = l.in_shape[2];
  const std::size_t cout = l.out_shape[2];
  return {{l.kernel * l.kernel * cin, cout}, {cout}};
}

bool has_parameters(const Layer& l) {
  return l.kind == LayerKind::dense || l.kind == LayerKind::conv2d;
}

std::string layer_name(const Layer& l) {
  return (l.kind == LayerKind::dense ? "dense" : "conv") + std::to_string(l.weight_index / 2);
}

Shape batched(std::size_t n, const Shape& row) {
  Shape s{n};
  s.insert(s.end(), row.begin(), row.end());
  return s;
}

}  // namespace

std::string_view to_string(NetworkRole role) {
  switch (role) {
    case NetworkRole::generator: return "generator";
    case NetworkRole::encoder: return "encoder";
    case NetworkRole::sample_discriminator: return "sample_discriminator";
    case NetworkRole::latent_discriminator: return "latent_discriminator";
  }
  return "?";
}

std::string_view to_string(ArchitectureFamily family) {
  return family == ArchitectureFamily::dense ? "dense" : "convolutional";
}

std::string_view to_string(OutputActivation activation) {
  switch (activation) {
    case OutputActivation::bounded_symmetric: return "bounded_symmetric";
    case OutputActivation::probability: return "probability";
    case OutputActivation::identity: return "identity";
  }
  return "?";
}

NetworkRole parse_network_role(std::string_view text) {
  for (auto r : {NetworkRole::generator, NetworkRole::encoder, NetworkRole::sample_discriminator,
                 NetworkRole::latent_discriminator}) {
    if (to_string(r) == text) return r;
  }
  throw ConfigError("unknown network role '" + std::string(text) + "'");
}

ArchitectureFamily parse_architecture_family(std::string_view text) {
  if (text == "dense") return ArchitectureFamily::dense;
  if (text == "convolutional") return ArchitectureFamily::convolutional;
  throw ConfigError("unknown architecture family '" + std::string(text) + "'");
}

OutputActivation parse_output_activation(std::string_view text) {
  for (auto a : {OutputActivation::bounded_symmetric, OutputActivation::probability,
                 OutputActivation::identity}) {
    if (to_string(a) == text) return a;
  }
  throw ConfigError("unknown output activation '" + std::string(text) + "'");
}

OutputActivation required_output_activation(NetworkRole role) {
  switch (role) {
    case NetworkRole::generator: return OutputActivation::bounded_symmetric;
    case NetworkRole::encoder: return OutputActivation::identity;
    default: return OutputActivation::probability;
  }
}

void validate(const NetworkSpec& spec) {
  const auto& widths = spec.layer_widths;
  if (widths.empty()) config_error("layer_widths", "must not be empty");
  for (std::size_t w : widths) {
    if (w == 0) config_error("layer_widths", "widths must be positive");
  }
  if (spec.output_activation != required_output_activation(spec.role)) {
    config_error("output_activation", std::string(to_string(spec.role)) + " must end in " +
                                          std::string(to_string(required_output_activation(spec.role))));
  }
  if (!(spec.output_scale > 0.0) || !std::isfinite(spec.output_scale)) {
    config_error("output_scale", "must be positive and finite");
  }
  if (!(spec.leaky_slope >= 0.0 && spec.leaky_slope < 1.0)) {
    config_error("leaky_slope", "must lie in [0, 1)");
  }
  const bool discriminator = spec.role == NetworkRole::sample_discriminator ||
                             spec.role == NetworkRole::latent_discriminator;

  if (spec.family == ArchitectureFamily::dense) {
    if (widths.size() < 2) config_error("layer_widths", "dense networks need input and output widths");
    if (discriminator && widths.back() != 1) {
      config_error("layer_widths", "discriminator output width must be 1");
    }
    return;
  }

  if (spec.role == NetworkRole::latent_discriminator) {
    config_error("architecture_family", "latent discriminator must be dense");
  }
  if (spec.latent_dim == 0) config_error("latent_dim", "must be positive");
  const ImageShape& img = spec.image;
  if (img.height == 0 || img.width == 0 || img.channels == 0) {
    config_error("image", "height, width and channels must be positive");
  }
  if (widths.size() >= 16) config_error("layer_widths", "too many levels");
  const std::size_t factor = std::size_t{1} << widths.size();
  if (img.height % factor != 0 || img.width % factor != 0) {
    config_error("image", "height and width must be divisible by 2^" + std::to_string(widths.size()));
  }
}

std::size_t ParameterSet::scalar_count() const {
  std::size_t n = 0;
  for (const auto& t : tensors) n += t.value.size();
  return n;
}

ParameterSet ParameterSet::zeros_like() const {
  ParameterSet z;
  z.initialization_seed = initialization_seed;
  z.tensors.reserve(tensors.size());
  for (const auto& t : tensors) z.tensors.push_back({t.name, Tensor(t.value.shape())});
  return z;
}

std::uint64_t ParameterSet::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& t : tensors) {
    h = fnv1a(std::as_bytes(std::span(t.name.data(), t.name.size())), h);
    h = fingerprint(t.value, h);
  }
  return h;
}

double& ParameterSet::at(std::size_t flat_index) {
  for (auto& t : tensors) {
    if (flat_index < t.value.size()) return t.value[flat_index];
    flat_index -= t.value.size();
  }
  throw UsageError("parameter index out of range");
}

double ParameterSet::at(std::size_t flat_index) const {
  return const_cast<ParameterSet&>(*this).at(flat_index);
}

std::size_t parameter_count(const NetworkSpec& spec) {
  validate(spec);
  std::size_t n = 0;
  for (const Layer& l : plan_layers(spec)) {
    if (!has_parameters(l)) continue;
    auto [w, b] = parameter_shapes(l);
    n += element_count(w) + element_count(b);
  }
  return n;
}

ParameterSet build_network(const NetworkSpec& spec, std::uint64_t seed) {
  validate(spec);
  ParameterSet params;
  params.initialization_seed = seed;
  std::mt19937_64 rng(seed);
  const double gain = 2.0 / (1.0 + spec.leaky_slope * spec.leaky_slope);
  for (const Layer& l : plan_layers(spec)) {
    if (!has_parameters(l)) continue;
    auto [wshape, bshape] = parameter_shapes(l);
    Tensor weight(wshape);
    std::normal_distribution<double> normal(0.0, std::sqrt(gain / static_cast<double>(wshape[0])));
    for (double& v : weight.values()) v = normal(rng);
    const std::string name = layer_name(l);
    params.tensors.push_back({name + ".weight", std::move(weight)});
    params.tensors.push_back({name + ".bias", Tensor(bshape)});
  }
  return params;
}

Network::Network(NetworkSpec spec, ParameterSet parameters)
    : spec_(std::move(spec)), params_(std::move(parameters)) {
  validate(spec_);
  layers_ = plan_layers(spec_);
  input_shape_ = layers_.front().in_shape;
  output_shape_ = layers_.back().out_shape;
  std::size_t expected = 0;
  for (const Layer& l : layers_) {
    if (!has_parameters(l)) continue;
    auto [w, b] = parameter_shapes(l);
    if (l.weight_index + 1 >= params_.tensors.size() ||
        params_.tensors[l.weight_index].value.shape() != w ||
        params_.tensors[l.weight_index + 1].value.shape() != b) {
      throw ShapeError("parameter set does not match " + std::string(to_string(spec_.role)) +
                       " spec at layer " + layer_name(l));
    }
    expected += 2;
  }
  if (expected != params_.tensors.size()) {
    throw ShapeError("parameter set has " + std::to_string(params_.tensors.size()) +
                     " tensors, spec needs " + std::to_string(expected));
  }
}

Tensor Network::forward(const Tensor& input) const { return run(input, nullptr); }

Tensor Network::forward(const Tensor& input, ForwardTrace& trace) const {
  return run(input, &trace);
}

Tensor Network::run(const Tensor& input, ForwardTrace* trace) const {
  require_row_shape(input, input_shape_, std::string(to_string(spec_.role)) + " input");
  const std::size_t n = input.batch();
  if (trace) {
    trace->inputs.clear();
    trace->inputs.reserve(layers_.size());
  }
  Tensor current = input;
  for (const Layer& l : layers_) {
    Tensor out(batched(n, l.out_shape));
    const std::size_t in_dim = element_count(l.in_shape);
    const std::size_t out_dim = element_count(l.out_shape);
    switch (l.kind) {
      case LayerKind::dense: {
        const Tensor& w = params_.tensors[l.weight_index].value;
        const Tensor& b = params_.tensors[l.weight_index + 1].value;
        affine_rows(current.data(), n, in_dim, w.data(), b.data(), out_dim, out.data());
        break;
      }
      case LayerKind::conv2d: {
        const ConvGeometry g = ConvGeometry::of(l);
        const Tensor& w = params_.tensors[l.weight_index].value;
        const Tensor& b = params_.tensors[l.weight_index + 1].value;
        std::vector<double> cols(g.positions() * g.patch());
        for (std::size_t i = 0; i < n; ++i) {
          im2col(current.data() + i * in_dim, g, cols.data());
          affine_rows(cols.data(), g.positions(), g.patch(), w.data(), b.data(), g.cout,
                      out.data() + i * out_dim);
        }
        break;
      }
      case LayerKind::upsample2x: {
        const std::size_t h = l.in_shape[0], w = l.in_shape[1], c = l.in_shape[2];
        for (std::size_t i = 0; i < n; ++i) {
          const double* src = current.data() + i * in_dim;
          double* dst = out.data() + i * out_dim;
          for (std::size_t y = 0; y < 2 * h; ++y) {
            for (std::size_t x = 0; x < 2 * w; ++x) {
              const double* s = src + ((y / 2) * w + x / 2) * c;
              std::copy(s, s + c, dst + (y * 2 * w + x) * c);
            }
          }
        }
        break;
      }
      case LayerKind::leaky_relu:
        std::transform(current.values().begin(), current.values().end(), out.values().begin(),
                       [s = l.slope](double v) { return v > 0.0 ? v : s * v; });
        break;
      case LayerKind::tanh:
        std::transform(current.values().begin(), current.values().end(), out.values().begin(),
                       [s = l.scale](double v) { return s * std::tanh(v); });
        break;
      case LayerKind::sigmoid:
        std::transform(current.values().begin(), current.values().end(), out.values().begin(),
                       [](double v) {
                         const double p = 1.0 / (1.0 + std::exp(-v));
                         return std::clamp(p, kProbabilityEpsilon, 1.0 - kProbabilityEpsilon);
                       });
        break;
    }
    if (trace) trace->inputs.push_back(std::move(current));
    current = std::move(out);
  }
  if (trace) trace->output = current;
  return current;
}

Tensor Network::backward(const ForwardTrace& trace, const Tensor& grad_output,
                         ParameterSet* param_grads, bool want_input_grad) const {
  if (trace.inputs.size() != layers_.size()) {
    throw UsageError("backward called with a trace from a different network");
  }
  require_shape(grad_output, trace.output.shape(), "gradient of " + std::string(to_string(spec_.role)));
  const std::size_t n = grad_output.batch();
  Tensor grad = grad_output;
  for (std::size_t idx = layers_.size(); idx-- > 0;) {
    const Layer& l = layers_[idx];
    const Tensor& input = trace.inputs[idx];
    const bool first = idx == 0;
    const std::size_t in_dim = element_count(l.in_shape);
    const std::size_t out_dim = element_count(l.out_shape);
    switch (l.kind) {
      case LayerKind::dense: {
        const Tensor& w = params_.tensors[l.weight_index].value;
        if (param_grads) {
          affine_param_grads(input.data(), grad.data(), n, in_dim, out_dim,
                             param_grads->tensors[l.weight_index].value.data(),
                             param_grads->tensors[l.weight_index + 1].value.data());
        }
        if (first && !want_input_grad) return {};
        Tensor din(input.shape());
        affine_input_grads(grad.data(), n, w.data(), in_dim, out_dim, din.data());
        grad = std::move(din);
        break;
      }
      case LayerKind::conv2d: {
        const ConvGeometry g = ConvGeometry::of(l);
        const Tensor& w = params_.tensors[l.weight_index].value;
        std::vector<double> cols(g.positions() * g.patch());
        std::vector<double> dcols(cols.size());
        const bool need_input = !first || want_input_grad;
        Tensor din(need_input ? input.shape() : Shape{});
        for (std::size_t i = 0; i < n; ++i) {
          const double* dout = grad.data() + i * out_dim;
          if (param_grads) {
            im2col(input.data() + i * in_dim, g, cols.data());
            affine_param_grads(cols.data(), dout, g.positions(), g.patch(), g.cout,
                               param_grads->tensors[l.weight_index].value.data(),
                               param_grads->tensors[l.weight_index + 1].value.data());
          }
          if (need_input) {
            affine_input_grads(dout, g.positions(), w.data(), g.patch(), g.cout, dcols.data());
            col2im_accumulate(dcols.data(), g, din.data() + i * in_dim);
          }
        }
        if (!need_input) return {};
        grad = std::move(din);
        break;
      }
      case LayerKind::upsample2x: {
        const std::size_t h = l.in_shape[0], wd = l.in_shape[1], c = l.in_shape[2];
        Tensor din(input.shape());
        for (std::size_t i = 0; i < n; ++i) {
          const double* src = grad.data() + i * out_dim;
          double* dst = din.data() + i * in_dim;
          for (std::size_t y = 0; y < 2 * h; ++y) {
            for (std::size_t x = 0; x < 2 * wd; ++x) {
              const double* s = src + (y * 2 * wd + x) * c;
              double* d = dst + ((y / 2) * wd + x / 2) * c;
              for (std::size_t ch = 0; ch < c; ++ch) d[ch] += s[ch];
            }
          }
        }
        grad = std::move(din);
        break;
      }
      case LayerKind::leaky_relu:
        for (std::size_t i = 0; i < grad.size(); ++i) {
          if (!(input[i] > 0.0)) grad[i] *= l.slope;
        }
        break;
      case LayerKind::tanh:
        for (std::size_t i = 0; i < grad.size(); ++i) {
          const double t = std::tanh(input[i]);
          grad[i] *= l.scale * (1.0 - t * t);
        }
        break;
      case LayerKind::sigmoid:
        for (std::size_t i = 0; i < grad.size(); ++i) {
          const double p = 1.0 / (1.0 + std::exp(-input[i]));
          // Clamped outputs are locally constant.
          grad[i] = (p <= kProbabilityEpsilon || p >= 1.0 - kProbabilityEpsilon)
                        ? 0.0
                        : grad[i] * p * (1.0 - p);
        }
        break;
    }
  }
  return want_input_grad ? grad : Tensor{};
}

Network make_network(const NetworkSpec& spec, std::uint64_t seed) {
  return Network(spec, build_network(spec, seed));
}

namespace {

void require_role(const Network& net, NetworkRole role, const char* op) {
  if (net.role() != role) {
    throw UsageError(std::string(op) + " needs a " + std::string(to_string(role)) + ", got " +
                     std::string(to_string(net.role())));
  }
}

}  // namespace

Tensor generate(const Network& generator, const Tensor& z) {
  require_role(generator, NetworkRole::generator, "generate");
  require_row_shape(z, generator.input_shape(), "latent batch");
  require_finite(z, "latent batch");
  return generator.forward(z);
}

Tensor encode(const Network& encoder, const Tensor& x) {
  require_role(encoder, NetworkRole::encoder, "encode");
  require_row_shape(x, encoder.input_shape(), "sample batch");
  require_finite(x, "sample batch");
  return encoder.forward(x);
}

Tensor discriminate_x(const Network& sample_discriminator, const Tensor& x) {
  require_role(sample_discriminator, NetworkRole::sample_discriminator, "discriminate_x");
  require_row_shape(x, sample_discriminator.input_shape(), "sample batch");
  require_finite(x, "sample batch");
  return sample_discriminator.forward(x);
}

Tensor discriminate_z(const Network& latent_discriminator, const Tensor& z) {
  require_role(latent_discriminator, NetworkRole::latent_discriminator, "discriminate_z");
  require_row_shape(z, latent_discriminator.input_shape(), "latent batch");
  require_finite(z, "latent batch");
  return latent_discriminator.forward(z);
}

}  // namespace aegan
