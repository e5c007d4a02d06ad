#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "aegan/tensor.hpp"

namespace aegan {

/// Discriminator outputs are clamped to [kProbabilityEpsilon, 1 - kProbabilityEpsilon].
inline constexpr double kProbabilityEpsilon = 1e-7;

enum class NetworkRole { generator, encoder, sample_discriminator, latent_discriminator };
enum class ArchitectureFamily { dense, convolutional };
enum class OutputActivation { bounded_symmetric, probability, identity };

std::string_view to_string(NetworkRole role);
std::string_view to_string(ArchitectureFamily family);
std::string_view to_string(OutputActivation activation);
NetworkRole parse_network_role(std::string_view text);
ArchitectureFamily parse_architecture_family(std::string_view text);
OutputActivation parse_output_activation(std::string_view text);

/// The activation each role must end in: tanh-like for G, identity for E,
/// sigmoid for both discriminators.
OutputActivation required_output_activation(NetworkRole role);

struct ImageShape {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 0;

  friend bool operator==(const ImageShape&, const ImageShape&) = default;
};

/// Architecture of one of the four networks.
///
/// Dense family: `layer_widths` is the full chain including input and output
/// sizes, e.g. {32, 64, 2} is a 32 -> 64 -> 2 perceptron with one hidden layer.
///
/// Convolutional family: `layer_widths` lists hidden channel counts. Encoder
/// and sample discriminator apply one stride-2 3x3 convolution per entry and
/// finish with a dense projection; the generator projects the latent vector
/// to a (H / 2^L, W / 2^L, widths[0]) map and applies L nearest-upsample +
/// 3x3 convolution stages, the last one producing `image.channels`.
struct NetworkSpec {
  NetworkRole role = NetworkRole::generator;
  ArchitectureFamily family = ArchitectureFamily::dense;
  std::vector<std::size_t> layer_widths;
  OutputActivation output_activation = OutputActivation::bounded_symmetric;
  std::size_t latent_dim = 32;  // convolutional family only
  ImageShape image{};           // convolutional family only
  double output_scale = 1.0;    // generator output is output_scale * tanh(.)
  double leaky_slope = 0.2;

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

/// Throws ConfigError naming the first inconsistent field.
void validate(const NetworkSpec& spec);

struct NamedTensor {
  std::string name;
  Tensor value;

  friend bool operator==(const NamedTensor&, const NamedTensor&) = default;
};

/// Parameters of one network. Biases and weights are stored as separate
/// named tensors in layer order.
struct ParameterSet {
  std::vector<NamedTensor> tensors;
  std::uint64_t initialization_seed = 0;

  std::size_t scalar_count() const;
  ParameterSet zeros_like() const;
  std::uint64_t hash() const;

  /// Flat indexing across all tensors, in order.
  double& at(std::size_t flat_index);
  double at(std::size_t flat_index) const;

  friend bool operator==(const ParameterSet&, const ParameterSet&) = default;
};

std::size_t parameter_count(const NetworkSpec& spec);

/// Initializes zero-mean Gaussian weights with fan-in scaling and zero
/// biases. Deterministic in (spec, seed).
ParameterSet build_network(const NetworkSpec& spec, std::uint64_t seed);

namespace detail {

enum class LayerKind { dense, conv2d, upsample2x, leaky_relu, tanh, sigmoid };

struct Layer {
  LayerKind kind = LayerKind::dense;
  Shape in_shape;   // per sample
  Shape out_shape;  // per sample
  std::size_t weight_index = 0;
  std::size_t kernel = 0;
  std::size_t stride = 1;
  std::size_t pad = 0;
  double slope = 0.0;
  double scale = 1.0;
};

}  // namespace detail

/// Layer inputs recorded during a forward pass, consumed by backward().
struct ForwardTrace {
  std::vector<Tensor> inputs;
  Tensor output;
};

/// A network spec bound to its parameters. Forward evaluation is const and
/// touches no shared mutable state, so it is safe from multiple threads.
class Network {
 public:
  Network(NetworkSpec spec, ParameterSet parameters);

  const NetworkSpec& spec() const noexcept { return spec_; }
  NetworkRole role() const noexcept { return spec_.role; }
  const ParameterSet& parameters() const noexcept { return params_; }
  ParameterSet& parameters() noexcept { return params_; }

  const Shape& input_shape() const noexcept { return input_shape_; }
  const Shape& output_shape() const noexcept { return output_shape_; }

  Tensor forward(const Tensor& input) const;
  Tensor forward(const Tensor& input, ForwardTrace& trace) const;

  /// Back-propagates `grad_output` through the traced pass. Parameter
  /// gradients are accumulated into `param_grads` when it is non-null.
  /// Returns the gradient with respect to the input, or an empty tensor
  /// when `want_input_grad` is false.
  Tensor backward(const ForwardTrace& trace, const Tensor& grad_output, ParameterSet* param_grads,
                  bool want_input_grad = true) const;

 private:
  Tensor run(const Tensor& input, ForwardTrace* trace) const;

  NetworkSpec spec_;
  ParameterSet params_;
  std::vector<detail::Layer> layers_;
  Shape input_shape_;
  Shape output_shape_;
};

Network make_network(const NetworkSpec& spec, std::uint64_t seed);

/// G : Z -> X.
Tensor generate(const Network& generator, const Tensor& z);
/// E : X -> Z. Rejects non-finite inputs with DataError.
Tensor encode(const Network& encoder, const Tensor& x);
/// D_x(x), shape (batch, 1), values in [eps, 1 - eps].
Tensor discriminate_x(const Network& sample_discriminator, const Tensor& x);
/// D_z(z), shape (batch, 1), values in [eps, 1 - eps].
Tensor discriminate_z(const Network& latent_discriminator, const Tensor& z);

}  // namespace aegan
