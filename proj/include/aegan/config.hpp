#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "aegan/data.hpp"
#include "aegan/losses.hpp"
#include "aegan/models.hpp"

namespace aegan {

/// Which subset of the four networks is trained.
///   aegan: G, E, D_x, D_z with all six loss terms
///   gan:   G, D_x with the generated-sample adversarial term only
///   aae:   G, E, D_z with the encoded-latent adversarial term and L1 sample
///          reconstruction
enum class TrainingMode { aegan, gan, aae };
enum class OptimizerKind { sgd, momentum, adaptive_moment };
enum class DataSource { mixture, images };

std::string_view to_string(TrainingMode mode);
std::string_view to_string(OptimizerKind kind);
std::string_view to_string(DataSource source);
TrainingMode parse_training_mode(std::string_view text);
OptimizerKind parse_optimizer_kind(std::string_view text);
DataSource parse_data_source(std::string_view text);

/// Architecture hyperparameters. Widths are hidden sizes only; input and
/// output sizes follow from the data and latent dimensions. For the
/// convolutional family the generator, encoder and sample discriminator
/// widths are channel counts per resolution level.
struct ModelConfig {
  ArchitectureFamily family = ArchitectureFamily::dense;
  std::size_t latent_dim = 32;
  std::vector<std::size_t> generator_widths{64, 64};
  std::vector<std::size_t> encoder_widths{64, 64};
  std::vector<std::size_t> sample_discriminator_widths{64, 64};
  std::vector<std::size_t> latent_discriminator_widths{64, 64};
  double leaky_slope = 0.2;
};

struct TrainingConfig {
  TrainingMode mode = TrainingMode::aegan;
  std::size_t batch_size = 16;
  std::uint64_t total_steps = 1000;
  ReconWeights recon_weights{};
  LatentNorm latent_norm = LatentNorm::euclidean;
  double learning_rate_g_e = 2e-4;
  double learning_rate_d = 2e-4;
  OptimizerKind optimizer = OptimizerKind::adaptive_moment;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double momentum = 0.9;
  GeneratorLossVariant generator_loss_variant = GeneratorLossVariant::non_saturating;
  std::size_t discriminator_steps = 1;
  std::uint64_t seed = 0;
  std::uint64_t checkpoint_every = 1000;
  std::uint64_t log_every = 1;
};

struct DataConfig {
  DataSource source = DataSource::mixture;
  MixtureSpec mixture{};
  std::uint64_t seed = 0;
  std::filesystem::path image_dir;
  Resolution resolution{64, 64};
  bool mirror = true;
};

struct RunConfig {
  ModelConfig model;
  TrainingConfig training;
  DataConfig data;
};

/// Throws ConfigError on the first invalid value.
void validate(const RunConfig& config);

/// Parses the sectioned `key = value` format. Unknown sections or keys raise
/// ConfigError naming the closest valid key. A `[run]` section (as written
/// into run manifests) is accepted and ignored.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

/// Sets one dotted key, e.g. ("training.mode", "gan").
void apply_override(RunConfig& config, std::string_view dotted_key, std::string_view value);

/// Canonical text form; parse_config(to_config_text(c)) reproduces c.
std::string to_config_text(const RunConfig& config);

/// Hash over every setting that influences the training trajectory (step
/// budget and logging cadence excluded, so a run can be extended on resume).
std::uint64_t config_hash(const RunConfig& config);

/// All valid dotted keys, in canonical order.
std::vector<std::string> config_keys();

/// Per-sample shape implied by the data settings.
Shape sample_shape(const DataConfig& data);
ValueRange value_range(const DataConfig& data);

/// Full network spec for one role under the run's model and data settings.
NetworkSpec network_spec(const RunConfig& config, NetworkRole role);

}  // namespace aegan
