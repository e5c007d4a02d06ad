#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aegan/config.hpp"
#include "aegan/data.hpp"
#include "aegan/losses.hpp"
#include "aegan/models.hpp"
#include "aegan/optim.hpp"
#include "aegan/random.hpp"

namespace aegan {

inline constexpr std::array<NetworkRole, 4> kAllRoles = {
    NetworkRole::generator, NetworkRole::encoder, NetworkRole::sample_discriminator,
    NetworkRole::latent_discriminator};

/// The four networks. All are instantiated regardless of mode so that every
/// mode shares bitwise-identical initializations of the networks it uses;
/// inactive ones are never read or written by training.
struct AeganModel {
  Network generator;
  Network encoder;
  Network sample_discriminator;
  Network latent_discriminator;

  Network& get(NetworkRole role);
  const Network& get(NetworkRole role) const;
};

/// Networks trained by a mode.
bool is_active(TrainingMode mode, NetworkRole role);

/// Seed used to initialize a role; depends only on the run seed and the
/// role, never on the mode.
std::uint64_t network_seed(std::uint64_t run_seed, NetworkRole role);

AeganModel build_model(const RunConfig& config);

/// Loss terms evaluated by a mode.
struct ActiveTerms {
  bool x_hat = false;
  bool x_tilde = false;
  bool z_hat = false;
  bool z_tilde = false;
  bool recon_x = false;
  bool recon_z = false;

  static ActiveTerms for_mode(TrainingMode mode);
  static ActiveTerms all() { return {true, true, true, true, true, true}; }
};

/// Standard normal prior over the latent space.
struct LatentPrior {
  std::size_t dimension = 32;
};

/// n i.i.d. draws, shape (n, dimension). Throws UsageError when n == 0.
Tensor sample_prior(const LatentPrior& prior, std::size_t n, Rng& rng);

/// Inputs of one objective evaluation.
struct ObjectiveInputs {
  Tensor real_x;         // batch from the dataset
  Tensor z_fake;         // prior draws fed to G (x_hat, z_tilde, recon_z)
  Tensor z_prior_hat;    // prior draws scored as real by D_z against E(x)
  Tensor z_prior_tilde;  // prior draws scored as real by D_z against E(G(z))
};

enum class ObjectiveSide {
  full,           // composite objective, gradients for all four networks
  discriminator,  // sum of adversarial terms, gradients for D_x and D_z
  generator,      // generator-side loss, gradients for G and E
};

struct ObjectiveSettings {
  ReconWeights weights{};
  LatentNorm latent_norm = LatentNorm::euclidean;
  GeneratorLossVariant variant = GeneratorLossVariant::non_saturating;
};

struct ModelGradients {
  ParameterSet generator;
  ParameterSet encoder;
  ParameterSet sample_discriminator;
  ParameterSet latent_discriminator;

  ParameterSet& get(NetworkRole role);
  const ParameterSet& get(NetworkRole role) const;
};

struct ObjectiveEvaluation {
  LossBreakdown breakdown;  // composite-objective components
  double value = 0.0;       // the quantity the chosen side optimizes
  ModelGradients gradients;  // d value / d parameters (zero where not computed)
};

/// Forward pass through the wiring of all active terms, followed by reverse
/// accumulation of d value / d parameters.
ObjectiveEvaluation evaluate_objective(const AeganModel& model, const ObjectiveInputs& inputs,
                                       const ActiveTerms& terms, const ObjectiveSettings& settings,
                                       ObjectiveSide side, bool compute_gradients = true);

ObjectiveSettings objective_settings(const TrainingConfig& config);

struct TrainingState {
  RunConfig config;
  AeganModel model;
  std::array<std::optional<Optimizer>, 4> optimizers;  // indexed like kAllRoles
  std::uint64_t step = 0;
  Rng rng;  // prior draws

  std::optional<Optimizer>& optimizer(NetworkRole role);
  const std::optional<Optimizer>& optimizer(NetworkRole role) const;
};

TrainingState initialize_training(const RunConfig& config);

/// One ascent update of the active discriminators with fresh prior draws;
/// G and E are read but not written. `step_number` labels errors.
LossBreakdown discriminator_phase(TrainingState& state, const Tensor& real_batch, std::uint64_t step_number);

/// One joint descent update of the active G and E with fresh prior draws;
/// the discriminators are read but not written.
LossBreakdown generator_phase(TrainingState& state, const Tensor& real_batch, std::uint64_t step_number);

/// One alternating update: discriminator_phase `discriminator_steps` times,
/// then generator_phase. Returns the composite breakdown evaluated in the
/// generator phase. Throws NumericalError naming the first non-finite
/// component.
LossBreakdown train_step(TrainingState& state, const Tensor& real_batch);

struct MetricsRow {
  std::uint64_t step = 0;
  TrainingMode mode = TrainingMode::aegan;
  LossBreakdown breakdown;
};

std::string metrics_csv_header();
std::string to_csv_row(const MetricsRow& row);

struct TrainCallbacks {
  std::function<void(const MetricsRow&)> on_metrics;
  std::function<void(const TrainingState&)> on_checkpoint;
};

struct TrainResult {
  TrainingState state;
  std::vector<MetricsRow> metrics;
};

/// Runs config.training.total_steps steps from a fresh initialization.
TrainResult train(const RunConfig& config, const Dataset& dataset, const TrainCallbacks& callbacks = {});

/// Continues `state` until state.config.training.total_steps.
TrainResult resume(TrainingState state, const Dataset& dataset, const TrainCallbacks& callbacks = {});

/// Builds the dataset a run config describes.
Dataset load_dataset(const DataConfig& data);

}  // namespace aegan
