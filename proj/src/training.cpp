#include "aegan/training.hpp"

#include <cmath>
#include <sstream>

#include "aegan/errors.hpp"

namespace aegan {

namespace {

std::size_t role_index(NetworkRole role) { return static_cast<std::size_t>(role); }

constexpr std::uint64_t kPriorStream = 100;
constexpr std::uint64_t kShuffleStream = 200;

void negate(ParameterSet& p) {
  for (auto& t : p.tensors) {
    for (double& v : t.value.values()) v = -v;
  }
}

void check_finite(const LossBreakdown& b, std::uint64_t step) {
  const std::pair<const char*, const std::optional<double>*> components[] = {
      {"gan_x_hat", &b.gan_x_hat},   {"gan_x_tilde", &b.gan_x_tilde}, {"gan_z_hat", &b.gan_z_hat},
      {"gan_z_tilde", &b.gan_z_tilde}, {"recon_x", &b.recon_x},       {"recon_z", &b.recon_z}};
  for (const auto& [name, value] : components) {
    if (*value && !std::isfinite(**value)) throw NumericalError(name, step);
  }
  if (!std::isfinite(b.total)) throw NumericalError("total", step);
}

ObjectiveInputs draw_inputs(const Tensor& real_batch, const ActiveTerms& terms, std::size_t latent_dim,
                            Rng& rng) {
  const LatentPrior prior{latent_dim};
  const std::size_t n = real_batch.batch();
  ObjectiveInputs in;
  in.real_x = real_batch;
  if (terms.x_hat || terms.z_tilde || terms.recon_z) in.z_fake = sample_prior(prior, n, rng);
  if (terms.z_hat) in.z_prior_hat = sample_prior(prior, n, rng);
  if (terms.z_tilde) in.z_prior_tilde = sample_prior(prior, n, rng);
  return in;
}

std::string fmt_optional(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream os;
  os.precision(17);
  os << *v;
  return os.str();
}

}  // namespace

Network& AeganModel::get(NetworkRole role) {
  switch (role) {
    case NetworkRole::generator: return generator;
    case NetworkRole::encoder: return encoder;
    case NetworkRole::sample_discriminator: return sample_discriminator;
    case NetworkRole::latent_discriminator: return latent_discriminator;
  }
  throw UsageError("unknown role");
}

const Network& AeganModel::get(NetworkRole role) const {
  return const_cast<AeganModel&>(*this).get(role);
}

ParameterSet& ModelGradients::get(NetworkRole role) {
  switch (role) {
    case NetworkRole::generator: return generator;
    case NetworkRole::encoder: return encoder;
    case NetworkRole::sample_discriminator: return sample_discriminator;
    case NetworkRole::latent_discriminator: return latent_discriminator;
  }
  throw UsageError("unknown role");
}

const ParameterSet& ModelGradients::get(NetworkRole role) const {
  return const_cast<ModelGradients&>(*this).get(role);
}

bool is_active(TrainingMode mode, NetworkRole role) {
  switch (mode) {
    case TrainingMode::aegan: return true;
    case TrainingMode::gan:
      return role == NetworkRole::generator || role == NetworkRole::sample_discriminator;
    case TrainingMode::aae: return role != NetworkRole::sample_discriminator;
  }
  return false;
}

std::uint64_t network_seed(std::uint64_t run_seed, NetworkRole role) {
  return mix_seed(run_seed, 1 + role_index(role));
}

AeganModel build_model(const RunConfig& config) {
  validate(config);
  auto make = [&](NetworkRole role) {
    return make_network(network_spec(config, role), network_seed(config.training.seed, role));
  };
  return AeganModel{make(NetworkRole::generator), make(NetworkRole::encoder),
                    make(NetworkRole::sample_discriminator), make(NetworkRole::latent_discriminator)};
}

ActiveTerms ActiveTerms::for_mode(TrainingMode mode) {
  switch (mode) {
    case TrainingMode::aegan: return all();
    case TrainingMode::gan: {
      ActiveTerms t;
      t.x_hat = true;
      return t;
    }
    case TrainingMode::aae: {
      ActiveTerms t;
      t.z_hat = true;
      t.recon_x = true;
      return t;
    }
  }
  return {};
}

Tensor sample_prior(const LatentPrior& prior, std::size_t n, Rng& rng) {
  if (n == 0) throw UsageError("sample_prior needs n >= 1");
  if (prior.dimension == 0) throw UsageError("latent prior dimension must be positive");
  return standard_normal({n, prior.dimension}, rng);
}

ObjectiveSettings objective_settings(const TrainingConfig& config) {
  return {config.recon_weights, config.latent_norm, config.generator_loss_variant};
}

std::optional<Optimizer>& TrainingState::optimizer(NetworkRole role) {
  return optimizers[role_index(role)];
}

const std::optional<Optimizer>& TrainingState::optimizer(NetworkRole role) const {
  return optimizers[role_index(role)];
}

TrainingState initialize_training(const RunConfig& config) {
  TrainingState state{config, build_model(config), {}, 0, Rng(mix_seed(config.training.seed, kPriorStream))};
  const TrainingConfig& t = config.training;
  for (NetworkRole role : kAllRoles) {
    if (!is_active(t.mode, role)) continue;
    OptimizerSettings s;
    s.kind = t.optimizer;
    s.beta1 = t.beta1;
    s.beta2 = t.beta2;
    s.momentum = t.momentum;
    const bool discriminator =
        role == NetworkRole::sample_discriminator || role == NetworkRole::latent_discriminator;
    s.learning_rate = discriminator ? t.learning_rate_d : t.learning_rate_g_e;
    state.optimizer(role).emplace(s, state.model.get(role).parameters());
  }
  return state;
}

LossBreakdown discriminator_phase(TrainingState& state, const Tensor& real_batch, std::uint64_t step_number) {
  const TrainingConfig& t = state.config.training;
  const ActiveTerms terms = ActiveTerms::for_mode(t.mode);
  const ObjectiveInputs in = draw_inputs(real_batch, terms, state.config.model.latent_dim, state.rng);
  ObjectiveEvaluation eval =
      evaluate_objective(state.model, in, terms, objective_settings(t), ObjectiveSide::discriminator);
  check_finite(eval.breakdown, step_number);
  for (NetworkRole role : {NetworkRole::sample_discriminator, NetworkRole::latent_discriminator}) {
    if (!is_active(t.mode, role)) continue;
    ParameterSet& grads = eval.gradients.get(role);
    negate(grads);  // ascent
    state.optimizer(role)->step(state.model.get(role).parameters(), grads);
  }
  return eval.breakdown;
}

LossBreakdown generator_phase(TrainingState& state, const Tensor& real_batch, std::uint64_t step_number) {
  const TrainingConfig& t = state.config.training;
  const ActiveTerms terms = ActiveTerms::for_mode(t.mode);
  const ObjectiveInputs in = draw_inputs(real_batch, terms, state.config.model.latent_dim, state.rng);
  ObjectiveEvaluation eval =
      evaluate_objective(state.model, in, terms, objective_settings(t), ObjectiveSide::generator);
  check_finite(eval.breakdown, step_number);
  if (!std::isfinite(eval.value)) throw NumericalError("generator_side_loss", step_number);
  for (NetworkRole role : {NetworkRole::generator, NetworkRole::encoder}) {
    if (!is_active(t.mode, role)) continue;
    state.optimizer(role)->step(state.model.get(role).parameters(), eval.gradients.get(role));
  }
  return eval.breakdown;
}

LossBreakdown train_step(TrainingState& state, const Tensor& real_batch) {
  const std::uint64_t step_number = state.step + 1;
  require_row_shape(real_batch, state.model.generator.output_shape(), "training batch");
  for (std::size_t k = 0; k < state.config.training.discriminator_steps; ++k) {
    discriminator_phase(state, real_batch, step_number);
  }
  const LossBreakdown b = generator_phase(state, real_batch, step_number);
  state.step = step_number;
  return b;
}

std::string metrics_csv_header() {
  return "step,mode,gan_x_hat,gan_x_tilde,gan_z_hat,gan_z_tilde,recon_x,recon_z,total";
}

std::string to_csv_row(const MetricsRow& row) {
  const LossBreakdown& b = row.breakdown;
  std::string s = std::to_string(row.step) + "," + std::string(to_string(row.mode));
  for (const auto* v : {&b.gan_x_hat, &b.gan_x_tilde, &b.gan_z_hat, &b.gan_z_tilde, &b.recon_x, &b.recon_z}) {
    s += "," + fmt_optional(*v);
  }
  return s + "," + fmt_optional(b.total);
}

TrainResult train(const RunConfig& config, const Dataset& dataset, const TrainCallbacks& callbacks) {
  return resume(initialize_training(config), dataset, callbacks);
}

TrainResult resume(TrainingState state, const Dataset& dataset, const TrainCallbacks& callbacks) {
  const TrainingConfig& t = state.config.training;
  if (dataset.size() == 0) throw DataError("dataset is empty");
  if (dataset.size() < t.batch_size) {
    throw ConfigError("dataset of " + std::to_string(dataset.size()) +
                      " samples is smaller than batch_size " + std::to_string(t.batch_size));
  }
  require_row_shape(dataset.samples, sample_shape(state.config.data), "dataset");

  MinibatchStream batches(dataset, t.batch_size, mix_seed(t.seed, kShuffleStream));
  batches.seek(state.step);
  std::vector<MetricsRow> metrics;
  while (state.step < t.total_steps) {
    const LossBreakdown b = train_step(state, batches.next());
    if (state.step % t.log_every == 0) {
      MetricsRow row{state.step, t.mode, b};
      if (callbacks.on_metrics) callbacks.on_metrics(row);
      metrics.push_back(std::move(row));
    }
    if (callbacks.on_checkpoint && state.step % t.checkpoint_every == 0 && state.step < t.total_steps) {
      callbacks.on_checkpoint(state);
    }
  }
  if (callbacks.on_checkpoint) callbacks.on_checkpoint(state);
  return {std::move(state), std::move(metrics)};
}

Dataset load_dataset(const DataConfig& data) {
  if (data.source == DataSource::mixture) return make_gaussian_mixture(data.mixture, data.seed);
  return load_image_folder(data.image_dir, data.resolution, data.mirror);
}

}  // namespace aegan
