#pragma once

// Shared helpers for the unit and acceptance suites. The finite-difference
// oracle here only calls the forward path (compute_gradients = false), so it
// stays independent of the backward pass it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "aegan/config.hpp"
#include "aegan/random.hpp"
#include "aegan/training.hpp"

namespace aegan::testing {

/// Dense 2D-mixture config with networks small enough for exhaustive
/// finite-difference checks (each network <= 200 parameters).
inline RunConfig tiny_dense_config(std::uint64_t seed = 0) {
  RunConfig c;
  c.model.latent_dim = 2;
  c.model.generator_widths = {6};
  c.model.encoder_widths = {6};
  c.model.sample_discriminator_widths = {6};
  c.model.latent_discriminator_widths = {6};
  c.training.batch_size = 8;
  c.training.total_steps = 20;
  c.training.seed = seed;
  c.training.learning_rate_g_e = 1e-3;
  c.training.learning_rate_d = 1e-3;
  c.data.mixture.samples_per_mode = 16;
  c.data.seed = seed;
  return c;
}

inline ObjectiveInputs random_inputs(const RunConfig& c, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  ObjectiveInputs in;
  const Shape s = sample_shape(c.data);
  Shape xs{n};
  xs.insert(xs.end(), s.begin(), s.end());
  in.real_x = standard_normal(xs, rng);
  for (double& v : in.real_x.values()) v *= 1.5;
  in.z_fake = standard_normal({n, c.model.latent_dim}, rng);
  in.z_prior_hat = standard_normal({n, c.model.latent_dim}, rng);
  in.z_prior_tilde = standard_normal({n, c.model.latent_dim}, rng);
  return in;
}

/// |a - n| / max(|a|, |n|, floor).
inline double relative_error(double analytic, double numeric, double floor = 1e-6) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

struct GradCheckResult {
  std::size_t checked = 0;
  std::size_t failed = 0;
  double worst = 0.0;
};

/// Networks whose gradients a side computes.
inline std::vector<NetworkRole> side_roles(ObjectiveSide side) {
  switch (side) {
    case ObjectiveSide::discriminator:
      return {NetworkRole::sample_discriminator, NetworkRole::latent_discriminator};
    case ObjectiveSide::generator: return {NetworkRole::generator, NetworkRole::encoder};
    case ObjectiveSide::full: break;
  }
  return {kAllRoles.begin(), kAllRoles.end()};
}

/// Central differences of the objective value with respect to every
/// parameter of the networks the side optimizes, compared with
/// evaluate_objective's gradients.
inline GradCheckResult finite_difference_check(AeganModel model, const ObjectiveInputs& in,
                                               const ActiveTerms& terms, const ObjectiveSettings& settings,
                                               ObjectiveSide side, double step = 1e-4,
                                               double tolerance = 1e-3) {
  const ObjectiveEvaluation analytic = evaluate_objective(model, in, terms, settings, side);
  GradCheckResult r;
  for (NetworkRole role : side_roles(side)) {
    ParameterSet& params = model.get(role).parameters();
    const ParameterSet& grads = analytic.gradients.get(role);
    for (std::size_t i = 0; i < params.scalar_count(); ++i) {
      const double original = params.at(i);
      params.at(i) = original + step;
      const double up = evaluate_objective(model, in, terms, settings, side, false).value;
      params.at(i) = original - step;
      const double down = evaluate_objective(model, in, terms, settings, side, false).value;
      params.at(i) = original;
      const double numeric = (up - down) / (2.0 * step);
      const double err = relative_error(grads.at(i), numeric);
      r.worst = std::max(r.worst, err);
      ++r.checked;
      if (err >= tolerance) ++r.failed;
    }
  }
  return r;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  static std::mt19937_64 rng(std::random_device{}());
  const auto dir = std::filesystem::temp_directory_path() /
                   ("aegan-" + name + "-" + std::to_string(rng() % 1000000000ULL));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace aegan::testing
