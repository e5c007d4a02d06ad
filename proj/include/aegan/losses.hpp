#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "aegan/tensor.hpp"

namespace aegan {

/// Weights of the sample (L1) and latent (L2) reconstruction terms.
struct ReconWeights {
  double lambda_rx = 1.0;
  double lambda_rz = 1.0;

  friend bool operator==(const ReconWeights&, const ReconWeights&) = default;
};

/// Throws ConfigError unless both weights are finite and nonnegative.
void validate(const ReconWeights& weights);

/// How the latent reconstruction distance is measured per vector.
enum class LatentNorm { euclidean, squared_euclidean };

enum class GeneratorLossVariant { minimax, non_saturating };

std::string_view to_string(LatentNorm norm);
std::string_view to_string(GeneratorLossVariant variant);
LatentNorm parse_latent_norm(std::string_view text);
GeneratorLossVariant parse_generator_loss_variant(std::string_view text);

/// Shared kernel behind all four adversarial components:
/// mean(log real) + mean(log(1 - fake)). Throws UsageError on empty input.
double adversarial_term(std::span<const double> real, std::span<const double> fake);

/// L_GAN over (D_x(x), D_x(G(z))).
double gan_loss_x_hat(std::span<const double> dx_real, std::span<const double> dx_fake);
/// L_GAN over (D_x(x), D_x(G(E(x)))).
double gan_loss_x_tilde(std::span<const double> dx_real, std::span<const double> dx_recon);
/// L_GAN over (D_z(z), D_z(E(x))).
double gan_loss_z_hat(std::span<const double> dz_real, std::span<const double> dz_encoded);
/// L_GAN over (D_z(z), D_z(E(G(z)))).
double gan_loss_z_tilde(std::span<const double> dz_real, std::span<const double> dz_cycled);

/// Derivatives of adversarial_term with respect to each probability.
void adversarial_term_gradient(std::span<const double> real, std::span<const double> fake,
                               std::span<double> d_real, std::span<double> d_fake);

/// Generator-side value of one adversarial component. Minimax keeps
/// mean(log(1 - fake)); non-saturating uses -mean(log fake).
double generator_term(std::span<const double> fake, GeneratorLossVariant variant);
void generator_term_gradient(std::span<const double> fake, GeneratorLossVariant variant,
                             std::span<double> d_fake);

/// Mean absolute difference over every element (mean over the batch of the
/// per-sample element mean).
double sample_reconstruction(const Tensor& x, const Tensor& x_recon);
/// Mean over the batch of ||z_recon - z||, squared when requested.
double latent_reconstruction(const Tensor& z, const Tensor& z_recon,
                             LatentNorm norm = LatentNorm::euclidean);

/// d sample_reconstruction / d x_recon. Uses sign(0) = 0.
Tensor sample_reconstruction_gradient(const Tensor& x, const Tensor& x_recon);
/// d latent_reconstruction / d z_recon. Zero where the difference vanishes.
Tensor latent_reconstruction_gradient(const Tensor& z, const Tensor& z_recon,
                                      LatentNorm norm = LatentNorm::euclidean);

struct ReconstructionLoss {
  double recon_x = 0.0;
  double recon_z = 0.0;
  double weighted_sum = 0.0;
};

ReconstructionLoss reconstruction_loss(const Tensor& x, const Tensor& x_recon, const Tensor& z,
                                       const Tensor& z_recon, const ReconWeights& weights,
                                       LatentNorm norm = LatentNorm::euclidean);

/// Per-step loss values. Components that the active mode does not use are
/// left empty; `total` sums the present ones.
struct LossBreakdown {
  std::optional<double> gan_x_hat;
  std::optional<double> gan_x_tilde;
  std::optional<double> gan_z_hat;
  std::optional<double> gan_z_tilde;
  std::optional<double> recon_x;  // unweighted
  std::optional<double> recon_z;  // unweighted
  double total = 0.0;
};

/// gan_x_hat + gan_x_tilde + gan_z_hat + gan_z_tilde + lambda_rx recon_x +
/// lambda_rz recon_z, skipping absent components.
double aegan_total(const LossBreakdown& breakdown, const ReconWeights& weights);

struct ProbabilityPair {
  std::vector<double> real;
  std::vector<double> fake;
};

/// Discriminator outputs and reconstruction terms feeding one evaluation of
/// the composite objective.
struct LossInputs {
  std::optional<ProbabilityPair> x_hat;
  std::optional<ProbabilityPair> x_tilde;
  std::optional<ProbabilityPair> z_hat;
  std::optional<ProbabilityPair> z_tilde;
  std::optional<double> recon_x;
  std::optional<double> recon_z;
};

/// The composite objective. Generator and encoder minimize it; the
/// discriminators maximize it.
LossBreakdown aegan_loss(const LossInputs& inputs, const ReconWeights& weights);

/// Objective the generator and encoder descend on: the fake-side term of each
/// present adversarial component plus the weighted reconstruction terms.
double generator_side_loss(const LossInputs& inputs, const ReconWeights& weights,
                           GeneratorLossVariant variant);

}  // namespace aegan
