#include "aegan/losses.hpp"

#include <cmath>
#include <string>

#include "aegan/errors.hpp"

namespace aegan {

namespace {

double mean_log(std::span<const double> p) {
  double s = 0.0;
  for (double v : p) s += std::log(v);
  return s / static_cast<double>(p.size());
}

double mean_log_complement(std::span<const double> p) {
  double s = 0.0;
  for (double v : p) s += std::log1p(-v);
  return s / static_cast<double>(p.size());
}

void require_nonempty(std::span<const double> p, const char* what) {
  if (p.empty()) throw UsageError(std::string(what) + " probability batch is empty");
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(what) + ": " + to_string(a.shape()) + " vs " + to_string(b.shape()));
  }
  if (a.batch() == 0) throw UsageError(std::string(what) + ": empty batch");
}

}  // namespace

void validate(const ReconWeights& w) {
  if (!std::isfinite(w.lambda_rx) || w.lambda_rx < 0.0) {
    throw ConfigError("lambda_rx must be finite and nonnegative");
  }
  if (!std::isfinite(w.lambda_rz) || w.lambda_rz < 0.0) {
    throw ConfigError("lambda_rz must be finite and nonnegative");
  }
}

std::string_view to_string(LatentNorm norm) {
  return norm == LatentNorm::euclidean ? "euclidean" : "squared_euclidean";
}

std::string_view to_string(GeneratorLossVariant variant) {
  return variant == GeneratorLossVariant::minimax ? "minimax" : "non_saturating";
}

LatentNorm parse_latent_norm(std::string_view text) {
  if (text == "euclidean") return LatentNorm::euclidean;
  if (text == "squared_euclidean") return LatentNorm::squared_euclidean;
  throw ConfigError("unknown latent norm '" + std::string(text) + "'");
}

GeneratorLossVariant parse_generator_loss_variant(std::string_view text) {
  if (text == "minimax") return GeneratorLossVariant::minimax;
  if (text == "non_saturating") return GeneratorLossVariant::non_saturating;
  throw ConfigError("unknown generator loss variant '" + std::string(text) + "'");
}

double adversarial_term(std::span<const double> real, std::span<const double> fake) {
  require_nonempty(real, "real");
  require_nonempty(fake, "fake");
  return mean_log(real) + mean_log_complement(fake);
}

double gan_loss_x_hat(std::span<const double> dx_real, std::span<const double> dx_fake) {
  return adversarial_term(dx_real, dx_fake);
}

double gan_loss_x_tilde(std::span<const double> dx_real, std::span<const double> dx_recon) {
  return adversarial_term(dx_real, dx_recon);
}

double gan_loss_z_hat(std::span<const double> dz_real, std::span<const double> dz_encoded) {
  return adversarial_term(dz_real, dz_encoded);
}

double gan_loss_z_tilde(std::span<const double> dz_real, std::span<const double> dz_cycled) {
  return adversarial_term(dz_real, dz_cycled);
}

void adversarial_term_gradient(std::span<const double> real, std::span<const double> fake,
                               std::span<double> d_real, std::span<double> d_fake) {
  require_nonempty(real, "real");
  require_nonempty(fake, "fake");
  const double nr = static_cast<double>(real.size());
  const double nf = static_cast<double>(fake.size());
  for (std::size_t i = 0; i < real.size(); ++i) d_real[i] = 1.0 / (nr * real[i]);
  for (std::size_t i = 0; i < fake.size(); ++i) d_fake[i] = -1.0 / (nf * (1.0 - fake[i]));
}

double generator_term(std::span<const double> fake, GeneratorLossVariant variant) {
  require_nonempty(fake, "fake");
  return variant == GeneratorLossVariant::minimax ? mean_log_complement(fake) : -mean_log(fake);
}

void generator_term_gradient(std::span<const double> fake, GeneratorLossVariant variant,
                             std::span<double> d_fake) {
  require_nonempty(fake, "fake");
  const double n = static_cast<double>(fake.size());
  for (std::size_t i = 0; i < fake.size(); ++i) {
    d_fake[i] = variant == GeneratorLossVariant::minimax ? -1.0 / (n * (1.0 - fake[i]))
                                                         : -1.0 / (n * fake[i]);
  }
}

double sample_reconstruction(const Tensor& x, const Tensor& x_recon) {
  require_same_shape(x, x_recon, "sample reconstruction");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x_recon[i] - x[i]);
  return s / static_cast<double>(x.size());
}

double latent_reconstruction(const Tensor& z, const Tensor& z_recon, LatentNorm norm) {
  require_same_shape(z, z_recon, "latent reconstruction");
  double total = 0.0;
  for (std::size_t r = 0; r < z.batch(); ++r) {
    const auto a = z.row(r);
    const auto b = z_recon.row(r);
    double sq = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) sq += (b[j] - a[j]) * (b[j] - a[j]);
    total += norm == LatentNorm::euclidean ? std::sqrt(sq) : sq;
  }
  return total / static_cast<double>(z.batch());
}

Tensor sample_reconstruction_gradient(const Tensor& x, const Tensor& x_recon) {
  require_same_shape(x, x_recon, "sample reconstruction");
  Tensor g(x.shape());
  const double scale = 1.0 / static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x_recon[i] - x[i];
    g[i] = d > 0.0 ? scale : (d < 0.0 ? -scale : 0.0);
  }
  return g;
}

Tensor latent_reconstruction_gradient(const Tensor& z, const Tensor& z_recon, LatentNorm norm) {
  require_same_shape(z, z_recon, "latent reconstruction");
  Tensor g(z.shape());
  const double inv_batch = 1.0 / static_cast<double>(z.batch());
  for (std::size_t r = 0; r < z.batch(); ++r) {
    const auto a = z.row(r);
    const auto b = z_recon.row(r);
    auto out = g.row(r);
    double sq = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) sq += (b[j] - a[j]) * (b[j] - a[j]);
    if (norm == LatentNorm::squared_euclidean) {
      for (std::size_t j = 0; j < a.size(); ++j) out[j] = 2.0 * (b[j] - a[j]) * inv_batch;
    } else if (sq > 0.0) {
      const double inv_norm = 1.0 / std::sqrt(sq);
      for (std::size_t j = 0; j < a.size(); ++j) out[j] = (b[j] - a[j]) * inv_norm * inv_batch;
    }
  }
  return g;
}

ReconstructionLoss reconstruction_loss(const Tensor& x, const Tensor& x_recon, const Tensor& z,
                                       const Tensor& z_recon, const ReconWeights& weights,
                                       LatentNorm norm) {
  validate(weights);
  ReconstructionLoss out;
  out.recon_x = sample_reconstruction(x, x_recon);
  out.recon_z = latent_reconstruction(z, z_recon, norm);
  out.weighted_sum = weights.lambda_rx * out.recon_x + weights.lambda_rz * out.recon_z;
  return out;
}

double aegan_total(const LossBreakdown& b, const ReconWeights& w) {
  double total = 0.0;
  for (const auto& c : {b.gan_x_hat, b.gan_x_tilde, b.gan_z_hat, b.gan_z_tilde}) {
    if (c) total += *c;
  }
  if (b.recon_x) total += w.lambda_rx * *b.recon_x;
  if (b.recon_z) total += w.lambda_rz * *b.recon_z;
  return total;
}

LossBreakdown aegan_loss(const LossInputs& in, const ReconWeights& weights) {
  validate(weights);
  LossBreakdown b;
  if (in.x_hat) b.gan_x_hat = gan_loss_x_hat(in.x_hat->real, in.x_hat->fake);
  if (in.x_tilde) b.gan_x_tilde = gan_loss_x_tilde(in.x_tilde->real, in.x_tilde->fake);
  if (in.z_hat) b.gan_z_hat = gan_loss_z_hat(in.z_hat->real, in.z_hat->fake);
  if (in.z_tilde) b.gan_z_tilde = gan_loss_z_tilde(in.z_tilde->real, in.z_tilde->fake);
  b.recon_x = in.recon_x;
  b.recon_z = in.recon_z;
  b.total = aegan_total(b, weights);
  return b;
}

double generator_side_loss(const LossInputs& in, const ReconWeights& weights,
                           GeneratorLossVariant variant) {
  validate(weights);
  double total = 0.0;
  for (const auto* pair : {&in.x_hat, &in.x_tilde, &in.z_hat, &in.z_tilde}) {
    if (*pair) total += generator_term((*pair)->fake, variant);
  }
  if (in.recon_x) total += weights.lambda_rx * *in.recon_x;
  if (in.recon_z) total += weights.lambda_rz * *in.recon_z;
  return total;
}

}  // namespace aegan
