#include <cmath>

#include "aegan/errors.hpp"
#include "aegan/training.hpp"

namespace aegan {

namespace {

std::vector<double> as_vector(const Tensor& probabilities) {
  return {probabilities.values().begin(), probabilities.values().end()};
}

Tensor column(const std::vector<double>& values) {
  return Tensor({values.size(), 1}, values);
}

void add_into(Tensor& target, const Tensor& source) {
  if (target.empty()) {
    target = source;
    return;
  }
  for (std::size_t i = 0; i < target.size(); ++i) target[i] += source[i];
}

void scale(Tensor& t, double s) {
  for (double& v : t.values()) v *= s;
}

// Gradient of the optimized value with respect to each discriminator output
// of one adversarial component.
struct ProbabilityGrads {
  Tensor d_real;
  Tensor d_fake;
};

ProbabilityGrads component_grads(const ProbabilityPair& pair, ObjectiveSide side,
                                 GeneratorLossVariant variant) {
  ProbabilityGrads g;
  std::vector<double> d_real(pair.real.size()), d_fake(pair.fake.size());
  if (side == ObjectiveSide::generator) {
    generator_term_gradient(pair.fake, variant, d_fake);
  } else {
    adversarial_term_gradient(pair.real, pair.fake, d_real, d_fake);
  }
  g.d_real = column(d_real);
  g.d_fake = column(d_fake);
  return g;
}

}  // namespace

ObjectiveEvaluation evaluate_objective(const AeganModel& model, const ObjectiveInputs& in,
                                       const ActiveTerms& terms, const ObjectiveSettings& settings,
                                       ObjectiveSide side, bool compute_gradients) {
  validate(settings.weights);
  const bool use_x_hat = terms.x_hat || terms.z_tilde || terms.recon_z;
  const bool use_z_hat = terms.z_hat || terms.x_tilde || terms.recon_x;
  const bool use_x_tilde = terms.x_tilde || terms.recon_x;
  const bool use_z_tilde = terms.z_tilde || terms.recon_z;

  const Network& g_net = model.generator;
  const Network& e_net = model.encoder;
  const Network& dx_net = model.sample_discriminator;
  const Network& dz_net = model.latent_discriminator;

  // Forward.
  ForwardTrace g_hat_trace, e_hat_trace, g_tilde_trace, e_tilde_trace;
  Tensor x_hat, z_hat, x_tilde, z_tilde;
  if (use_x_hat) x_hat = g_net.forward(in.z_fake, g_hat_trace);
  if (use_z_hat) z_hat = e_net.forward(in.real_x, e_hat_trace);
  if (use_x_tilde) x_tilde = g_net.forward(z_hat, g_tilde_trace);
  if (use_z_tilde) z_tilde = e_net.forward(x_hat, e_tilde_trace);

  ForwardTrace dx_real_trace, dx_hat_trace, dx_tilde_trace;
  ForwardTrace dz_real_hat_trace, dz_hat_trace, dz_real_tilde_trace, dz_tilde_trace;
  LossInputs li;
  if (terms.x_hat || terms.x_tilde) {
    const auto real = as_vector(dx_net.forward(in.real_x, dx_real_trace));
    if (terms.x_hat) li.x_hat = ProbabilityPair{real, as_vector(dx_net.forward(x_hat, dx_hat_trace))};
    if (terms.x_tilde) {
      li.x_tilde = ProbabilityPair{real, as_vector(dx_net.forward(x_tilde, dx_tilde_trace))};
    }
  }
  if (terms.z_hat) {
    li.z_hat = ProbabilityPair{as_vector(dz_net.forward(in.z_prior_hat, dz_real_hat_trace)),
                               as_vector(dz_net.forward(z_hat, dz_hat_trace))};
  }
  if (terms.z_tilde) {
    li.z_tilde = ProbabilityPair{as_vector(dz_net.forward(in.z_prior_tilde, dz_real_tilde_trace)),
                                 as_vector(dz_net.forward(z_tilde, dz_tilde_trace))};
  }
  if (terms.recon_x) li.recon_x = sample_reconstruction(in.real_x, x_tilde);
  if (terms.recon_z) li.recon_z = latent_reconstruction(in.z_fake, z_tilde, settings.latent_norm);

  ObjectiveEvaluation result;
  result.breakdown = aegan_loss(li, settings.weights);
  switch (side) {
    case ObjectiveSide::full:
      result.value = result.breakdown.total;
      break;
    case ObjectiveSide::discriminator: {
      LossBreakdown adversarial = result.breakdown;
      adversarial.recon_x.reset();
      adversarial.recon_z.reset();
      result.value = aegan_total(adversarial, settings.weights);
      break;
    }
    case ObjectiveSide::generator:
      result.value = generator_side_loss(li, settings.weights, settings.variant);
      break;
  }

  result.gradients.generator = g_net.parameters().zeros_like();
  result.gradients.encoder = e_net.parameters().zeros_like();
  result.gradients.sample_discriminator = dx_net.parameters().zeros_like();
  result.gradients.latent_discriminator = dz_net.parameters().zeros_like();
  if (!compute_gradients) return result;

  const bool want_d = side != ObjectiveSide::generator;
  const bool want_ge = side != ObjectiveSide::discriminator;
  ParameterSet* dx_grads = want_d ? &result.gradients.sample_discriminator : nullptr;
  ParameterSet* dz_grads = want_d ? &result.gradients.latent_discriminator : nullptr;

  // Discriminators. Real-sample outputs only matter for the discriminator
  // parameters; fake outputs also feed gradients back into G and E.
  Tensor d_x_hat, d_z_hat, d_x_tilde, d_z_tilde;
  Tensor d_dx_real;
  if (li.x_hat) {
    auto g = component_grads(*li.x_hat, side, settings.variant);
    if (want_d) add_into(d_dx_real, g.d_real);
    Tensor din = dx_net.backward(dx_hat_trace, g.d_fake, dx_grads, want_ge);
    if (want_ge) add_into(d_x_hat, din);
  }
  if (li.x_tilde) {
    auto g = component_grads(*li.x_tilde, side, settings.variant);
    if (want_d) add_into(d_dx_real, g.d_real);
    Tensor din = dx_net.backward(dx_tilde_trace, g.d_fake, dx_grads, want_ge);
    if (want_ge) add_into(d_x_tilde, din);
  }
  if (want_d && !d_dx_real.empty()) dx_net.backward(dx_real_trace, d_dx_real, dx_grads, false);
  if (li.z_hat) {
    auto g = component_grads(*li.z_hat, side, settings.variant);
    if (want_d) dz_net.backward(dz_real_hat_trace, g.d_real, dz_grads, false);
    Tensor din = dz_net.backward(dz_hat_trace, g.d_fake, dz_grads, want_ge);
    if (want_ge) add_into(d_z_hat, din);
  }
  if (li.z_tilde) {
    auto g = component_grads(*li.z_tilde, side, settings.variant);
    if (want_d) dz_net.backward(dz_real_tilde_trace, g.d_real, dz_grads, false);
    Tensor din = dz_net.backward(dz_tilde_trace, g.d_fake, dz_grads, want_ge);
    if (want_ge) add_into(d_z_tilde, din);
  }
  if (!want_ge) return result;

  // Reconstruction terms reach only G and E.
  if (terms.recon_x) {
    Tensor g = sample_reconstruction_gradient(in.real_x, x_tilde);
    scale(g, settings.weights.lambda_rx);
    add_into(d_x_tilde, g);
  }
  if (terms.recon_z) {
    Tensor g = latent_reconstruction_gradient(in.z_fake, z_tilde, settings.latent_norm);
    scale(g, settings.weights.lambda_rz);
    add_into(d_z_tilde, g);
  }

  // Cycle paths first, so their gradients reach z_hat and x_hat before those
  // are propagated into E(x) and G(z).
  if (use_x_tilde && !d_x_tilde.empty()) {
    add_into(d_z_hat, g_net.backward(g_tilde_trace, d_x_tilde, &result.gradients.generator));
  }
  if (use_z_tilde && !d_z_tilde.empty()) {
    add_into(d_x_hat, e_net.backward(e_tilde_trace, d_z_tilde, &result.gradients.encoder));
  }
  if (use_z_hat && !d_z_hat.empty()) {
    e_net.backward(e_hat_trace, d_z_hat, &result.gradients.encoder, false);
  }
  if (use_x_hat && !d_x_hat.empty()) {
    g_net.backward(g_hat_trace, d_x_hat, &result.gradients.generator, false);
  }
  return result;
}

}  // namespace aegan
