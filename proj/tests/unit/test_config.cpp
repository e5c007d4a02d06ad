#include <doctest.h>

#include <fstream>

#include "aegan/config.hpp"
#include "aegan/errors.hpp"
#include "support.hpp"

using namespace aegan;

namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("canonical text round-trips") {
  RunConfig c;
  c.model.latent_dim = 7;
  c.model.generator_widths = {3, 5, 9};
  c.training.mode = TrainingMode::aae;
  c.training.learning_rate_d = 0.1 + 0.2;
  c.training.recon_weights = {0.25, 3.0};
  c.training.latent_norm = LatentNorm::squared_euclidean;
  c.training.optimizer = OptimizerKind::momentum;
  c.training.generator_loss_variant = GeneratorLossVariant::minimax;
  c.training.seed = 0xFFFFFFFFFFFFull;
  c.data.mixture.mode_std = 1.0 / 3.0;
  c.data.mirror = false;
  const std::string text = to_config_text(c);
  const RunConfig back = parse_config(text);
  CHECK(to_config_text(back) == text);
  CHECK(config_hash(back) == config_hash(c));
  CHECK(back.training.learning_rate_d == 0.1 + 0.2);
  CHECK(back.data.mixture.mode_std == 1.0 / 3.0);
  CHECK(back.model.generator_widths == std::vector<std::size_t>{3, 5, 9});
}

TEST_CASE("partial files fall back to defaults, comments are ignored") {
  const RunConfig c = parse_config(
      "# a comment\n"
      "[training]\n"
      "mode = \"gan\"   # trailing\n"
      "batch_size = 64\n"
      "\n"
      "[run]\n"
      "started = \"whenever\"\n");
  CHECK(c.training.mode == TrainingMode::gan);
  CHECK(c.training.batch_size == 64);
  CHECK(c.model.latent_dim == RunConfig{}.model.latent_dim);
}

TEST_CASE("unknown keys suggest the nearest valid key") {
  const auto msg = error_of([] { parse_config("[training]\nlearnig_rate_d = 1e-3\n"); });
  CHECK(msg.find("training.learnig_rate_d") != std::string::npos);
  CHECK(msg.find("did you mean 'training.learning_rate_d'") != std::string::npos);
  CHECK_FALSE(error_of([] { parse_config("[modle]\nlatent_dim = 3\n"); }).empty());
  CHECK_FALSE(error_of([] { parse_config("latent_dim = 3\n"); }).empty());
}

TEST_CASE("bad values are rejected by parsing or validation") {
  CHECK_FALSE(error_of([] { parse_config("[training]\nmode = \"vae\"\n"); }).empty());
  CHECK_FALSE(error_of([] { parse_config("[training]\nbatch_size = -3\n"); }).empty());
  CHECK_FALSE(error_of([] { validate(parse_config("[training]\nbatch_size = 0\n")); }).empty());
  CHECK_FALSE(error_of([] { validate(parse_config("[training]\nlambda_rx = -1\n")); }).empty());
  CHECK_FALSE(error_of([] { parse_config("[training]\nlearning_rate_d = abc\n"); }).empty());
  CHECK_FALSE(error_of([] { validate(parse_config("[data]\nsource = \"images\"\n")); }).empty());
  CHECK_FALSE(error_of([] { validate(parse_config("[model]\ngenerator_widths = [4, 0]\n")); }).empty());
}

TEST_CASE("overrides take precedence over the file") {
  RunConfig c = parse_config("[training]\nmode = \"gan\"\nseed = 3\n");
  apply_override(c, "training.mode", "aae");
  apply_override(c, "training.seed", "11");
  apply_override(c, "model.encoder_widths", "[8, 8]");
  CHECK(c.training.mode == TrainingMode::aae);
  CHECK(c.training.seed == 11);
  CHECK(c.model.encoder_widths == std::vector<std::size_t>{8, 8});
  CHECK_THROWS_AS(apply_override(c, "training.sed", "1"), ConfigError);
}

TEST_CASE("config hash ignores budget and cadence only") {
  const RunConfig base = testing::tiny_dense_config(0);
  RunConfig c = base;
  c.training.total_steps = 99999;
  c.training.checkpoint_every = 7;
  c.training.log_every = 3;
  CHECK(config_hash(c) == config_hash(base));
  c.training.learning_rate_g_e *= 2;
  CHECK(config_hash(c) != config_hash(base));
  c = base;
  c.data.seed = 1;
  CHECK(config_hash(c) != config_hash(base));
}

TEST_CASE("derived shapes and specs") {
  RunConfig c;
  CHECK(sample_shape(c.data) == Shape{2});
  const ValueRange r = value_range(c.data);
  CHECK(r.low < -2.0);
  CHECK(r.high > 2.0);
  CHECK(network_spec(c, NetworkRole::generator).output_scale == r.half_width());
  CHECK(network_spec(c, NetworkRole::generator).layer_widths == std::vector<std::size_t>{32, 64, 64, 2});
  CHECK(network_spec(c, NetworkRole::latent_discriminator).layer_widths ==
        std::vector<std::size_t>{32, 64, 64, 1});

  c.data.source = DataSource::images;
  c.data.resolution = {16, 16};
  c.model.family = ArchitectureFamily::convolutional;
  CHECK(sample_shape(c.data) == Shape{16, 16, 3});
  CHECK(value_range(c.data) == ValueRange{-1.0, 1.0});
  CHECK(network_spec(c, NetworkRole::latent_discriminator).family == ArchitectureFamily::dense);
}

TEST_CASE("load_config reports missing files") {
  CHECK_THROWS_AS(load_config("/nonexistent/aegan.toml"), ConfigError);
  const auto dir = testing::scratch_dir("config");
  std::ofstream(dir / "c.toml") << "[model]\nlatent_dim = 4\n";
  CHECK(load_config(dir / "c.toml").model.latent_dim == 4);
  std::filesystem::remove_all(dir);
}
