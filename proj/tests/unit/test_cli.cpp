#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "aegan/checkpoint.hpp"
#include "aegan/cli.hpp"
#include "aegan/image_io.hpp"
#include "support.hpp"

using namespace aegan;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "aegan");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

constexpr const char* kTinyMixture =
    "[model]\nlatent_dim = 2\ngenerator_widths = [8]\nencoder_widths = [8]\n"
    "sample_discriminator_widths = [8]\nlatent_discriminator_widths = [8]\n"
    "[training]\nbatch_size = 8\ntotal_steps = 30\nseed = 3\ncheckpoint_every = 10\nlog_every = 5\n"
    "[data]\nsamples_per_mode = 16\n";

class Workspace {
 public:
  Workspace() : dir_(testing::scratch_dir("cli")) {
    setenv(kRunsDirEnv, (dir_ / "runs").c_str(), 1);
    std::ofstream(dir_ / "mixture.toml") << kTinyMixture;
  }
  ~Workspace() {
    unsetenv(kRunsDirEnv);
    fs::remove_all(dir_);
  }
  fs::path operator/(const std::string& name) const { return dir_ / name; }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

}  // namespace

TEST_CASE("train writes the run layout") {
  Workspace ws;
  const auto r = run({"train", "--config", ws.path("mixture.toml"), "--out", ws.path("run")});
  REQUIRE(r.code == kExitOk);
  CHECK(fs::exists(ws / "run/manifest"));
  CHECK(fs::exists(ws / "run/checkpoints/step-00000010.ckpt"));
  CHECK(fs::exists(ws / "run/checkpoints/step-00000030.ckpt"));
  CHECK(fs::exists(ws / "run/figures/samples.png"));
  CHECK_FALSE(fs::exists(ws / "run/run.lock"));
  std::ifstream metrics(ws / "run/metrics.csv");
  std::string line;
  std::size_t rows = 0;
  while (std::getline(metrics, line)) ++rows;
  CHECK(rows == 1 + 6);
  const std::string manifest = slurp(ws / "run/manifest");
  CHECK(manifest.find("status = \"completed\"") != std::string::npos);
  CHECK(manifest.find("seed = 3") != std::string::npos);
}

TEST_CASE("default run directory comes from the environment") {
  Workspace ws;
  REQUIRE(run({"train", "--config", ws.path("mixture.toml"), "--mode", "gan", "--total-steps", "2"}).code == 0);
  std::vector<fs::path> runs;
  for (const auto& e : fs::directory_iterator(ws / "runs")) runs.push_back(e.path());
  REQUIRE(runs.size() == 1);
  const std::string name = runs[0].filename().string();
  CHECK(name.size() > 4);
  CHECK(name.substr(name.size() - 4) == "-gan");
}

TEST_CASE("configuration failures exit 2 and create nothing") {
  Workspace ws;
  auto r = run({"train", "--config", ws.path("missing.toml"), "--out", ws.path("run")});
  CHECK(r.code == kExitConfig);
  CHECK_FALSE(fs::exists(ws / "run"));
  CHECK_FALSE(fs::exists(ws / "runs"));

  r = run({"train", "--config", ws.path("mixture.toml"), "--set", "training.learnig_rate_d=1", "--out",
           ws.path("run")});
  CHECK(r.code == kExitConfig);
  CHECK(r.err.find("did you mean 'training.learning_rate_d'") != std::string::npos);
  CHECK_FALSE(fs::exists(ws / "run"));

  CHECK(run({"train", "--config", ws.path("mixture.toml"), "--mode", "vae"}).code == kExitConfig);
  CHECK(run({"frobnicate"}).code == kExitConfig);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("data failures exit 3") {
  Workspace ws;
  fs::create_directories(ws / "empty");
  std::ofstream(ws / "images.toml") << "[model]\nfamily = \"convolutional\"\ngenerator_widths = [4]\n"
                                       "encoder_widths = [4]\nsample_discriminator_widths = [4]\n"
                                       "[data]\nsource = \"images\"\nheight = 8\nwidth = 8\nimage_dir = \""
                                    << ws.path("empty") << "\"\n";
  CHECK(run({"train", "--config", ws.path("images.toml"), "--out", ws.path("run")}).code == kExitData);
  CHECK_FALSE(fs::exists(ws / "run"));
}

TEST_CASE("zero steps: manifest and initial checkpoint only") {
  Workspace ws;
  REQUIRE(run({"train", "--config", ws.path("mixture.toml"), "--total-steps", "0", "--out", ws.path("a")}).code == 0);
  std::vector<std::string> ckpts;
  for (const auto& e : fs::directory_iterator(ws / "a/checkpoints")) ckpts.push_back(e.path().filename().string());
  CHECK(ckpts == std::vector<std::string>{"step-00000000.ckpt"});
  const TrainingState s = load_checkpoint(ws / "a/checkpoints/step-00000000.ckpt");
  CHECK(s.step == 0);

  SUBCASE("gan and aegan runs share applicable initializations") {
    REQUIRE(run({"train", "--config", ws.path("mixture.toml"), "--total-steps", "0", "--mode", "gan", "--out",
                 ws.path("g")})
                .code == 0);
    const TrainingState g = load_checkpoint(ws / "g/checkpoints/step-00000000.ckpt");
    CHECK(g.model.generator.parameters() == s.model.generator.parameters());
    CHECK(g.model.sample_discriminator.parameters() == s.model.sample_discriminator.parameters());
  }
}

TEST_CASE("flags beat file values and the manifest reproduces the run") {
  Workspace ws;
  REQUIRE(run({"train", "--config", ws.path("mixture.toml"), "--seed", "5", "--set", "training.batch_size=16",
               "--out", ws.path("a")})
              .code == 0);
  const std::string manifest = slurp(ws / "a/manifest");
  CHECK(manifest.find("seed = 5") != std::string::npos);
  CHECK(manifest.find("batch_size = 16") != std::string::npos);

  REQUIRE(run({"train", "--config", ws.path("a/manifest"), "--out", ws.path("b")}).code == 0);
  CHECK(slurp(ws / "a/metrics.csv") == slurp(ws / "b/metrics.csv"));
  CHECK(slurp(ws / "a/checkpoints/step-00000030.ckpt") == slurp(ws / "b/checkpoints/step-00000030.ckpt"));
}

TEST_CASE("resume continues a run bitwise") {
  Workspace ws;
  REQUIRE(run({"train", "--config", ws.path("mixture.toml"), "--out", ws.path("full")}).code == 0);
  REQUIRE(run({"train", "--config", ws.path("mixture.toml"), "--total-steps", "10", "--out", ws.path("part")})
              .code == 0);
  REQUIRE(run({"train", "--resume", ws.path("part/checkpoints/step-00000010.ckpt"), "--total-steps", "30",
               "--out", ws.path("part")})
              .code == 0);
  CHECK(slurp(ws / "part/metrics.csv") == slurp(ws / "full/metrics.csv"));
  CHECK(slurp(ws / "part/checkpoints/step-00000030.ckpt") == slurp(ws / "full/checkpoints/step-00000030.ckpt"));
}

TEST_CASE("a locked run directory is refused") {
  Workspace ws;
  fs::create_directories(ws / "run");
  std::ofstream(ws / "run/run.lock") << "1\n";
  const auto r = run({"train", "--config", ws.path("mixture.toml"), "--out", ws.path("run")});
  CHECK(r.code != kExitOk);
  CHECK(r.err.find("locked") != std::string::npos);
}

TEST_CASE("evaluation commands on a mixture checkpoint") {
  Workspace ws;
  REQUIRE(run({"train", "--config", ws.path("mixture.toml"), "--total-steps", "0", "--out", ws.path("a")}).code == 0);
  REQUIRE(run({"train", "--config", ws.path("mixture.toml"), "--total-steps", "0", "--mode", "gan", "--out",
               ws.path("g")})
              .code == 0);
  const std::string ckpt = ws.path("a/checkpoints/step-00000000.ckpt");
  const std::string gan_ckpt = ws.path("g/checkpoints/step-00000000.ckpt");
  const std::string before = slurp(ckpt);

  SUBCASE("generate is reproducible") {
    REQUIRE(run({"generate", "--checkpoint", ckpt, "--seed", "4", "--out", ws.path("x/one.png")}).code == 0);
    REQUIRE(run({"generate", "--checkpoint", ckpt, "--seed", "4", "--out", ws.path("x/two.png")}).code == 0);
    CHECK(slurp(ws / "x/one.png") == slurp(ws / "x/two.png"));
    CHECK(run({"generate", "--checkpoint", ckpt, "--rows", "1", "--cols", "1", "--out", ws.path("x/1.png")}).code ==
          0);
    CHECK(run({"generate", "--checkpoint", gan_ckpt, "--out", ws.path("x/gan.png")}).code == 0);
  }

  SUBCASE("reconstruct needs an encoder") {
    auto r = run({"reconstruct", "--checkpoint", gan_ckpt, "--out", ws.path("rec")});
    CHECK(r.code == kExitConfig);
    CHECK(r.err.find("mode lacks encoder") != std::string::npos);
    r = run({"reconstruct", "--checkpoint", ckpt, "--n", "100000", "--out", ws.path("rec")});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("clamped") != std::string::npos);
    CHECK(fs::exists(ws / "rec/reconstruction_errors.csv"));
  }

  SUBCASE("evaluate reports on an untrained model") {
    auto r = run({"evaluate", "--checkpoint", ckpt, "--metric", "coverage", "--metric", "reconstruction", "--out",
                  ws.path("ev")});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("modes_hit=") != std::string::npos);
    CHECK(fs::exists(ws / "ev/coverage.csv"));
    CHECK(fs::exists(ws / "ev/summary.txt"));
    CHECK(run({"evaluate", "--checkpoint", ckpt, "--metric", "sharpness", "--out", ws.path("ev")}).code ==
          kExitConfig);
  }

  SUBCASE("interpolate between points") {
    CHECK(run({"interpolate", "--checkpoint", ckpt, "--a", "2,0", "--b", "0,2", "--steps", "10", "--out",
               ws.path("int")})
              .code == 0);
    CHECK(fs::exists(ws / "int/latent_path.csv"));
    CHECK(fs::exists(ws / "int/frames.csv"));
    CHECK(run({"interpolate", "--checkpoint", ckpt, "--a", "2,0", "--out", ws.path("int")}).code == kExitConfig);
    CHECK(run({"interpolate", "--checkpoint", gan_ckpt, "--a", "2,0", "--b", "1,1", "--out", ws.path("int")})
              .code == kExitConfig);
  }

  CHECK(slurp(ckpt) == before);
}

TEST_CASE("image runs: training, mirrored interpolation and grids") {
  Workspace ws;
  fs::create_directories(ws / "imgs");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 4; ++i) {
    Tensor img({8, 8, 3});
    for (double& v : img.values()) v = u(rng);
    write_png(img, ws / ("imgs/im" + std::to_string(i) + ".png"));
  }
  std::ofstream(ws / "images.toml") << "[model]\nfamily = \"convolutional\"\nlatent_dim = 4\n"
                                       "generator_widths = [4]\nencoder_widths = [4]\n"
                                       "sample_discriminator_widths = [4]\nlatent_discriminator_widths = [8]\n"
                                       "[training]\nbatch_size = 4\ntotal_steps = 3\n"
                                       "[data]\nsource = \"images\"\nheight = 8\nwidth = 8\nimage_dir = \""
                                    << ws.path("imgs") << "\"\n";
  REQUIRE(run({"train", "--config", ws.path("images.toml"), "--out", ws.path("run")}).code == 0);
  CHECK(fs::exists(ws / "run/figures/samples.png"));
  CHECK(fs::exists(ws / "run/figures/reconstructions.png"));
  const std::string ckpt = ws.path("run/checkpoints/step-00000003.ckpt");

  REQUIRE(run({"interpolate", "--checkpoint", ckpt, "--a", ws.path("imgs/im0.png"), "--mirror", "--steps", "10",
               "--out", ws.path("mirror")})
              .code == 0);
  const auto strip = read_image(ws / "mirror/interpolation.png", 12, 12 * 8 + 13 * 2);
  CHECK(strip.has_value());

  REQUIRE(run({"interpolate", "--checkpoint", ckpt, "--a", ws.path("imgs/im1.png"), "--b", ws.path("imgs/im1.png"),
               "--steps", "4", "--out", ws.path("same")})
              .code == 0);
  std::ifstream path(ws / "same/latent_path.csv");
  std::string header, first, line;
  std::getline(path, header);
  std::getline(path, first);
  while (std::getline(path, line)) CHECK(line.substr(line.find(',')) == first.substr(first.find(',')));

  CHECK(run({"reconstruct", "--checkpoint", ckpt, "--data", ws.path("imgs"), "--n", "4", "--out", ws.path("rec")})
            .code == 0);
  CHECK(fs::exists(ws / "rec/reconstructions.png"));
  CHECK(run({"evaluate", "--checkpoint", ckpt, "--metric", "coverage", "--out", ws.path("ev")}).code == kExitConfig);
}
