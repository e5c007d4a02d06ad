#include "aegan/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "aegan/checkpoint.hpp"
#include "aegan/config.hpp"
#include "aegan/errors.hpp"
#include "aegan/eval.hpp"
#include "aegan/image_io.hpp"
#include "aegan/training.hpp"

#ifndef AEGAN_VERSION
#define AEGAN_VERSION "unknown"
#endif

namespace aegan {

namespace fs = std::filesystem;

const char* artifact_version() { return AEGAN_VERSION; }

namespace {

std::string utc_timestamp(const char* format) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, format);
  return os.str();
}

// Advisory lock: a file created exclusively inside the run directory.
class RunLock {
 public:
  explicit RunLock(fs::path path) : path_(std::move(path)) {
    std::FILE* f = std::fopen(path_.c_str(), "wx");
    if (!f) throw UsageError("run directory is locked by another command: " + path_.string());
    std::fprintf(f, "%ld\n", static_cast<long>(std::time(nullptr)));
    std::fclose(f);
  }
  ~RunLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }
  RunLock(const RunLock&) = delete;
  RunLock& operator=(const RunLock&) = delete;

 private:
  fs::path path_;
};

fs::path default_runs_root() {
  if (const char* env = std::getenv(kRunsDirEnv); env && *env) return env;
  return "runs";
}

fs::path fresh_run_dir(const fs::path& root, TrainingMode mode) {
  const std::string base = utc_timestamp("%Y%m%d-%H%M%S") + "-" + std::string(to_string(mode));
  fs::path dir = root / base;
  for (int k = 2; fs::exists(dir); ++k) dir = root / (base + "-" + std::to_string(k));
  return dir;
}

struct Manifest {
  std::string command;
  std::string started;
  std::string ended;
  std::string status;
  RunConfig config;
};

void write_manifest(const fs::path& dir, const Manifest& m) {
  std::ostringstream os;
  os << "# Run manifest. Usable as a config file: `aegan train --config <this file>`.\n"
     << "[run]\n"
     << "version = \"" << artifact_version() << "\"\n"
     << "command = \"" << m.command << "\"\n"
     << "seed = " << m.config.training.seed << "\n"
     << "config_hash = \"" << std::hex << config_hash(m.config) << std::dec << "\"\n"
     << "started = \"" << m.started << "\"\n"
     << "ended = \"" << m.ended << "\"\n"
     << "status = \"" << m.status << "\"\n"
     << "layout = \"manifest, metrics.csv, checkpoints/, figures/\"\n\n"
     << to_config_text(m.config);
  const fs::path tmp = dir / "manifest.tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw DataError("cannot write manifest in " + dir.string());
    out << os.str();
  }
  fs::rename(tmp, dir / "manifest");
}

fs::path checkpoint_path(const fs::path& dir, std::uint64_t step) {
  std::ostringstream name;
  name << "step-" << std::setw(8) << std::setfill('0') << step << ".ckpt";
  return dir / name.str();
}

bool has_encoder(const TrainingState& s) { return is_active(s.config.training.mode, NetworkRole::encoder); }

void require_encoder(const TrainingState& s) {
  if (!has_encoder(s)) {
    throw UsageError("mode lacks encoder: checkpoint was trained in " +
                     std::string(to_string(s.config.training.mode)) + " mode");
  }
}

bool is_points(const RunConfig& c) { return c.data.source == DataSource::mixture; }

Tensor read_points_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  std::string line;
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty() || line == "x,y") continue;
    const auto comma = line.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument(line);
      values.push_back(std::stod(line.substr(0, comma)));
      values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw DataError("malformed point '" + line + "' in " + path.string());
    }
  }
  if (values.empty()) throw DataError("no points in " + path.string());
  Tensor t({values.size() / 2, 2});
  std::copy(values.begin(), values.end(), t.values().begin());
  return t;
}

// --data may name an image folder or an x,y CSV; without it the checkpoint's
// own data settings are used.
Dataset evaluation_dataset(const RunConfig& config, const std::string& data_path,
                           std::optional<std::uint64_t> data_seed) {
  if (!data_path.empty()) {
    if (fs::is_directory(data_path)) {
      if (is_points(config)) throw UsageError("checkpoint expects 2D points, got an image folder");
      return load_image_folder(data_path, config.data.resolution, false);
    }
    if (!is_points(config)) throw UsageError("checkpoint expects an image folder for --data");
    Dataset d;
    d.samples = read_points_csv(data_path);
    d.value_range = value_range(config.data);
    d.source = data_path;
    return d;
  }
  DataConfig data = config.data;
  if (data_seed) data.seed = *data_seed;
  return load_dataset(data);
}

Tensor parse_point(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument(text);
    Tensor t({1, 2});
    t[0] = std::stod(text.substr(0, comma));
    t[1] = std::stod(text.substr(comma + 1));
    return t;
  } catch (const std::exception&) {
    throw UsageError("expected a point as 'x,y', got '" + text + "'");
  }
}

Tensor load_sample(const RunConfig& config, const std::string& spec) {
  if (is_points(config)) return parse_point(spec);
  const auto img = read_image(spec, config.data.resolution.height, config.data.resolution.width);
  if (!img) throw DataError("cannot decode image " + spec);
  return img->reshaped({1, config.data.resolution.height, config.data.resolution.width, 3});
}

void write_summary(const fs::path& path, const std::string& text, std::ostream& out) {
  std::ofstream f(path);
  if (!f) throw DataError("cannot write " + path.string());
  f << text;
  out << text;
}

std::string reconstruction_summary(const ReconstructionReport& r) {
  std::ostringstream os;
  os << "reconstruction: n=" << r.errors.size() << " mean=" << r.mean << " median=" << r.median
     << " p90=" << r.p90 << " max=" << r.max << (r.clamped ? " (clamped)" : "") << '\n';
  return os.str();
}

void write_reconstruction_outputs(const ReconstructionReport& r, bool points, const fs::path& dir) {
  write_reconstruction_csv(r, dir / "reconstruction_errors.csv");
  if (points) {
    std::ofstream f(dir / "reconstruction_pairs.csv");
    f.precision(17);
    f << "x,y,x_recon,y_recon\n";
    for (std::size_t i = 0; i < r.errors.size(); ++i) {
      f << r.originals[2 * i] << ',' << r.originals[2 * i + 1] << ',' << r.reconstructions[2 * i] << ','
        << r.reconstructions[2 * i + 1] << '\n';
    }
  } else {
    write_png(render_pair_grid(r.originals, r.reconstructions, 4), dir / "reconstructions.png");
  }
}

// Sample figure for a trained model: an image grid, or a scatter of 2D
// samples over the mixture centers.
void write_sample_figure(const TrainingState& s, std::size_t rows, std::size_t cols, std::uint64_t seed,
                         const fs::path& png) {
  const LatentPrior prior{s.config.model.latent_dim};
  const ValueRange range = value_range(s.config.data);
  const SampleGrid g = sample_grid(s.model.generator, prior, rows, cols, seed, range);
  if (is_points(s.config)) {
    const auto centers = mixture_centers(s.config.data.mixture);
    write_png(render_scatter(g.samples, range, 256, centers), png);
    fs::path csv = png;
    write_points_csv(g.samples, csv.replace_extension(".csv"));
  } else {
    write_png(g.image, png);
  }
}

struct TrainOptions {
  std::string config_path;
  std::string resume_path;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> total_steps;
  std::vector<std::string> overrides;
  std::string out;
};

int cmd_train(const TrainOptions& o, std::ostream& out) {
  std::optional<TrainingState> resumed;
  RunConfig config;
  if (!o.resume_path.empty()) {
    resumed = load_checkpoint(o.resume_path);
    config = resumed->config;
    if (o.mode || o.seed || !o.overrides.empty() || !o.config_path.empty()) {
      throw UsageError("--resume takes its settings from the checkpoint; only --total-steps may change");
    }
  } else {
    if (o.config_path.empty()) throw UsageError("train needs --config or --resume");
    config = load_config(o.config_path);
    if (o.mode) config.training.mode = parse_training_mode(*o.mode);
    if (o.seed) config.training.seed = *o.seed;
    for (const std::string& kv : o.overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      apply_override(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
  }
  if (o.total_steps) config.training.total_steps = *o.total_steps;
  validate(config);
  const Dataset dataset = load_dataset(config.data);
  if (dataset.size() < config.training.batch_size) {
    throw ConfigError("dataset of " + std::to_string(dataset.size()) + " samples is smaller than batch_size " +
                      std::to_string(config.training.batch_size));
  }

  const fs::path dir = o.out.empty() ? fresh_run_dir(default_runs_root(), config.training.mode) : fs::path(o.out);
  fs::create_directories(dir / "checkpoints");
  fs::create_directories(dir / "figures");
  RunLock lock(dir / "run.lock");

  Manifest manifest{resumed ? "train --resume" : "train", utc_timestamp("%Y-%m-%dT%H:%M:%SZ"), "", "running",
                    config};
  write_manifest(dir, manifest);

  const bool append = resumed && fs::exists(dir / "metrics.csv");
  std::ofstream metrics(dir / "metrics.csv", append ? std::ios::app : std::ios::trunc);
  if (!append) metrics << metrics_csv_header() << '\n';

  TrainCallbacks cb;
  cb.on_metrics = [&](const MetricsRow& row) { metrics << to_csv_row(row) << '\n' << std::flush; };
  fs::path last_checkpoint;
  cb.on_checkpoint = [&](const TrainingState& s) {
    last_checkpoint = checkpoint_path(dir / "checkpoints", s.step);
    save_checkpoint(s, last_checkpoint);
  };

  TrainingState state = resumed ? std::move(*resumed) : initialize_training(config);
  state.config.training.total_steps = config.training.total_steps;
  try {
    TrainResult result = resume(std::move(state), dataset, cb);
    state = std::move(result.state);
  } catch (const NumericalError& e) {
    manifest.ended = utc_timestamp("%Y-%m-%dT%H:%M:%SZ");
    manifest.status = "aborted: non-finite " + e.component() + " at step " + std::to_string(e.step());
    write_manifest(dir, manifest);
    throw;
  }
  metrics.close();

  write_sample_figure(state, 10, 10, 0, dir / "figures" / "samples.png");
  if (has_encoder(state)) {
    const auto r = reconstruction_report(state.model.encoder, state.model.generator, dataset, 32, 0);
    write_reconstruction_outputs(r, is_points(config), dir / "figures");
  }

  manifest.ended = utc_timestamp("%Y-%m-%dT%H:%M:%SZ");
  manifest.status = "completed";
  write_manifest(dir, manifest);
  out << "run directory: " << dir.string() << '\n' << "final checkpoint: " << last_checkpoint.string() << '\n';
  return kExitOk;
}

int dispatch(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const ShapeError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitOther;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Four-network adversarial autoencoder toolkit"};
  app.name(args.empty() ? "aegan" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(artifact_version()));

  const std::vector<std::string> modes{"aegan", "gan", "aae"};

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Train a model and write a run directory");
  train_cmd->add_option("--config", train.config_path, "Config file")->check(CLI::ExistingFile);
  train_cmd->add_option("--resume", train.resume_path, "Continue from a checkpoint")->check(CLI::ExistingFile);
  train_cmd->add_option("--mode", train.mode, "Override training.mode")->check(CLI::IsMember(modes));
  train_cmd->add_option("--seed", train.seed, "Override training.seed");
  train_cmd->add_option("--total-steps", train.total_steps, "Override training.total_steps");
  train_cmd->add_option("--set", train.overrides, "Override any key, e.g. --set training.batch_size=64");
  train_cmd->add_option("--out", train.out, "Run directory (default: $" + std::string(kRunsDirEnv) +
                                                "/<timestamp>-<mode>, or runs/...)");

  std::string checkpoint, out_path, data_path, point_a, point_b;
  std::size_t rows = 10, cols = 10, n = 32, steps = 10;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> data_seed;
  bool mirror = false;
  std::vector<std::string> metrics;

  auto* gen_cmd = app.add_subcommand("generate", "Render a grid of generated samples");
  gen_cmd->add_option("--checkpoint", checkpoint)->required()->check(CLI::ExistingFile);
  gen_cmd->add_option("--rows", rows)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--cols", cols)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", seed, "Seed of the prior draws");
  gen_cmd->add_option("--out", out_path, "Output PNG")->required();

  auto* rec_cmd = app.add_subcommand("reconstruct", "Original/reconstruction pairs and errors");
  rec_cmd->add_option("--checkpoint", checkpoint)->required()->check(CLI::ExistingFile);
  rec_cmd->add_option("--data", data_path, "Image folder or x,y CSV (default: the run's data)");
  rec_cmd->add_option("--data-seed", data_seed, "Mixture seed for fresh points");
  rec_cmd->add_option("--n", n)->check(CLI::PositiveNumber);
  rec_cmd->add_option("--seed", seed, "Selection seed");
  rec_cmd->add_option("--out", out_path, "Output directory")->required();

  auto* int_cmd = app.add_subcommand("interpolate", "Encode two samples and walk between them");
  int_cmd->add_option("--checkpoint", checkpoint)->required()->check(CLI::ExistingFile);
  int_cmd->add_option("--a", point_a, "First image path, or x,y for 2D models")->required();
  int_cmd->add_option("--b", point_b, "Second image path, or x,y for 2D models");
  int_cmd->add_flag("--mirror", mirror, "Use the horizontal mirror of --a as the second endpoint");
  int_cmd->add_option("--steps", steps)->check(CLI::Range(std::size_t{2}, std::size_t{10000}));
  int_cmd->add_option("--out", out_path, "Output directory")->required();

  auto* eval_cmd = app.add_subcommand("evaluate", "Compute evaluation reports");
  eval_cmd->add_option("--checkpoint", checkpoint)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--metric", metrics, "coverage and/or reconstruction")
      ->required()
      ->check(CLI::IsMember({"coverage", "reconstruction"}));
  eval_cmd->add_option("--n", n, "Samples per metric")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--seed", seed);
  eval_cmd->add_option("--data", data_path, "Image folder or x,y CSV (default: the run's data)");
  eval_cmd->add_option("--data-seed", data_seed, "Mixture seed for fresh points");
  eval_cmd->add_option("--out", out_path, "Output directory")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("aegan");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*train_cmd) return dispatch([&] { return cmd_train(train, out); }, err);

  return dispatch([&]() -> int {
    const TrainingState state = load_checkpoint(checkpoint);
    const RunConfig& config = state.config;

    if (*gen_cmd) {
      const fs::path png(out_path);
      if (png.has_parent_path()) fs::create_directories(png.parent_path());
      write_sample_figure(state, rows, cols, seed, png);
      out << "wrote " << png.string() << '\n';
      return kExitOk;
    }

    const fs::path dir(out_path);
    fs::create_directories(dir);

    if (*rec_cmd) {
      require_encoder(state);
      const Dataset d = evaluation_dataset(config, data_path, data_seed);
      const auto r = reconstruction_report(state.model.encoder, state.model.generator, d, n, seed);
      write_reconstruction_outputs(r, is_points(config), dir);
      write_summary(dir / "reconstruction_summary.txt", reconstruction_summary(r), out);
      return kExitOk;
    }

    if (*int_cmd) {
      require_encoder(state);
      if (mirror == !point_b.empty()) throw UsageError("interpolate needs exactly one of --b and --mirror");
      const Tensor a = load_sample(config, point_a);
      Tensor b;
      if (mirror) {
        if (is_points(config)) throw UsageError("--mirror applies to image checkpoints");
        b = flip_horizontal(a);
      } else {
        b = load_sample(config, point_b);
      }
      const auto r = interpolate_real(state.model.encoder, state.model.generator, a, b, steps);
      write_latent_path_csv(r.latent_path, dir / "latent_path.csv");
      if (is_points(config)) {
        write_points_csv(r.frames, dir / "frames.csv");
        write_png(render_scatter(r.frames, value_range(config.data), 256, mixture_centers(config.data.mixture)),
                  dir / "interpolation.png");
      } else {
        const Tensor strip[] = {r.endpoints.rows(0, 1), r.frames, r.endpoints.rows(1, 1)};
        write_png(render_grid(concat_rows(strip), 1, steps + 2), dir / "interpolation.png");
      }
      out << "wrote " << (dir / "interpolation.png").string() << '\n';
      return kExitOk;
    }

    // evaluate
    std::string summary;
    for (const std::string& metric : metrics) {
      if (metric == "coverage") {
        if (!is_points(config)) throw UsageError("coverage metric needs a 2D mixture checkpoint");
        const auto centers = mixture_centers(config.data.mixture);
        Rng rng(seed);
        const Tensor samples = generate(state.model.generator, sample_prior({config.model.latent_dim}, n, rng));
        const auto r = mode_coverage(samples, centers, default_capture_radius(config.data.mixture),
                                     default_min_count(n));
        write_coverage_csv(r, centers, dir / "coverage.csv");
        std::ostringstream os;
        os << "coverage: n=" << r.n_samples << " modes_hit=" << r.modes_hit << "/" << centers.size()
           << " coverage_fraction=" << r.coverage_fraction << " high_quality_fraction=" << r.high_quality_fraction
           << " capture_radius=" << r.capture_radius << " min_count=" << r.min_count << '\n';
        summary += os.str();
      } else {
        require_encoder(state);
        const Dataset d = evaluation_dataset(config, data_path, data_seed);
        const auto r = reconstruction_report(state.model.encoder, state.model.generator, d, n, seed);
        write_reconstruction_outputs(r, is_points(config), dir);
        summary += reconstruction_summary(r);
      }
    }
    write_summary(dir / "summary.txt", summary, out);
    return kExitOk;
  }, err);
}

}  // namespace aegan
