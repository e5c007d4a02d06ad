#include "aegan/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>

#include "aegan/errors.hpp"
#include "aegan/random.hpp"

namespace aegan {

namespace fs = std::filesystem;

std::vector<std::ptrdiff_t> assign_to_modes(const Tensor& samples, std::span<const Point2> centers,
                                            double capture_radius) {
  require_row_shape(samples, {2}, "coverage samples");
  if (centers.empty()) throw UsageError("mode_coverage needs at least one center");
  std::vector<std::ptrdiff_t> out(samples.batch(), -1);
  const double r2 = capture_radius * capture_radius;
  for (std::size_t i = 0; i < samples.batch(); ++i) {
    const double x = samples[2 * i], y = samples[2 * i + 1];
    std::size_t best = 0;
    double best_d2 = INFINITY;
    for (std::size_t k = 0; k < centers.size(); ++k) {
      const double dx = x - centers[k].x, dy = y - centers[k].y;
      const double d2 = dx * dx + dy * dy;
      if (d2 < best_d2) {
        best_d2 = d2;
        best = k;
      }
    }
    if (best_d2 <= r2) out[i] = static_cast<std::ptrdiff_t>(best);
  }
  return out;
}

ModeCoverageReport mode_coverage(const Tensor& samples, std::span<const Point2> centers,
                                 double capture_radius, std::size_t min_count) {
  if (samples.batch() == 0) throw UsageError("mode_coverage needs at least one sample");
  if (!(capture_radius > 0.0)) throw UsageError("capture_radius must be positive");
  ModeCoverageReport r;
  r.n_samples = samples.batch();
  r.capture_radius = capture_radius;
  r.min_count = min_count;
  r.assignment_counts.assign(centers.size(), 0);
  std::size_t assigned = 0;
  for (std::ptrdiff_t a : assign_to_modes(samples, centers, capture_radius)) {
    if (a < 0) continue;
    ++r.assignment_counts[static_cast<std::size_t>(a)];
    ++assigned;
  }
  r.modes_hit = static_cast<std::size_t>(std::count_if(
      r.assignment_counts.begin(), r.assignment_counts.end(), [&](std::size_t c) { return c >= min_count; }));
  r.coverage_fraction = static_cast<double>(r.modes_hit) / static_cast<double>(centers.size());
  r.high_quality_fraction = static_cast<double>(assigned) / static_cast<double>(r.n_samples);
  return r;
}

std::size_t default_min_count(std::size_t n_samples) {
  return std::max<std::size_t>(1, n_samples / 100);
}

double default_capture_radius(const MixtureSpec& spec) { return 3.0 * spec.mode_std; }

void write_coverage_csv(const ModeCoverageReport& report, std::span<const Point2> centers,
                        const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out.precision(17);
  out << "mode,center_x,center_y,count,hit\n";
  for (std::size_t k = 0; k < report.assignment_counts.size(); ++k) {
    out << k << ',' << centers[k].x << ',' << centers[k].y << ',' << report.assignment_counts[k] << ','
        << (report.assignment_counts[k] >= report.min_count ? 1 : 0) << '\n';
  }
}

ReconstructionReport reconstruction_report(const Network& encoder, const Network& generator,
                                           const Dataset& dataset, std::size_t n,
                                           std::uint64_t selection_seed) {
  if (dataset.size() == 0) throw DataError("reconstruction_report: empty dataset");
  if (n == 0) throw UsageError("reconstruction_report needs n >= 1");
  ReconstructionReport r;
  r.requested = n;
  if (n > dataset.size()) {
    std::cerr << "warning: requested " << n << " reconstructions but the dataset holds "
              << dataset.size() << "; using " << dataset.size() << '\n';
    n = dataset.size();
    r.clamped = true;
  }
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(selection_seed);
  std::shuffle(order.begin(), order.end(), rng);
  r.indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n));

  r.originals = dataset.gather(r.indices);
  r.reconstructions = generate(generator, encode(encoder, r.originals));
  require_shape(r.reconstructions, r.originals.shape(), "reconstructions");

  const std::size_t per = r.originals.row_size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = r.originals.row(i);
    const auto b = r.reconstructions.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < per; ++j) s += std::abs(a[j] - b[j]);
    r.errors.push_back(s / static_cast<double>(per));
  }
  std::vector<double> sorted = r.errors;
  std::sort(sorted.begin(), sorted.end());
  r.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, n - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
  };
  r.median = quantile(0.5);
  r.p90 = quantile(0.9);
  r.max = sorted.back();
  return r;
}

void write_reconstruction_csv(const ReconstructionReport& report, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out.precision(17);
  out << "index,error\n";
  for (std::size_t i = 0; i < report.indices.size(); ++i) {
    out << report.indices[i] << ',' << report.errors[i] << '\n';
  }
}

Tensor linear_path(std::span<const double> z1, std::span<const double> z2, std::size_t n_steps) {
  if (n_steps < 2) throw UsageError("interpolation needs n_steps >= 2");
  if (z1.size() != z2.size()) throw ShapeError("interpolation endpoints differ in dimension");
  Tensor path({n_steps, z1.size()});
  for (std::size_t i = 0; i < n_steps; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n_steps - 1);
    auto row = path.row(i);
    for (std::size_t j = 0; j < z1.size(); ++j) {
      // Equal coordinates stay exact so identical endpoints give constant frames.
      row[j] = z1[j] == z2[j] ? z1[j] : (1.0 - t) * z1[j] + t * z2[j];
    }
  }
  return path;
}

namespace {

Tensor as_single(const Tensor& x, const Shape& row_shape, const char* what) {
  if (x.shape() == row_shape) {
    Shape s{1};
    s.insert(s.end(), row_shape.begin(), row_shape.end());
    return x.reshaped(std::move(s));
  }
  require_row_shape(x, row_shape, what);
  if (x.batch() != 1) throw ShapeError(std::string(what) + " must be a single sample");
  return x;
}

}  // namespace

InterpolationResult interpolate_real(const Network& encoder, const Network& generator, const Tensor& x1,
                                     const Tensor& x2, std::size_t n_steps) {
  if (n_steps < 2) throw UsageError("interpolation needs n_steps >= 2");
  const Tensor a = as_single(x1, encoder.input_shape(), "x1");
  const Tensor b = as_single(x2, encoder.input_shape(), "x2");
  InterpolationResult r;
  r.n_steps = n_steps;
  const Tensor pair[] = {a, b};
  r.endpoints = concat_rows(pair);
  const Tensor codes = encode(encoder, r.endpoints);
  r.latent_path = linear_path(codes.row(0), codes.row(1), n_steps);
  r.frames = generate(generator, r.latent_path);
  return r;
}

InterpolationResult interpolate_latent(const Network& generator, const Tensor& z1, const Tensor& z2,
                                       std::size_t n_steps) {
  const Tensor a = as_single(z1, generator.input_shape(), "z1");
  const Tensor b = as_single(z2, generator.input_shape(), "z2");
  InterpolationResult r;
  r.n_steps = n_steps;
  r.latent_path = linear_path(a.row(0), b.row(0), n_steps);
  r.frames = generate(generator, r.latent_path);
  return r;
}

void write_latent_path_csv(const Tensor& latent_path, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out.precision(17);
  out << "step";
  for (std::size_t j = 0; j < latent_path.row_size(); ++j) out << ",z" << j;
  out << '\n';
  for (std::size_t i = 0; i < latent_path.batch(); ++i) {
    out << i;
    for (double v : latent_path.row(i)) out << ',' << v;
    out << '\n';
  }
}

Image8 render_grid(const Tensor& images, std::size_t rows, std::size_t cols) {
  if (images.rank() != 4) throw ShapeError("render_grid expects (N, H, W, C), got " + to_string(images.shape()));
  if (rows == 0 || cols == 0) throw UsageError("grid needs at least one cell");
  const std::size_t h = images.shape()[1], w = images.shape()[2], c = images.shape()[3];
  const std::size_t sep = kGridSeparator;
  Image8 out;
  out.height = rows * h + (rows + 1) * sep;
  out.width = cols * w + (cols + 1) * sep;
  out.channels = c;
  out.pixels.assign(out.height * out.width * c, kGridBackground);
  const std::size_t count = std::min(images.batch(), rows * cols);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t top = sep + (i / cols) * (h + sep);
    const std::size_t left = sep + (i % cols) * (w + sep);
    const auto src = images.row(i);
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w * c; ++x) {
        out.pixels[((top + y) * out.width + left) * c + x] = to_byte(src[y * w * c + x]);
      }
    }
  }
  return out;
}

Image8 render_pair_grid(const Tensor& originals, const Tensor& reconstructions,
                        std::size_t pairs_per_row) {
  if (originals.shape() != reconstructions.shape()) {
    throw ShapeError("originals and reconstructions differ in shape");
  }
  if (pairs_per_row == 0) throw UsageError("pairs_per_row must be positive");
  const std::size_t n = originals.batch();
  std::vector<Tensor> interleaved;
  interleaved.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    interleaved.push_back(originals.rows(i, 1));
    interleaved.push_back(reconstructions.rows(i, 1));
  }
  const std::size_t rows = (n + pairs_per_row - 1) / pairs_per_row;
  return render_grid(concat_rows(interleaved), rows, 2 * pairs_per_row);
}

Image8 render_scatter(const Tensor& points, ValueRange range, std::size_t size_px,
                      std::span<const Point2> markers) {
  require_row_shape(points, {2}, "scatter points");
  Image8 out{size_px, size_px, 3, std::vector<std::uint8_t>(size_px * size_px * 3, kGridBackground)};
  const double span = range.high - range.low;
  auto plot = [&](double x, double y, std::uint8_t r, std::uint8_t g, std::uint8_t b, int radius) {
    const double px = (x - range.low) / span * static_cast<double>(size_px - 1);
    const double py = (range.high - y) / span * static_cast<double>(size_px - 1);
    if (!std::isfinite(px) || !std::isfinite(py)) return;
    const auto cx = static_cast<long>(std::lround(px)), cy = static_cast<long>(std::lround(py));
    for (long dy = -radius; dy <= radius; ++dy) {
      for (long dx = -radius; dx <= radius; ++dx) {
        const long X = cx + dx, Y = cy + dy;
        if (X < 0 || Y < 0 || X >= static_cast<long>(size_px) || Y >= static_cast<long>(size_px)) continue;
        std::uint8_t* p = &out.pixels[(static_cast<std::size_t>(Y) * size_px + static_cast<std::size_t>(X)) * 3];
        p[0] = r;
        p[1] = g;
        p[2] = b;
      }
    }
  };
  for (const Point2& m : markers) plot(m.x, m.y, 220, 40, 40, 3);
  for (std::size_t i = 0; i < points.batch(); ++i) plot(points[2 * i], points[2 * i + 1], 20, 20, 20, 0);
  return out;
}

SampleGrid sample_grid(const Network& generator, const LatentPrior& prior, std::size_t rows,
                       std::size_t cols, std::uint64_t seed, ValueRange range) {
  if (rows == 0 || cols == 0) throw UsageError("sample_grid needs rows * cols >= 1");
  SampleGrid g;
  Rng rng(seed);
  g.latents = sample_prior(prior, rows * cols, rng);
  g.samples = generate(generator, g.latents);
  if (g.samples.rank() == 4) {
    g.image = render_grid(g.samples, rows, cols);
  } else if (g.samples.row_size() == 2) {
    g.image = render_scatter(g.samples, range);
  }
  return g;
}

}  // namespace aegan
