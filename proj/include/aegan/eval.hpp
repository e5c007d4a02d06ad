#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "aegan/data.hpp"
#include "aegan/image_io.hpp"
#include "aegan/models.hpp"
#include "aegan/training.hpp"

namespace aegan {

// ---------------------------------------------------------------------------
// Mode coverage
// ---------------------------------------------------------------------------

struct ModeCoverageReport {
  std::size_t n_samples = 0;
  std::size_t modes_hit = 0;
  std::vector<std::size_t> assignment_counts;  // per center
  double coverage_fraction = 0.0;              // modes_hit / n_modes
  double high_quality_fraction = 0.0;          // assigned samples / n_samples
  double capture_radius = 0.0;
  std::size_t min_count = 0;
};

/// Index of the nearest center for each sample, or -1 when the nearest center
/// is farther than `capture_radius`. Ties go to the lower index.
std::vector<std::ptrdiff_t> assign_to_modes(const Tensor& samples, std::span<const Point2> centers,
                                            double capture_radius);

/// A mode is hit when at least `min_count` samples are assigned to it.
ModeCoverageReport mode_coverage(const Tensor& samples, std::span<const Point2> centers,
                                 double capture_radius, std::size_t min_count);

/// max(1, floor(0.01 * n_samples)).
std::size_t default_min_count(std::size_t n_samples);
/// 3 * mode_std.
double default_capture_radius(const MixtureSpec& spec);

void write_coverage_csv(const ModeCoverageReport& report, std::span<const Point2> centers,
                        const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Reconstruction
// ---------------------------------------------------------------------------

struct ReconstructionReport {
  std::vector<std::size_t> indices;  // dataset rows used, in order
  Tensor originals;
  Tensor reconstructions;
  std::vector<double> errors;  // per-sample mean absolute error
  double mean = 0.0;
  double median = 0.0;
  double p90 = 0.0;
  double max = 0.0;
  std::size_t requested = 0;
  bool clamped = false;  // requested more samples than the dataset holds
};

/// Reconstructs the first n rows of a seeded permutation of the dataset.
ReconstructionReport reconstruction_report(const Network& encoder, const Network& generator,
                                           const Dataset& dataset, std::size_t n,
                                           std::uint64_t selection_seed = 0);

void write_reconstruction_csv(const ReconstructionReport& report, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Interpolation
// ---------------------------------------------------------------------------

struct InterpolationResult {
  Tensor endpoints;    // (2, ...) the two inputs; empty for latent interpolation
  Tensor latent_path;  // (n_steps, d_z)
  Tensor frames;       // (n_steps, ...)
  std::size_t n_steps = 0;
};

/// Rows (1 - t_i) z1 + t_i z2 with t_i = i / (n_steps - 1).
Tensor linear_path(std::span<const double> z1, std::span<const double> z2, std::size_t n_steps);

/// Encodes x1 and x2, walks the straight line between the encodings and
/// generates a frame per point. x1 and x2 are single samples, with or
/// without a leading batch dimension of 1.
InterpolationResult interpolate_real(const Network& encoder, const Network& generator, const Tensor& x1,
                                     const Tensor& x2, std::size_t n_steps);

/// Same as interpolate_real but starting from latent vectors.
InterpolationResult interpolate_latent(const Network& generator, const Tensor& z1, const Tensor& z2,
                                       std::size_t n_steps);

void write_latent_path_csv(const Tensor& latent_path, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

inline constexpr std::size_t kGridSeparator = 2;
inline constexpr std::uint8_t kGridBackground = 255;

/// Places (N, H, W, C) images row-major into a rows x cols grid with
/// 2-pixel separators. Missing cells stay background.
Image8 render_grid(const Tensor& images, std::size_t rows, std::size_t cols);

/// Original/reconstruction pairs side by side, original on the left.
Image8 render_pair_grid(const Tensor& originals, const Tensor& reconstructions,
                        std::size_t pairs_per_row);

/// Scatter plot of 2D points on a square canvas covering `range` on both axes.
Image8 render_scatter(const Tensor& points, ValueRange range, std::size_t size_px = 256,
                      std::span<const Point2> markers = {});

struct SampleGrid {
  Tensor latents;  // (rows * cols, d_z), a pure function of (d_z, seed)
  Tensor samples;
  Image8 image;  // image grid, or a scatter plot for 2D samples
};

/// Generates rows * cols samples from prior draws under `seed`. Models with
/// the same latent dimension receive identical latent batches for a seed.
SampleGrid sample_grid(const Network& generator, const LatentPrior& prior, std::size_t rows,
                       std::size_t cols, std::uint64_t seed, ValueRange range = {});

}  // namespace aegan
