#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "aegan/tensor.hpp"

namespace aegan {

struct ValueRange {
  double low = -1.0;
  double high = 1.0;

  double half_width() const { return 0.5 * (high - low); }
  friend bool operator==(const ValueRange&, const ValueRange&) = default;
};

/// Immutable collection of samples stored as one (N, ...) tensor.
struct Dataset {
  Tensor samples;
  ValueRange value_range;
  std::string source;  // path or generator description

  std::size_t size() const noexcept { return samples.batch(); }
  Shape sample_shape() const { return samples.row_shape(); }
  /// Copies the listed rows into a batch.
  Tensor gather(std::span<const std::size_t> indices) const;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Ring of equally spaced isotropic Gaussians.
struct MixtureSpec {
  std::size_t n_modes = 8;
  double radius = 2.0;
  double mode_std = 0.02;
  std::size_t samples_per_mode = 1000;
};

void validate(const MixtureSpec& spec);

/// Centers at angle 2 pi k / n_modes on the circle. Quarter-turn angles are
/// exact, so (radius, 0) and (-radius, 0) come out without rounding noise.
std::vector<Point2> mixture_centers(const MixtureSpec& spec);

/// Value range used for mixture samples and the generator's output scale.
ValueRange mixture_value_range(const MixtureSpec& spec);

/// n_modes * samples_per_mode points, grouped by mode in order.
Dataset make_gaussian_mixture(const MixtureSpec& spec, std::uint64_t seed);

/// Writes an `x,y` CSV of a 2D dataset.
void write_points_csv(const Tensor& points, const std::filesystem::path& path);

struct Resolution {
  std::size_t height = 64;
  std::size_t width = 64;
};

/// Loads every PNG/JPEG in `dir` (sorted by name), center-cropped to square,
/// resized to `resolution`, scaled to [-1, 1] as RGB. With `mirror_augment`
/// each image is followed by its left-right flip. Undecodable files are
/// skipped with a warning on stderr.
Dataset load_image_folder(const std::filesystem::path& dir, Resolution resolution,
                          bool mirror_augment);

/// Reverses the columns of an (H, W, C) image or an (N, H, W, C) batch.
Tensor flip_horizontal(const Tensor& images);

/// Deterministic epoch-wise shuffled batches with the last partial batch
/// dropped. Batch k is a pure function of (dataset, batch_size, seed, k).
class MinibatchStream {
 public:
  MinibatchStream(const Dataset& dataset, std::size_t batch_size, std::uint64_t shuffle_seed);

  std::size_t batches_per_epoch() const noexcept { return batches_per_epoch_; }
  /// Index of the next batch counted from the start of the stream.
  std::uint64_t position() const noexcept { return position_; }
  /// Jumps to an absolute batch index.
  void seek(std::uint64_t batch_index);

  Tensor next();
  /// Dataset row indices of the next batch without advancing.
  std::vector<std::size_t> peek_indices();

 private:
  void load_epoch(std::uint64_t epoch);

  const Dataset* dataset_;
  std::size_t batch_size_;
  std::uint64_t seed_;
  std::size_t batches_per_epoch_;
  std::uint64_t position_ = 0;
  std::uint64_t loaded_epoch_ = UINT64_MAX;
  std::vector<std::size_t> order_;
};

}  // namespace aegan
