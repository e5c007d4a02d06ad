#include "aegan/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <numeric>

#include "aegan/errors.hpp"
#include "aegan/image_io.hpp"
#include "aegan/random.hpp"

namespace aegan {

namespace fs = std::filesystem;

Tensor Dataset::gather(std::span<const std::size_t> indices) const {
  Shape shape = samples.shape();
  shape[0] = indices.size();
  Tensor out(shape);
  const std::size_t n = samples.row_size();
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto src = samples.row(indices[i]);
    std::copy(src.begin(), src.end(), out.data() + i * n);
  }
  return out;
}

void validate(const MixtureSpec& spec) {
  if (spec.n_modes == 0) throw ConfigError("mixture n_modes must be positive");
  if (!(spec.radius > 0.0) || !std::isfinite(spec.radius)) {
    throw ConfigError("mixture radius must be positive");
  }
  if (!(spec.mode_std >= 0.0) || !std::isfinite(spec.mode_std)) {
    throw ConfigError("mixture mode_std must be nonnegative");
  }
  if (spec.samples_per_mode == 0) throw ConfigError("mixture samples_per_mode must be positive");
}

std::vector<Point2> mixture_centers(const MixtureSpec& spec) {
  validate(spec);
  std::vector<Point2> centers;
  centers.reserve(spec.n_modes);
  for (std::size_t k = 0; k < spec.n_modes; ++k) {
    if ((4 * k) % spec.n_modes == 0) {
      static constexpr double kCos[] = {1.0, 0.0, -1.0, 0.0};
      static constexpr double kSin[] = {0.0, 1.0, 0.0, -1.0};
      const std::size_t quarter = 4 * k / spec.n_modes;
      centers.push_back({spec.radius * kCos[quarter], spec.radius * kSin[quarter]});
      continue;
    }
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(spec.n_modes);
    centers.push_back({spec.radius * std::cos(angle), spec.radius * std::sin(angle)});
  }
  return centers;
}

ValueRange mixture_value_range(const MixtureSpec& spec) {
  const double half = spec.radius + std::max(0.25 * spec.radius, 10.0 * spec.mode_std);
  return {-half, half};
}

Dataset make_gaussian_mixture(const MixtureSpec& spec, std::uint64_t seed) {
  const auto centers = mixture_centers(spec);
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Tensor points({spec.n_modes * spec.samples_per_mode, 2});
  std::size_t row = 0;
  for (const Point2& c : centers) {
    for (std::size_t i = 0; i < spec.samples_per_mode; ++i, ++row) {
      const double dx = normal(rng);
      const double dy = normal(rng);
      points[2 * row] = c.x + spec.mode_std * dx;
      points[2 * row + 1] = c.y + spec.mode_std * dy;
    }
  }
  Dataset d;
  d.samples = std::move(points);
  d.value_range = mixture_value_range(spec);
  d.source = "mixture(n_modes=" + std::to_string(spec.n_modes) +
             ", radius=" + std::to_string(spec.radius) + ", mode_std=" + std::to_string(spec.mode_std) +
             ", samples_per_mode=" + std::to_string(spec.samples_per_mode) +
             ", seed=" + std::to_string(seed) + ")";
  return d;
}

void write_points_csv(const Tensor& points, const fs::path& path) {
  require_row_shape(points, {2}, "points");
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out.precision(17);
  out << "x,y\n";
  for (std::size_t i = 0; i < points.batch(); ++i) out << points[2 * i] << ',' << points[2 * i + 1] << '\n';
}

Tensor flip_horizontal(const Tensor& images) {
  const bool single = images.rank() == 3;
  if (!single && images.rank() != 4) {
    throw ShapeError("flip_horizontal expects (H, W, C) or (N, H, W, C), got " +
                     to_string(images.shape()));
  }
  const std::size_t off = single ? 0 : 1;
  const std::size_t n = single ? 1 : images.shape()[0];
  const std::size_t h = images.shape()[off], w = images.shape()[off + 1], c = images.shape()[off + 2];
  Tensor out(images.shape());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        const double* src = images.data() + ((i * h + y) * w + x) * c;
        double* dst = out.data() + ((i * h + y) * w + (w - 1 - x)) * c;
        std::copy(src, src + c, dst);
      }
    }
  }
  return out;
}

Dataset load_image_folder(const fs::path& dir, Resolution resolution, bool mirror_augment) {
  if (!fs::is_directory(dir)) throw DataError("image folder not found: " + dir.string());
  if (resolution.height == 0 || resolution.width == 0) {
    throw ConfigError("image resolution must be positive");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("no PNG/JPEG images in " + dir.string());

  std::vector<Tensor> images;
  images.reserve(files.size() * (mirror_augment ? 2 : 1));
  for (const auto& f : files) {
    auto img = read_image(f, resolution.height, resolution.width);
    if (!img) {
      std::cerr << "warning: skipping undecodable image " << f.string() << '\n';
      continue;
    }
    Tensor batch = std::move(*img).reshaped({1, resolution.height, resolution.width, 3});
    if (mirror_augment) {
      Tensor flipped = flip_horizontal(batch);
      images.push_back(std::move(batch));
      images.push_back(std::move(flipped));
    } else {
      images.push_back(std::move(batch));
    }
  }
  if (images.empty()) throw DataError("no decodable images in " + dir.string());
  Dataset d;
  d.samples = concat_rows(images);
  d.value_range = {-1.0, 1.0};
  d.source = dir.string();
  return d;
}

MinibatchStream::MinibatchStream(const Dataset& dataset, std::size_t batch_size,
                                 std::uint64_t shuffle_seed)
    : dataset_(&dataset), batch_size_(batch_size), seed_(shuffle_seed) {
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (batch_size > dataset.size()) {
    throw ConfigError("batch_size " + std::to_string(batch_size) + " exceeds dataset size " +
                      std::to_string(dataset.size()));
  }
  batches_per_epoch_ = dataset.size() / batch_size;
}

void MinibatchStream::seek(std::uint64_t batch_index) { position_ = batch_index; }

void MinibatchStream::load_epoch(std::uint64_t epoch) {
  if (epoch == loaded_epoch_) return;
  order_.resize(dataset_->size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  Rng rng(mix_seed(seed_, epoch));
  std::shuffle(order_.begin(), order_.end(), rng);
  loaded_epoch_ = epoch;
}

std::vector<std::size_t> MinibatchStream::peek_indices() {
  const std::uint64_t epoch = position_ / batches_per_epoch_;
  const std::size_t within = static_cast<std::size_t>(position_ % batches_per_epoch_);
  load_epoch(epoch);
  const auto first = order_.begin() + static_cast<std::ptrdiff_t>(within * batch_size_);
  return {first, first + static_cast<std::ptrdiff_t>(batch_size_)};
}

Tensor MinibatchStream::next() {
  const auto indices = peek_indices();
  ++position_;
  return dataset_->gather(indices);
}

}  // namespace aegan
