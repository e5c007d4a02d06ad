#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace aegan {

using Shape = std::vector<std::size_t>;

std::string to_string(const Shape& shape);
std::size_t element_count(const Shape& shape);

/// Dense row-major array of doubles. The first dimension is the batch.
///
/// Latent batches are (batch, d_z); sample batches are (batch, 2) for points
/// or (batch, height, width, channels) for images.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, double fill = 0.0);
  Tensor(Shape shape, std::vector<double> values);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  /// Leading dimension, 0 for a rank-0 tensor.
  std::size_t batch() const noexcept { return shape_.empty() ? 0 : shape_[0]; }
  /// Number of scalars per batch row.
  std::size_t row_size() const noexcept;
  /// Shape with the batch dimension removed.
  Shape row_shape() const;

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  double* data() noexcept { return values_.data(); }
  const double* data() const noexcept { return values_.data(); }

  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  std::span<double> row(std::size_t i) noexcept;
  std::span<const double> row(std::size_t i) const noexcept;

  /// Same values, new shape; throws ShapeError when element counts differ.
  Tensor reshaped(Shape shape) const&;
  Tensor reshaped(Shape shape) &&;

  /// Copies rows [first, first + count) into a new tensor.
  Tensor rows(std::size_t first, std::size_t count) const;

  bool all_finite() const noexcept;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_;
  std::vector<double> values_;
};

/// Stacks rows of equal row shape into one batch.
Tensor concat_rows(std::span<const Tensor> parts);

/// Throws ShapeError unless `actual` equals `expected`; `what` names the operand.
void require_shape(const Tensor& actual, const Shape& expected, const std::string& what);
/// Throws ShapeError unless the per-row shape of `actual` equals `row_shape`.
void require_row_shape(const Tensor& actual, const Shape& row_shape, const std::string& what);
/// Throws DataError when any entry is NaN or infinite.
void require_finite(const Tensor& t, const std::string& what);

/// FNV-1a over the raw bytes, for cheap equality fingerprints.
std::uint64_t fnv1a(std::span<const std::byte> bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t fingerprint(const Tensor& t, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace aegan
