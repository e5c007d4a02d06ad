#include "aegan/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "aegan/errors.hpp"

namespace aegan {

std::string to_string(const Shape& shape) {
  std::string out = "(";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(shape[i]);
  }
  return out + ")";
}

std::size_t element_count(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

Tensor::Tensor(Shape shape, double fill)
    : shape_(std::move(shape)), values_(element_count(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (values_.size() != element_count(shape_)) {
    throw ShapeError("tensor of shape " + to_string(shape_) + " cannot hold " +
                     std::to_string(values_.size()) + " values");
  }
}

std::size_t Tensor::row_size() const noexcept {
  if (shape_.empty() || shape_[0] == 0) return 0;
  return values_.size() / shape_[0];
}

Shape Tensor::row_shape() const {
  if (shape_.empty()) return {};
  return Shape(shape_.begin() + 1, shape_.end());
}

std::span<double> Tensor::row(std::size_t i) noexcept {
  const std::size_t n = row_size();
  return std::span<double>(values_).subspan(i * n, n);
}

std::span<const double> Tensor::row(std::size_t i) const noexcept {
  const std::size_t n = row_size();
  return std::span<const double>(values_).subspan(i * n, n);
}

Tensor Tensor::reshaped(Shape shape) const& {
  Tensor copy = *this;
  return std::move(copy).reshaped(std::move(shape));
}

Tensor Tensor::reshaped(Shape shape) && {
  if (element_count(shape) != values_.size()) {
    throw ShapeError("cannot reshape " + to_string(shape_) + " to " + to_string(shape));
  }
  shape_ = std::move(shape);
  return std::move(*this);
}

Tensor Tensor::rows(std::size_t first, std::size_t count) const {
  if (first + count > batch()) {
    throw ShapeError("row range exceeds batch of " + std::to_string(batch()));
  }
  Shape s = shape_;
  s[0] = count;
  const std::size_t n = row_size();
  std::vector<double> v(values_.begin() + static_cast<std::ptrdiff_t>(first * n),
                        values_.begin() + static_cast<std::ptrdiff_t>((first + count) * n));
  return Tensor(std::move(s), std::move(v));
}

bool Tensor::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Tensor concat_rows(std::span<const Tensor> parts) {
  if (parts.empty()) throw UsageError("concat_rows needs at least one tensor");
  const Shape row_shape = parts.front().row_shape();
  std::size_t total = 0;
  for (const Tensor& p : parts) {
    if (p.row_shape() != row_shape) {
      throw ShapeError("concat_rows: row shape " + to_string(p.row_shape()) + " vs " +
                       to_string(row_shape));
    }
    total += p.batch();
  }
  Shape s = parts.front().shape();
  s[0] = total;
  std::vector<double> v;
  v.reserve(element_count(s));
  for (const Tensor& p : parts) v.insert(v.end(), p.values().begin(), p.values().end());
  return Tensor(std::move(s), std::move(v));
}

void require_shape(const Tensor& actual, const Shape& expected, const std::string& what) {
  if (actual.shape() != expected) {
    throw ShapeError(what + ": expected shape " + to_string(expected) + ", got " +
                     to_string(actual.shape()));
  }
}

void require_row_shape(const Tensor& actual, const Shape& row_shape, const std::string& what) {
  if (actual.rank() != row_shape.size() + 1 || actual.row_shape() != row_shape) {
    Shape expected{0};
    expected.insert(expected.end(), row_shape.begin(), row_shape.end());
    std::string e = to_string(expected);
    e.replace(1, 1, "n");
    throw ShapeError(what + ": expected shape " + e + ", got " + to_string(actual.shape()));
  }
  if (actual.batch() == 0) throw ShapeError(what + ": empty batch");
}

void require_finite(const Tensor& t, const std::string& what) {
  if (!t.all_finite()) throw DataError(what + " contains non-finite values");
}

std::uint64_t fnv1a(std::span<const std::byte> bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (std::byte b : bytes) {
    h ^= static_cast<std::uint64_t>(b);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t fingerprint(const Tensor& t, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (std::size_t d : t.shape()) {
    const auto dim = static_cast<std::uint64_t>(d);
    h = fnv1a(std::as_bytes(std::span(&dim, 1)), h);
  }
  return fnv1a(std::as_bytes(t.values()), h);
}

}  // namespace aegan
