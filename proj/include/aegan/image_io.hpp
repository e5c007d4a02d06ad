#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "aegan/tensor.hpp"

namespace aegan {

/// 8-bit interleaved RGB (or gray) raster.
struct Image8 {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 3;
  std::vector<std::uint8_t> pixels;

  friend bool operator==(const Image8&, const Image8&) = default;
};

/// Maps [-1, 1] to [0, 255] with rounding and clamping.
std::uint8_t to_byte(double v);
/// Inverse of to_byte: v / 127.5 - 1.
double from_byte(std::uint8_t v);

Image8 to_image8(const Tensor& image);  // (H, W, C)
Tensor from_image8(const Image8& image);

/// Decodes an image file as RGB, center-crops to square and resizes with
/// bilinear interpolation. Returns nullopt when the file cannot be decoded.
std::optional<Tensor> read_image(const std::filesystem::path& path, std::size_t height,
                                 std::size_t width);

/// Writes an (H, W, C) tensor in [-1, 1] as PNG. Throws DataError on failure.
void write_png(const Tensor& image, const std::filesystem::path& path);
void write_png(const Image8& image, const std::filesystem::path& path);

}  // namespace aegan
