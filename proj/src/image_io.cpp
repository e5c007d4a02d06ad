#include "aegan/image_io.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "aegan/errors.hpp"

namespace aegan {

std::uint8_t to_byte(double v) {
  const double scaled = std::round((v + 1.0) * 127.5);
  return static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
}

double from_byte(std::uint8_t v) { return static_cast<double>(v) / 127.5 - 1.0; }

Image8 to_image8(const Tensor& image) {
  if (image.rank() != 3) throw ShapeError("expected (H, W, C) image, got " + to_string(image.shape()));
  Image8 out{image.shape()[0], image.shape()[1], image.shape()[2], {}};
  out.pixels.resize(image.size());
  std::transform(image.values().begin(), image.values().end(), out.pixels.begin(), to_byte);
  return out;
}

Tensor from_image8(const Image8& image) {
  Tensor t({image.height, image.width, image.channels});
  std::transform(image.pixels.begin(), image.pixels.end(), t.values().begin(), from_byte);
  return t;
}

std::optional<Tensor> read_image(const std::filesystem::path& path, std::size_t height,
                                 std::size_t width) {
  cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) return std::nullopt;
  const int side = std::min(bgr.rows, bgr.cols);
  cv::Mat square = bgr(cv::Rect((bgr.cols - side) / 2, (bgr.rows - side) / 2, side, side));
  cv::Mat resized;
  if (square.rows == static_cast<int>(height) && square.cols == static_cast<int>(width)) {
    resized = square;
  } else {
    cv::resize(square, resized, cv::Size(static_cast<int>(width), static_cast<int>(height)), 0, 0,
               cv::INTER_LINEAR);
  }
  cv::Mat rgb;
  cv::cvtColor(resized, rgb, cv::COLOR_BGR2RGB);
  Tensor t({height, width, 3});
  for (std::size_t y = 0; y < height; ++y) {
    const auto* row = rgb.ptr<std::uint8_t>(static_cast<int>(y));
    for (std::size_t i = 0; i < width * 3; ++i) t[y * width * 3 + i] = from_byte(row[i]);
  }
  return t;
}

void write_png(const Image8& image, const std::filesystem::path& path) {
  if (image.channels != 1 && image.channels != 3) {
    throw ShapeError("PNG output supports 1 or 3 channels, got " + std::to_string(image.channels));
  }
  const int type = image.channels == 1 ? CV_8UC1 : CV_8UC3;
  cv::Mat src(static_cast<int>(image.height), static_cast<int>(image.width), type,
              const_cast<std::uint8_t*>(image.pixels.data()));
  cv::Mat out;
  if (image.channels == 3) {
    cv::cvtColor(src, out, cv::COLOR_RGB2BGR);
  } else {
    out = src;
  }
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), out);
  } catch (const cv::Exception& e) {
    throw DataError("cannot write " + path.string() + ": " + e.what());
  }
  if (!ok) throw DataError("cannot write " + path.string());
}

void write_png(const Tensor& image, const std::filesystem::path& path) {
  write_png(to_image8(image), path);
}

}  // namespace aegan
