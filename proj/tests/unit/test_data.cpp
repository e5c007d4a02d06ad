#include <doctest.h>

#include <cmath>
#include <fstream>
#include <set>

#include "aegan/data.hpp"
#include "aegan/errors.hpp"
#include "aegan/image_io.hpp"
#include "aegan/random.hpp"
#include "support.hpp"

using namespace aegan;
namespace fs = std::filesystem;

namespace {

Tensor random_image(std::size_t h, std::size_t w, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_int_distribution<int> byte(0, 255);
  Tensor t({h, w, 3});
  for (double& v : t.values()) v = from_byte(static_cast<std::uint8_t>(byte(rng)));
  return t;
}

}  // namespace

TEST_CASE("mixture centers lie on the circle with exact axis points") {
  const MixtureSpec spec{8, 2.0, 0.02, 10};
  const auto c = mixture_centers(spec);
  REQUIRE(c.size() == 8);
  CHECK(c[0].x == 2.0);
  CHECK(c[0].y == 0.0);
  CHECK(c[4].x == -2.0);
  CHECK(c[4].y == 0.0);
  for (std::size_t k = 0; k < 8; ++k) {
    CHECK(std::hypot(c[k].x, c[k].y) == doctest::Approx(2.0).epsilon(1e-12));
    const auto& next = c[(k + 1) % 8];
    CHECK(std::hypot(next.x - c[k].x, next.y - c[k].y) == doctest::Approx(4.0 * std::sin(M_PI / 8)).epsilon(1e-12));
  }
}

TEST_CASE("zero mode_std puts every point on its center") {
  const MixtureSpec spec{8, 2.0, 0.0, 5};
  const Dataset d = make_gaussian_mixture(spec, 1);
  const auto c = mixture_centers(spec);
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(d.samples[2 * i] == c[i / 5].x);
    CHECK(d.samples[2 * i + 1] == c[i / 5].y);
  }
}

TEST_CASE("mixture samples: 10 sigma containment and per-mode mean") {
  const MixtureSpec spec{8, 2.0, 0.02, 1000};
  const Dataset d = make_gaussian_mixture(spec, 42);
  REQUIRE(d.size() == 8000);
  const auto c = mixture_centers(spec);
  for (std::size_t k = 0; k < 8; ++k) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < 1000; ++i) {
      const std::size_t row = k * 1000 + i;
      const double dx = d.samples[2 * row] - c[k].x, dy = d.samples[2 * row + 1] - c[k].y;
      CHECK(std::hypot(dx, dy) < 0.2);
      mx += d.samples[2 * row];
      my += d.samples[2 * row + 1];
    }
    const double bound = 3.0 * spec.mode_std / std::sqrt(1000.0);
    CHECK(std::abs(mx / 1000 - c[k].x) < bound);
    CHECK(std::abs(my / 1000 - c[k].y) < bound);
  }
  for (double v : d.samples.values()) {
    CHECK(v >= d.value_range.low);
    CHECK(v <= d.value_range.high);
  }
  CHECK(make_gaussian_mixture(spec, 42).samples == d.samples);
}

TEST_CASE("mixture export writes x,y rows") {
  const auto dir = testing::scratch_dir("csv");
  const Dataset d = make_gaussian_mixture({4, 1.0, 0.1, 3}, 0);
  write_points_csv(d.samples, dir / "points.csv");
  std::ifstream in(dir / "points.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "x,y");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 12);
  fs::remove_all(dir);
}

TEST_CASE("minibatches: drop-last, determinism, permutation") {
  Dataset d;
  d.samples = Tensor({100, 2});
  for (std::size_t i = 0; i < 100; ++i) d.samples[2 * i] = static_cast<double>(i);

  MinibatchStream a(d, 16, 7), b(d, 16, 7);
  CHECK(a.batches_per_epoch() == 6);
  std::set<double> seen;
  for (int k = 0; k < 6; ++k) {
    const Tensor ba = a.next();
    CHECK(ba == b.next());
    CHECK(ba.shape() == Shape{16, 2});
    for (std::size_t i = 0; i < 16; ++i) seen.insert(ba[2 * i]);
  }
  CHECK(seen.size() == 96);

  // Epochs reshuffle, and seeking reproduces a batch.
  const auto second_epoch_first = a.peek_indices();
  MinibatchStream c(d, 16, 7);
  c.seek(6);
  CHECK(c.peek_indices() == second_epoch_first);
  MinibatchStream other_seed(d, 16, 8);
  MinibatchStream same_seed(d, 16, 7);
  CHECK_FALSE(other_seed.peek_indices() == same_seed.peek_indices());

  CHECK_THROWS_AS(MinibatchStream(d, 101, 0), ConfigError);
}

TEST_CASE("flip is an involution") {
  const Tensor img = random_image(5, 7, 3);
  CHECK(flip_horizontal(flip_horizontal(img)) == img);
  CHECK_FALSE(flip_horizontal(img) == img);
}

TEST_CASE("image folder loading") {
  const auto dir = testing::scratch_dir("images");

  SUBCASE("empty folder") { CHECK_THROWS_AS(load_image_folder(dir, {8, 8}, true), DataError); }

  SUBCASE("single image with mirroring") {
    const Tensor img = random_image(8, 8, 1);
    write_png(img, dir / "a.png");
    const Dataset d = load_image_folder(dir, {8, 8}, true);
    REQUIRE(d.size() == 2);
    const Tensor first = d.samples.rows(0, 1).reshaped({8, 8, 3});
    const Tensor second = d.samples.rows(1, 1).reshaped({8, 8, 3});
    CHECK(second == flip_horizontal(first));
    // Round trip through PNG stays within one quantization step.
    for (std::size_t i = 0; i < img.size(); ++i) CHECK(std::abs(first[i] - img[i]) <= 1.0 / 127.5);
  }

  SUBCASE("symmetric image mirrors to an identical item") {
    Tensor img = random_image(6, 6, 2);
    const Tensor flipped = flip_horizontal(img);
    for (std::size_t y = 0; y < 6; ++y) {
      for (std::size_t x = 3; x < 6; ++x) {
        for (std::size_t ch = 0; ch < 3; ++ch) img[(y * 6 + x) * 3 + ch] = flipped[(y * 6 + x) * 3 + ch];
      }
    }
    write_png(img, dir / "sym.png");
    const Dataset d = load_image_folder(dir, {6, 6}, true);
    REQUIRE(d.size() == 2);
    CHECK(d.samples.rows(0, 1).values().size() == 108);
    CHECK(std::equal(d.samples.row(0).begin(), d.samples.row(0).end(), d.samples.row(1).begin()));
  }

  SUBCASE("count doubles with mirroring, undecodable files are skipped") {
    for (int i = 0; i < 5; ++i) write_png(random_image(10, 10, 10 + i), dir / ("img" + std::to_string(i) + ".png"));
    std::ofstream(dir / "broken.png") << "not an image";
    std::ofstream(dir / "notes.txt") << "ignored";
    CHECK(load_image_folder(dir, {10, 10}, false).size() == 5);
    CHECK(load_image_folder(dir, {10, 10}, true).size() == 10);
  }

  SUBCASE("all files undecodable") {
    std::ofstream(dir / "broken.jpg") << "junk";
    CHECK_THROWS_AS(load_image_folder(dir, {8, 8}, false), DataError);
  }

  SUBCASE("non-square input is center-cropped and resized") {
    write_png(random_image(12, 20, 5), dir / "wide.png");
    const Dataset d = load_image_folder(dir, {6, 6}, false);
    CHECK(d.samples.shape() == Shape{1, 6, 6, 3});
    for (double v : d.samples.values()) {
      CHECK(v >= -1.0);
      CHECK(v <= 1.0);
    }
  }
  fs::remove_all(dir);
}
