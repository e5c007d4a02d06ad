#include <doctest.h>

#include <cmath>
#include <fstream>

#include "aegan/errors.hpp"
#include "aegan/eval.hpp"
#include "support.hpp"

using namespace aegan;
namespace fs = std::filesystem;

namespace {

NetworkSpec dense_spec(NetworkRole role, std::vector<std::size_t> widths, double scale = 1.0) {
  NetworkSpec s;
  s.role = role;
  s.layer_widths = std::move(widths);
  s.output_activation = required_output_activation(role);
  s.output_scale = scale;
  return s;
}

// Single-layer E = identity and G(z) = k tanh(z / k), so G(E(x)) ~ x.
std::pair<Network, Network> identity_pair(double k) {
  Network e = make_network(dense_spec(NetworkRole::encoder, {2, 2}), 0);
  Network g = make_network(dense_spec(NetworkRole::generator, {2, 2}, k), 0);
  for (auto* net : {&e, &g}) {
    for (auto& t : net->parameters().tensors) {
      for (double& v : t.value.values()) v = 0.0;
      if (t.name == "dense0.weight") {
        const double diag = net == &e ? 1.0 : 1.0 / k;
        t.value[0] = diag;
        t.value[3] = diag;
      }
    }
  }
  return {e, g};
}

Tensor points(std::initializer_list<double> xy) {
  Tensor t({xy.size() / 2, 2});
  std::copy(xy.begin(), xy.end(), t.values().begin());
  return t;
}

double max_adjacent_l1(const Tensor& frames) {
  double worst = 0.0;
  for (std::size_t i = 1; i < frames.batch(); ++i) {
    double d = 0.0;
    for (std::size_t j = 0; j < frames.row_size(); ++j) d += std::abs(frames.row(i)[j] - frames.row(i - 1)[j]);
    worst = std::max(worst, d);
  }
  return worst;
}

}  // namespace

TEST_CASE("coverage: total collapse onto one center") {
  const MixtureSpec spec{8, 2.0, 0.02, 10};
  const auto centers = mixture_centers(spec);
  Tensor s({100, 2});
  for (std::size_t i = 0; i < 100; ++i) {
    s[2 * i] = centers[3].x;
    s[2 * i + 1] = centers[3].y;
  }
  const auto r = mode_coverage(s, centers, 0.06, default_min_count(100));
  CHECK(r.modes_hit == 1);
  CHECK(r.coverage_fraction == 0.125);
  CHECK(r.assignment_counts[3] == 100);
  CHECK(r.high_quality_fraction == 1.0);
}

TEST_CASE("coverage: the dataset itself hits every mode") {
  const MixtureSpec spec{8, 2.0, 0.02, 200};
  const Dataset d = make_gaussian_mixture(spec, 3);
  const auto r = mode_coverage(d.samples, mixture_centers(spec), 10 * spec.mode_std, 1);
  CHECK(r.modes_hit == 8);
  CHECK(r.coverage_fraction == 1.0);
  for (std::size_t c : r.assignment_counts) CHECK(c == 200);
}

TEST_CASE("coverage: uniform ring matches the arc-length oracle") {
  const MixtureSpec spec{8, 2.0, 0.02, 10};
  const auto centers = mixture_centers(spec);
  const double radius = default_capture_radius(spec);
  CHECK(radius == doctest::Approx(0.06));

  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  const std::size_t n = 10000;
  Tensor s({n, 2});
  std::vector<double> theta(n);
  for (std::size_t i = 0; i < n; ++i) {
    theta[i] = angle(rng);
    s[2 * i] = 2.0 * std::cos(theta[i]);
    s[2 * i + 1] = 2.0 * std::sin(theta[i]);
  }
  // On the ring, a point is within r of a center iff its angular offset is
  // at most 2 asin(r / 2R).
  const double half_arc = 2.0 * std::asin(radius / 4.0);
  std::size_t inside = 0;
  for (double t : theta) {
    const double step = 2.0 * M_PI / 8.0;
    const double offset = std::remainder(t, step);
    if (std::abs(offset) <= half_arc) ++inside;
  }
  const auto r = mode_coverage(s, centers, radius, default_min_count(n));
  CHECK(r.high_quality_fraction == doctest::Approx(static_cast<double>(inside) / n).epsilon(2e-4));
  CHECK(r.high_quality_fraction == doctest::Approx(0.07639723776318416).epsilon(0.1));
}

TEST_CASE("coverage: assignments agree with a brute-force oracle") {
  const MixtureSpec spec{8, 2.0, 0.02, 10};
  const auto centers = mixture_centers(spec);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  Tensor s({10000, 2});
  for (double& v : s.values()) v = u(rng);
  const double radius = 0.5;
  const auto got = assign_to_modes(s, centers, radius);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < 10000; ++i) {
    std::ptrdiff_t expect = -1;
    double best = radius;
    for (std::size_t k = 0; k < centers.size(); ++k) {
      const double d = std::hypot(s[2 * i] - centers[k].x, s[2 * i + 1] - centers[k].y);
      if (d <= best && (expect < 0 || d < best)) {
        best = d;
        expect = static_cast<std::ptrdiff_t>(k);
      }
    }
    CHECK(got[i] == expect);
    assigned += expect >= 0;
  }
  CHECK(assigned > 1000);
}

TEST_CASE("coverage: invariants and defaults") {
  const MixtureSpec spec{8, 2.0, 0.02, 10};
  const auto centers = mixture_centers(spec);
  const Tensor s = points({2.0, 0.0, 2.01, 0.0, 0.0, 0.0, 5.0, 5.0});
  const auto r = mode_coverage(s, centers, 0.06, 1);
  CHECK(r.modes_hit <= 8);
  std::size_t total = 0;
  for (std::size_t c : r.assignment_counts) total += c;
  CHECK(total <= r.n_samples);
  CHECK(r.assignment_counts[0] == 2);
  CHECK(r.high_quality_fraction == 0.5);
  CHECK(mode_coverage(s, centers, 0.06, 3).modes_hit == 0);
  CHECK(default_min_count(50) == 1);
  CHECK(default_min_count(1000) == 10);
  CHECK_THROWS_AS(mode_coverage(Tensor({0, 2}), centers, 0.06, 1), UsageError);

  const auto dir = testing::scratch_dir("coverage");
  write_coverage_csv(r, centers, dir / "c.csv");
  std::ifstream in(dir / "c.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "mode,center_x,center_y,count,hit");
  fs::remove_all(dir);
}

TEST_CASE("reconstruction: identity-capable toy") {
  const auto [e, g] = identity_pair(1e4);
  Dataset zeros;
  zeros.samples = Tensor({20, 2}, 0.0);
  const auto exact = reconstruction_report(e, g, zeros, 10);
  for (double err : exact.errors) CHECK(err == 0.0);
  CHECK(exact.mean == 0.0);

  const Dataset ring = make_gaussian_mixture({8, 2.0, 0.02, 10}, 1);
  const auto near = reconstruction_report(e, g, ring, 32);
  CHECK(near.max < 1e-7);
  CHECK(near.errors.size() == 32);
}

TEST_CASE("reconstruction: untrained networks, selection and clamping") {
  const auto c = testing::tiny_dense_config(4);
  const AeganModel m = build_model(c);
  const Dataset d = make_gaussian_mixture(c.data.mixture, 0);
  const auto r = reconstruction_report(m.encoder, m.generator, d, 16, 5);
  for (double err : r.errors) CHECK(err > 0.0);
  CHECK(r.median <= r.p90);
  CHECK(r.p90 <= r.max);
  CHECK(reconstruction_report(m.encoder, m.generator, d, 16, 5).indices == r.indices);
  const auto longer = reconstruction_report(m.encoder, m.generator, d, 32, 5);
  CHECK(std::equal(r.indices.begin(), r.indices.end(), longer.indices.begin()));
  CHECK_FALSE(r.clamped);

  const auto all = reconstruction_report(m.encoder, m.generator, d, 10000, 5);
  CHECK(all.clamped);
  CHECK(all.requested == 10000);
  CHECK(all.errors.size() == d.size());
  CHECK_THROWS_AS(reconstruction_report(m.encoder, m.generator, d, 0), UsageError);
}

TEST_CASE("interpolation contract") {
  const auto c = testing::tiny_dense_config(6);
  const AeganModel m = build_model(c);
  const Tensor x1 = points({1.5, -0.3});
  const Tensor x2 = points({-0.7, 2.2});
  const Tensor recon1 = generate(m.generator, encode(m.encoder, x1));
  const Tensor recon2 = generate(m.generator, encode(m.encoder, x2));

  const auto two = interpolate_real(m.encoder, m.generator, x1, x2, 2);
  CHECK(two.frames.rows(0, 1) == recon1);
  CHECK(two.frames.rows(1, 1) == recon2);

  const auto r = interpolate_real(m.encoder, m.generator, x1.reshaped({2}), x2, 9);
  CHECK(r.frames.batch() == 9);
  CHECK(r.frames.rows(0, 1) == recon1);
  CHECK(r.frames.rows(8, 1) == recon2);
  const Tensor z1 = encode(m.encoder, x1), z2 = encode(m.encoder, x2);
  for (std::size_t i = 0; i < 9; ++i) {
    const double t = i / 8.0;
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(std::abs(r.latent_path.row(i)[j] - ((1 - t) * z1[j] + t * z2[j])) <= 1e-12);
    }
  }

  const auto three = interpolate_real(m.encoder, m.generator, x1, x2, 3);
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(std::abs(three.latent_path.row(1)[j] - 0.5 * (z1[j] + z2[j])) <= 1e-7);
  }

  const auto same = interpolate_real(m.encoder, m.generator, x1, x1, 5);
  for (std::size_t i = 1; i < 5; ++i) CHECK(same.frames.rows(i, 1) == same.frames.rows(0, 1));

  CHECK_THROWS_AS(interpolate_real(m.encoder, m.generator, x1, x2, 1), UsageError);
  CHECK_THROWS_AS(interpolate_real(m.encoder, m.generator, points({1, 2, 3, 4}), x2, 3), ShapeError);
}

TEST_CASE("latent interpolation and path continuity") {
  const auto c = testing::tiny_dense_config(6);
  const AeganModel m = build_model(c);
  const Tensor z1 = points({0.3, -1.2}), z2 = points({-2.0, 0.8});
  const auto two = interpolate_latent(m.generator, z1, z2, 2);
  CHECK(two.frames.rows(0, 1) == generate(m.generator, z1));
  CHECK(two.frames.rows(1, 1) == generate(m.generator, z2));
  const auto constant = interpolate_latent(m.generator, z1, z1, 4);
  for (std::size_t i = 1; i < 4; ++i) CHECK(constant.frames.rows(i, 1) == constant.frames.rows(0, 1));

  for (std::size_t k : {2, 3, 5, 10, 40}) {
    const double coarse = max_adjacent_l1(interpolate_latent(m.generator, z1, z2, k).frames);
    const double fine = max_adjacent_l1(interpolate_latent(m.generator, z1, z2, 2 * k).frames);
    CHECK(fine <= coarse + 1e-6);
  }

  const auto dir = testing::scratch_dir("latent");
  write_latent_path_csv(two.latent_path, dir / "path.csv");
  std::ifstream in(dir / "path.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "step,z0,z1");
  fs::remove_all(dir);
}

TEST_CASE("sample grids: determinism and seed sharing") {
  auto c = testing::tiny_dense_config(1);
  const AeganModel a = build_model(c);
  c.training.seed = 2;
  const AeganModel b = build_model(c);
  const LatentPrior prior{c.model.latent_dim};
  const ValueRange range = value_range(c.data);

  const auto ga = sample_grid(a.generator, prior, 10, 10, 77, range);
  const auto gb = sample_grid(b.generator, prior, 10, 10, 77, range);
  CHECK(ga.latents == gb.latents);
  CHECK(ga.latents.shape() == Shape{100, 2});
  CHECK_FALSE(ga.samples == gb.samples);
  const auto again = sample_grid(a.generator, prior, 10, 10, 77, range);
  CHECK(again.samples == ga.samples);
  CHECK(again.image.pixels == ga.image.pixels);

  const auto one = sample_grid(a.generator, prior, 1, 1, 5, range);
  CHECK(one.samples == generate(a.generator, one.latents));
  CHECK(one.samples.batch() == 1);
  CHECK_THROWS_AS(sample_grid(a.generator, prior, 0, 3, 5, range), UsageError);
}

TEST_CASE("image grids") {
  Tensor imgs({3, 4, 5, 3}, 1.0);
  const Image8 grid = render_grid(imgs, 2, 2);
  CHECK(grid.height == 2 * 4 + 3 * kGridSeparator);
  CHECK(grid.width == 2 * 5 + 3 * kGridSeparator);
  const auto px = [&](std::size_t y, std::size_t x) { return grid.pixels[(y * grid.width + x) * 3]; };
  CHECK(px(0, 0) == kGridBackground);
  CHECK(px(kGridSeparator, kGridSeparator) == 255);
  CHECK(px(grid.height - kGridSeparator - 1, grid.width - kGridSeparator - 1) == kGridBackground);

  Tensor originals({2, 4, 4, 3}, -1.0), recons({2, 4, 4, 3}, 1.0);
  const Image8 pairs = render_pair_grid(originals, recons, 2);
  const auto pp = [&](std::size_t y, std::size_t x) { return pairs.pixels[(y * pairs.width + x) * 3]; };
  CHECK(pairs.width == 4 * 4 + 5 * kGridSeparator);
  CHECK(pp(kGridSeparator, kGridSeparator) == 0);
  CHECK(pp(kGridSeparator, 2 * kGridSeparator + 4) == 255);
  CHECK_THROWS_AS(render_pair_grid(originals, Tensor({1, 4, 4, 3}), 2), ShapeError);

  const Image8 scatter = render_scatter(points({0.0, 0.0}), {-1.0, 1.0}, 101);
  CHECK(scatter.pixels[(50 * 101 + 50) * 3] == 20);
}
