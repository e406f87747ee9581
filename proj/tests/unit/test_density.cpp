#include <catch_amalgamated.hpp>

#include <random>

#include "oracles.hpp"
#include "tempovis/density.hpp"

using namespace tempovis;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("jitter") {
  const std::vector<double> data{120, 120, 120, 87.5};
  CHECK(jitter(data, 0.0, 9) == data);
  const auto a = jitter(data, 0.5, 42), b = jitter(data, 0.5, 42);
  CHECK(a == b);
  CHECK(a != jitter(data, 0.5, 43));
  for (std::size_t i = 0; i < data.size(); ++i) CHECK(std::abs(a[i] - data[i]) <= 0.5);
  CHECK_THROWS_AS(jitter(data, -1.0, 0), domain_error);
}

TEST_CASE("histogram of an even split") {
  const std::vector<double> data{1, 2, 3, 4};
  const auto h = histogram(data, 2);
  CHECK(h.edges == std::vector<double>{1, 2.5, 4});
  CHECK(h.counts == std::vector<long>{2, 2});
  CHECK(h.centres == std::vector<double>{1.75, 3.25});
}

TEST_CASE("histogram puts the maximum in the last bin") {
  const std::vector<double> data{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  CHECK(histogram(data, 5).counts == std::vector<long>{2, 2, 2, 2, 3});
}

TEST_CASE("histogram of a single value widens the range") {
  const std::vector<double> one{5};
  const auto h = histogram(one, 1);
  CHECK(h.counts == std::vector<long>{1});
  CHECK(h.edges == std::vector<double>{4.5, 5.5});
  const std::vector<double> big{1e7, 1e7};
  CHECK(histogram(big, 3).bin_width(0) > 0.0);
}

TEST_CASE("histogram counts match a brute-force oracle") {
  std::mt19937_64 g(1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto data = oracle::mixture(g(), 50 + g() % 500, {1.0}, {120.0}, {25.0});
    const int bins = 1 + static_cast<int>(g() % 40);
    const auto h = histogram(data, bins);
    CHECK(h.total() == static_cast<long>(data.size()));
    CHECK(h.counts == oracle::histogram_counts(data, bins));
    for (std::size_t k = 0; k < h.bins(); ++k)
      CHECK(h.centres[k] == (h.edges[k] + h.edges[k + 1]) / 2);
  }
}

TEST_CASE("histogram density normalisation") {
  const std::vector<double> data{1, 2, 3, 4};
  const auto d = histogram(data, 2).density();
  CHECK(d == std::vector<double>{2.0 / (4 * 1.5), 2.0 / (4 * 1.5)});
}

TEST_CASE("histogram rejects bad input") {
  const std::vector<double> empty, nan{1, std::nan("")}, ok{1, 2};
  CHECK_THROWS_AS(histogram(empty, 3), domain_error);
  CHECK_THROWS_AS(histogram(nan, 3), domain_error);
  CHECK_THROWS_AS(histogram(ok, 0), domain_error);
}

TEST_CASE("empirical cdf") {
  HistogramResult h{{0, 1, 2}, {2, 2}, {0.5, 1.5}};
  auto e = empirical_cdf(h);
  CHECK(e.xs == std::vector<double>{-1e-3, 0.5, 1.5, 2.0 + 1e-3});
  CHECK(e.Fs == std::vector<double>{0.0, 0.5, 1.0, 1.0});

  HistogramResult h3{{0, 1, 2, 3}, {1, 0, 3}, {0.5, 1.5, 2.5}};
  e = empirical_cdf(h3, 0.01);
  CHECK(e.Fs == std::vector<double>{0.0, 0.25, 0.25, 1.0, 1.0});
  CHECK(e.xs.front() == -0.01);

  HistogramResult neg{{0, 1, 2}, {2, -1}, {0.5, 1.5}};
  CHECK_THROWS_AS(empirical_cdf(neg), domain_error);
}

TEST_CASE("last interior cdf value is exactly one") {
  std::mt19937_64 g(5);
  for (int trial = 0; trial < 30; ++trial) {
    const auto data = oracle::mixture(g(), 3 + g() % 999, {1.0}, {100.0}, {30.0});
    const auto e = empirical_cdf(histogram(data, 28));
    CHECK(e.Fs[e.Fs.size() - 2] == 1.0);
    CHECK(e.xs.size() == 30);
  }
}

TEST_CASE("spline pdf on a 3-bin sample matches the dense oracle") {
  const std::vector<double> data{0.0, 1.2, 1.8, 3.0};
  SplinePdfOptions opt;
  opt.n_bins = 3;
  opt.jitter_amplitude = 0.0;
  const auto r = spline_pdf(data, opt);
  const oracle::DenseSpline o({-1e-3, 0.5, 1.5, 2.5, 3.001}, {0.0, 0.25, 0.75, 1.0, 1.0});
  for (std::size_t i = 0; i < r.pdf.grid.size(); ++i)
    CHECK_THAT(r.pdf.density[i], WithinAbs(std::max(0.0, o.derivative(r.pdf.grid[i])), 1e-9));
  CHECK(r.sparse_sample);
}

TEST_CASE("spline pdf contract") {
  const auto data = oracle::mixture(3, 400, {0.2, 0.8}, {37.0, 140.0}, {5.0, 20.0});
  const auto r = spline_pdf(data);
  CHECK_FALSE(r.sparse_sample);
  REQUIRE(r.pdf.grid.size() == 400);
  CHECK(r.pdf.grid.front() == r.histogram.edges.front());
  CHECK(r.pdf.grid.back() == r.histogram.edges.back());
  for (double d : r.pdf.density) CHECK(d >= 0.0);
  const double mass = oracle::trapezoid(r.pdf.grid, r.pdf.density);
  CHECK(mass >= 0.97);
  CHECK(mass <= 1.03);

  const auto again = spline_pdf(data);
  CHECK(again.pdf.density == r.pdf.density);
}

TEST_CASE("unclamped derivative integrates to one") {
  const auto data = oracle::mixture(8, 600, {1.0}, {110.0}, {15.0});
  const auto r = spline_pdf(data);
  const auto xs = linspace(r.spline.front(), r.spline.back(), 400);
  const auto d = eval_spline_derivative(r.spline, xs);
  CHECK_THAT(oracle::trapezoid(xs, d), WithinAbs(1.0, 1e-3));
}

TEST_CASE("spline pdf of constant data is a single narrow peak") {
  const std::vector<double> data(60, 120.0);
  SplinePdfOptions opt;
  opt.jitter_amplitude = 0.0;
  const auto r = spline_pdf(data, opt);
  CHECK(oracle::modes(r.pdf.grid, r.pdf.density, 0.25).size() == 1);
}

TEST_CASE("kde of two points") {
  const std::vector<double> data{100, 200};
  const auto k = gaussian_kde(data, 0.07, 0.0, 300.0, 601);
  CHECK_THAT(k.bandwidth, WithinRel(3.5, 1e-12));
  for (std::size_t i = 0; i < k.grid.size(); ++i)
    CHECK_THAT(k.density[i], WithinAbs(k.density[k.grid.size() - 1 - i], 1e-15));
  CHECK(k.density[static_cast<std::size_t>(300)] < 1e-12);  // x = 150, > 10h away
}

TEST_CASE("kde matches direct summation") {
  const auto data = oracle::mixture(2, 300, {0.5, 0.5}, {60.0, 150.0}, {8.0, 12.0});
  const auto k = gaussian_kde(data);
  CHECK(k.grid.size() == 800);
  CHECK(k.grid.front() == 0.0);
  CHECK(k.grid.back() == 265.0);
  for (std::size_t i = 0; i < k.grid.size(); i += 37)
    CHECK_THAT(k.density[i], WithinAbs(oracle::kde_at(data, k.bandwidth, k.grid[i]), 1e-13));
}

TEST_CASE("kde mass and positivity") {
  const auto data = oracle::mixture(4, 500, {1.0}, {130.0}, {20.0});
  const double lo = *std::min_element(data.begin(), data.end());
  const double hi = *std::max_element(data.begin(), data.end());
  const double h = 0.07 * population_std(data);
  const auto k = gaussian_kde(data, 0.07, lo - 5 * h, hi + 5 * h, 3000);
  CHECK_THAT(oracle::trapezoid(k.grid, k.density), WithinAbs(1.0, 0.02));
  for (double d : k.density) CHECK(d > 0.0);
}

TEST_CASE("kde rejects degenerate input") {
  const std::vector<double> flat{5, 5, 5}, one{5}, ok{1, 2};
  CHECK_THROWS_AS(gaussian_kde(flat), domain_error);
  CHECK_THROWS_AS(gaussian_kde(one), domain_error);
  CHECK_THROWS_AS(gaussian_kde(ok, 0.0), domain_error);
  CHECK_THROWS_AS(gaussian_kde(ok, 0.07, 10.0, 5.0), domain_error);
}

TEST_CASE("numeric helpers") {
  CHECK(linspace(0.0, 1.0, 5) == std::vector<double>{0, 0.25, 0.5, 0.75, 1.0});
  CHECK(linspace(2.0, 3.0, 1) == std::vector<double>{2.0});
  const std::vector<double> v{100, 140};
  CHECK(mean(v) == 120.0);
  CHECK(population_std(v) == 20.0);
  Rng a(1), b(1);
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}
