#pragma once

// Tempo distributions: histogram, the spline-smoothed CDF density, and
// Gaussian KDE.
//
// The spline density pipeline is
//   jitter -> histogram -> empirical CDF at bin centres (plus two boundary
//   points) -> clamped cubic spline with zero end slopes -> S'(x) on a fine
//   grid -> clamp negatives to 0.
// The clamped density is not renormalized, so its mass can fall slightly
// away from 1 when the spline undershoots between knots.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "tempovis/error.hpp"
#include "tempovis/numeric.hpp"
#include "tempovis/spline.hpp"

namespace tempovis {

struct HistogramResult {
  std::vector<double> edges;    // K + 1, ascending
  std::vector<long> counts;     // K
  std::vector<double> centres;  // K

  std::size_t bins() const noexcept { return counts.size(); }
  long total() const { return std::accumulate(counts.begin(), counts.end(), 0L); }
  double bin_width(std::size_t k) const { return edges[k + 1] - edges[k]; }

  /// count / (N × bin width): bar heights in the same per-BPM unit as a density.
  std::vector<double> density() const {
    std::vector<double> out(counts.size());
    const double n = static_cast<double>(total());
    for (std::size_t k = 0; k < counts.size(); ++k)
      out[k] = n > 0 ? static_cast<double>(counts[k]) / (n * bin_width(k)) : 0.0;
    return out;
  }
};

struct EcdfResult {
  std::vector<double> xs;  // K + 2
  std::vector<double> Fs;  // K + 2, 0 first, 1 last
};

struct SplinePdf {
  std::vector<double> grid;
  std::vector<double> density;
};

struct KdeCurve {
  std::vector<double> grid;
  std::vector<double> density;
  double bandwidth = 0.0;
};

struct SplinePdfOptions {
  int n_bins = 28;
  int grid_points = 400;
  double epsilon = 1e-3;
  double jitter_amplitude = 0.5;
  std::uint64_t seed = 0;
};

/// Sample size below which the empirical CDF is too coarse to smooth reliably.
inline constexpr std::size_t kSparseSampleThreshold = 50;

struct SplinePdfResult {
  HistogramResult histogram;
  SplinePdf pdf;
  ClampedSpline spline;
  bool sparse_sample = false;  // fewer than kSparseSampleThreshold observations
};

/// Adds independent uniform noise in [-amplitude, +amplitude] to each value.
/// Deterministic for a given seed; amplitude 0 returns the input unchanged.
inline std::vector<double> jitter(std::span<const double> data, double amplitude,
                                  std::uint64_t seed) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw domain_error("jitter amplitude must be non-negative, got " + std::to_string(amplitude));
  }
  std::vector<double> out(data.begin(), data.end());
  if (amplitude == 0.0) return out;
  Rng rng(seed);
  for (double& v : out) v += rng.uniform(-amplitude, amplitude);
  return out;
}

/// Equal-width histogram over [min, max] of the data. Bins are half-open
/// except the last, which is closed on both sides. Constant data is widened
/// symmetrically by max(0.5, |value| × 1e-6).
inline HistogramResult histogram(std::span<const double> data, int n_bins) {
  if (data.empty()) throw domain_error("histogram of empty data");
  if (n_bins < 1) throw domain_error("histogram needs at least 1 bin, got " + std::to_string(n_bins));
  for (double v : data)
    if (!std::isfinite(v)) throw domain_error("histogram data contains a non-finite value");

  const auto [min_it, max_it] = std::minmax_element(data.begin(), data.end());
  double lo = *min_it;
  double hi = *max_it;
  if (lo == hi) {
    const double pad = std::max(0.5, std::abs(lo) * 1e-6);
    lo -= pad;
    hi += pad;
  }

  const auto k_bins = static_cast<std::size_t>(n_bins);
  HistogramResult h;
  h.edges = linspace(lo, hi, k_bins + 1);
  h.counts.assign(k_bins, 0);
  const double span = hi - lo;
  for (double v : data) {
    auto k = static_cast<std::size_t>(std::floor((v - lo) / span * static_cast<double>(k_bins)));
    k = std::min(k, k_bins - 1);
    // Correct for rounding in the index computation against the actual edges.
    if (k > 0 && v < h.edges[k]) --k;
    else if (k + 1 < k_bins && v >= h.edges[k + 1]) ++k;
    ++h.counts[k];
  }
  h.centres.resize(k_bins);
  for (std::size_t k = 0; k < k_bins; ++k) h.centres[k] = 0.5 * (h.edges[k] + h.edges[k + 1]);
  return h;
}

/// Cumulative proportion through each bin, at bin centres, with boundary
/// points (edges.front() - epsilon, 0) and (edges.back() + epsilon, 1).
inline EcdfResult empirical_cdf(const HistogramResult& hist, double epsilon = 1e-3) {
  if (!(epsilon > 0.0)) throw domain_error("ecdf epsilon must be positive");
  const long total = hist.total();
  if (total <= 0) throw domain_error("ecdf of a histogram with zero total count");

  EcdfResult e;
  e.xs.reserve(hist.bins() + 2);
  e.Fs.reserve(hist.bins() + 2);
  e.xs.push_back(hist.edges.front() - epsilon);
  e.Fs.push_back(0.0);
  long running = 0;
  for (std::size_t k = 0; k < hist.bins(); ++k) {
    running += hist.counts[k];
    e.xs.push_back(hist.centres[k]);
    e.Fs.push_back(static_cast<double>(running) / static_cast<double>(total));
  }
  e.xs.push_back(hist.edges.back() + epsilon);
  e.Fs.push_back(1.0);

  for (std::size_t i = 1; i < e.Fs.size(); ++i) {
    if (e.Fs[i] < e.Fs[i - 1]) throw domain_error("ecdf is not monotone (negative bin count?)");
  }
  return e;
}

inline SplinePdfResult spline_pdf(std::span<const double> data, const SplinePdfOptions& opt = {}) {
  if (opt.grid_points < 1) throw domain_error("grid_points must be positive");
  const auto jittered = jitter(data, opt.jitter_amplitude, opt.seed);

  SplinePdfResult r;
  r.sparse_sample = data.size() < kSparseSampleThreshold;
  r.histogram = histogram(jittered, opt.n_bins);
  const auto ecdf = empirical_cdf(r.histogram, opt.epsilon);
  r.spline = fit_clamped_spline(ecdf.xs, ecdf.Fs);
  r.pdf.grid = linspace(r.histogram.edges.front(), r.histogram.edges.back(),
                        static_cast<std::size_t>(opt.grid_points));
  r.pdf.density = eval_spline_derivative(r.spline, r.pdf.grid);
  for (double& d : r.pdf.density) d = std::max(d, 0.0);
  return r;
}

/// Gaussian KDE with bandwidth = bandwidth_factor × population std of the data.
inline KdeCurve gaussian_kde(std::span<const double> data, double bandwidth_factor = 0.07,
                             double grid_min = 0.0, double grid_max = 265.0,
                             int grid_points = 800) {
  if (data.size() < 2) throw domain_error("kde needs at least 2 observations");
  if (!(bandwidth_factor > 0.0)) throw domain_error("kde bandwidth factor must be positive");
  if (!(grid_min < grid_max)) throw domain_error("kde grid_min must be below grid_max");
  if (grid_points < 1) throw domain_error("kde grid_points must be positive");
  for (double v : data)
    if (!std::isfinite(v)) throw domain_error("kde data contains a non-finite value");

  const double spread = population_std(data);
  if (!(spread > 0.0)) throw domain_error("kde of zero-variance data (bandwidth would be 0)");

  KdeCurve k;
  k.bandwidth = bandwidth_factor * spread;
  k.grid = linspace(grid_min, grid_max, static_cast<std::size_t>(grid_points));
  k.density.resize(k.grid.size());
  const double inv_h = 1.0 / k.bandwidth;
  const double norm = inv_h / (static_cast<double>(data.size()) * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t g = 0; g < k.grid.size(); ++g) {
    double sum = 0.0;
    for (double d : data) {
      const double z = (k.grid[g] - d) * inv_h;
      sum += std::exp(-0.5 * z * z);
    }
    k.density[g] = norm * sum;
  }
  return k;
}

}  // namespace tempovis
