#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tempovis/error.hpp"

namespace tempovis {

/// Prescribed first derivatives at the two end knots.
struct EndSlopes {
  double left = 0.0;
  double right = 0.0;
};

/// Piecewise cubic interpolant with prescribed end slopes (a "clamped"
/// spline). On interval i, with t = x - knots[i]:
///
///   S(t) = a_i + b_i t + c_i t^2 + d_i t^3
///
/// The spline is C2 at interior knots.
class ClampedSpline {
 public:
  using Coefficients = std::array<double, 4>;  // a, b, c, d

  ClampedSpline() = default;

  /// Fits the spline through (xs, ys). Requires at least 3 knots with
  /// strictly increasing, finite xs.
  ClampedSpline(std::span<const double> xs, std::span<const double> ys, EndSlopes slopes = {})
      : knots_(xs.begin(), xs.end()), slopes_(slopes) {
    const std::size_t n = xs.size();
    if (ys.size() != n) {
      throw domain_error("spline: xs and ys differ in length (" + std::to_string(n) + " vs " +
                         std::to_string(ys.size()) + ")");
    }
    if (n < 3) throw domain_error("spline: need at least 3 knots, got " + std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
        throw domain_error("spline: knot " + std::to_string(i) + " is not finite");
      }
      if (i > 0 && !(xs[i] > xs[i - 1])) {
        throw domain_error("spline: xs must be strictly increasing (knot " + std::to_string(i) +
                           ": " + std::to_string(xs[i]) + " after " + std::to_string(xs[i - 1]) +
                           ")");
      }
    }

    // Solve for the second derivatives M at each knot. Clamped ends give
    //   2 h0 M0 + h0 M1 = 6 ((y1 - y0)/h0 - s_left)
    //   h_{n-2} M_{n-2} + 2 h_{n-2} M_{n-1} = 6 (s_right - (y_{n-1} - y_{n-2})/h_{n-2})
    // and interior rows are the usual C2 continuity conditions. The system is
    // strictly diagonally dominant, so Thomas elimination needs no pivoting.
    std::vector<double> h(n - 1), slope(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = xs[i + 1] - xs[i];
      slope[i] = (ys[i + 1] - ys[i]) / h[i];
    }
    std::vector<double> sub(n), diag(n), sup(n), rhs(n);
    diag[0] = 2.0 * h[0];
    sup[0] = h[0];
    rhs[0] = 6.0 * (slope[0] - slopes.left);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      sub[i] = h[i - 1];
      diag[i] = 2.0 * (h[i - 1] + h[i]);
      sup[i] = h[i];
      rhs[i] = 6.0 * (slope[i] - slope[i - 1]);
    }
    sub[n - 1] = h[n - 2];
    diag[n - 1] = 2.0 * h[n - 2];
    rhs[n - 1] = 6.0 * (slopes.right - slope[n - 2]);

    for (std::size_t i = 1; i < n; ++i) {
      const double w = sub[i] / diag[i - 1];
      diag[i] -= w * sup[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> m(n);
    m[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];

    coeffs_.resize(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      coeffs_[i] = {ys[i], slope[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 6.0, m[i] / 2.0,
                    (m[i + 1] - m[i]) / (6.0 * h[i])};
    }
  }

  std::span<const double> knots() const noexcept { return knots_; }
  std::size_t intervals() const noexcept { return coeffs_.size(); }
  const Coefficients& coefficients(std::size_t interval) const { return coeffs_.at(interval); }
  EndSlopes end_slopes() const noexcept { return slopes_; }
  double front() const { return knots_.front(); }
  double back() const { return knots_.back(); }

  double value(double x) const {
    const auto [i, t] = locate(x);
    const auto& c = coeffs_[i];
    return c[0] + t * (c[1] + t * (c[2] + t * c[3]));
  }

  double derivative(double x) const {
    const auto [i, t] = locate(x);
    const auto& c = coeffs_[i];
    return c[1] + t * (2.0 * c[2] + t * 3.0 * c[3]);
  }

  double second_derivative(double x) const {
    const auto [i, t] = locate(x);
    const auto& c = coeffs_[i];
    return 2.0 * c[2] + 6.0 * c[3] * t;
  }

 private:
  struct Location {
    std::size_t interval;
    double t;
  };

  // Interval i covers [knots[i], knots[i+1]); the last also owns its right end.
  Location locate(double x) const {
    if (coeffs_.empty()) throw domain_error("spline: evaluated before fitting");
    if (!(x >= knots_.front() && x <= knots_.back())) {
      throw domain_error("spline: x = " + std::to_string(x) + " outside knot range [" +
                         std::to_string(knots_.front()) + ", " + std::to_string(knots_.back()) +
                         "]");
    }
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - knots_.begin());
    i = i == 0 ? 0 : std::min(i - 1, coeffs_.size() - 1);
    return {i, x - knots_[i]};
  }

  std::vector<double> knots_;
  std::vector<Coefficients> coeffs_;
  EndSlopes slopes_;
};

inline ClampedSpline fit_clamped_spline(std::span<const double> xs, std::span<const double> ys,
                                        EndSlopes slopes = {}) {
  return ClampedSpline(xs, ys, slopes);
}

/// Analytic S'(x) at each grid point; throws if any point lies outside the knots.
inline std::vector<double> eval_spline_derivative(const ClampedSpline& spline,
                                                  std::span<const double> grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double x : grid) out.push_back(spline.derivative(x));
  return out;
}

inline std::vector<double> eval_spline(const ClampedSpline& spline, std::span<const double> grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double x : grid) out.push_back(spline.value(x));
  return out;
}

}  // namespace tempovis
