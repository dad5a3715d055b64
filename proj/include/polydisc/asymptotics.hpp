#pragma once

// Growth of kernel norms along R -> 1 and least-squares fits of the growth
// exponent.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "polydisc/norms.hpp"
#include "polydisc/series.hpp"
#include "polydisc/space.hpp"

namespace polydisc {

/// Predicted growth ||g_R|| ~ (1 - R)^{-tau} for the kernel
/// g_R = prod_j (1 - R_j z_j)^{-(beta_j + 1)}.
struct ExponentPrediction {
  /// Per-coordinate exponents, or a single entry for scalar-radius families.
  std::vector<double> tau;
  /// beta must exceed these (componentwise) for the estimate to hold.
  std::vector<double> threshold;
  bool valid = false;
  /// Number of identical coordinate factors behind each tau entry along the
  /// diagonal (n for product-type families, 1 otherwise).
  std::size_t multiplicity = 1;
  /// Expected slope along the diagonal grid; negative entries clamp to 0.
  double total = 0.0;
};

ExponentPrediction predicted_exponent(const SpaceSpec& spec, std::span<const double> beta, std::size_t n);

/// Diagonal radii 1 - 2^{-j}, j = 2..depth, with 3 <= depth <= 14.
std::vector<RadialPoint> geometric_r_grid(std::size_t depth);

enum class GridMode { Diagonal, PerCoordinate };

struct FitOptions {
  GridMode mode = GridMode::Diagonal;
  /// Varied coordinate in per-coordinate mode; the others stay at `fixed`.
  std::size_t axis = 0;
  double fixed = 0.5;
  std::size_t window = 6;
  NormOptions norm{0, 16, false};
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root-mean-square deviation of the log-log fit.
  double residual = 0.0;
};

/// Least-squares line through (x_i, y_i).
LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct SlopeFit {
  double fitted = 0.0;
  /// fitted divided by the number of contributing coordinate factors.
  double per_coordinate = 0.0;
  double residual = 0.0;
  std::vector<std::size_t> window;
  ExponentPrediction predicted;
  /// Slope the fit is compared with for this grid mode.
  double target = 0.0;
  /// "matched", "bound satisfied, not saturated" or "exceeded".
  std::string status;
  /// Varied radius, norm, log(1 / (1 - R)) per grid point.
  std::vector<double> radii, norms, log_ratio;
  std::vector<GridMeta> grids;
};

/// Norm of the kernel at each grid point and the fitted growth exponent over
/// the last `window` points.
SlopeFit norm_growth_fit(const SpaceSpec& spec, std::span<const double> beta, const std::vector<RadialPoint>& grid,
                         const FitOptions& opts = {});

/// Slope of log(values) against log(1 / (1 - radii)) over the last `window`
/// points.
LineFit growth_slope(std::span<const double> radii, std::span<const double> values, std::size_t window = 6);

}  // namespace polydisc
