#pragma once

// Quasi-norms of the function-space families, evaluated by trapezoid rules on
// the torus and graded Gauss rules in the radius.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "polydisc/series.hpp"
#include "polydisc/space.hpp"

namespace polydisc {

struct NormOptions {
  /// Each level doubles the angular grids and the radial nodes per panel.
  unsigned refine = 0;
  std::size_t per_panel = 16;
  /// Re-evaluate one level finer and report the relative change.
  bool estimate_error = true;
  /// With estimate_error: while the change exceeds this, move up one level,
  /// at most `max_extra_levels` times. The value reported is the finer one.
  double tolerance = 1e-4;
  unsigned max_extra_levels = 2;
};

struct GridMeta {
  std::vector<std::size_t> angular;
  std::size_t radial_nodes = 0;
  std::size_t sup_depth = 0;
  unsigned refine = 0;
  bool sup_polished = true;
};

struct NormResult {
  double value = 0.0;
  /// Relative change from the reported level to the next; empty when not requested.
  std::optional<double> refine_delta;
  GridMeta grid;
};

/// M_p(f, r) with the normalized torus measure; p = infinity gives the
/// polished maximum of |f|.
double integral_mean(SeriesView f, double p, const RadialPoint& r, unsigned refine = 0);

/// Apq, Bpq, Fpq, Tpq, Mpq.
NormResult radial_mixed_norm(SeriesView f, const SpaceSpec& spec, const NormOptions& opts = {});

/// Hp, AInfInf, Bloch, ApInfS, FpInfS, HvecSub, HvecPlain.
NormResult sup_type_norm(SeriesView f, const SpaceSpec& spec, const NormOptions& opts = {});

/// Nested area norm over U^n (n <= 2) with weights (1 - |xi_j|)^{alpha_j} and
/// unnormalized area measure; innermost variable xi_1.
NormResult area_mixed_norm(SeriesView f, std::span<const double> p, std::span<const double> alpha,
                           const NormOptions& opts = {});

/// Carleson-type norm (sup_w I(w))^{1/q} over the tensor w-grid of radii
/// 1 - 2^{-j}, j = 0..10, and 16 angles per coordinate. n <= 2.
NormResult carleson_bmoa_norm(SeriesView f, double q, double s, double alpha, const NormOptions& opts = {});

/// sup_r M_p(f, r) prod_j (1 - r_j)^{weights_j} over r in I^n. With
/// `diagonal`, r runs over the diagonal and weights holds one total exponent.
NormResult weighted_sup_mean(SeriesView f, double p, std::span<const double> weights, bool diagonal,
                             const NormOptions& opts = {});

/// Dispatch on the family.
NormResult evaluate_norm(SeriesView f, const SpaceSpec& spec, const NormOptions& opts = {});

}  // namespace polydisc
