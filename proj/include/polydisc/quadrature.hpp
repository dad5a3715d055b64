#pragma once

// Quadrature rules and grid sizing used by the norm evaluators.

#include <cstddef>
#include <vector>

namespace polydisc::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Gauss-Legendre rule for the integral over [0, 1].
Rule gauss_legendre(std::size_t count);

/// Gauss-Jacobi rule for int_0^1 phi(t) (1 - t)^a dt, a > -1.
Rule gauss_jacobi(std::size_t count, double a);

/// Composite rule for int_0^1 phi(R) (1 - R)^{w - 1} dR, w > 0.
///
/// Panels [0, 1/2], [1/2, 3/4], ..., [1 - 2^{1-L}, 1 - 2^{-L}] carry
/// Gauss-Legendre nodes with the weight folded in; the end panel
/// [1 - 2^{-L}, 1] uses Gauss-Jacobi in the endpoint weight.
Rule weighted_radial(double w, std::size_t levels, std::size_t per_panel);

/// Graded panel count for integrands built from degree-K polynomials.
std::size_t panel_levels(std::size_t degree);

/// Smallest integer >= n of the form 16 * 2^a * 3^b * 5^c.
std::size_t next_smooth(std::size_t n);

/// Angular grid size for a degree-K axis: next_smooth(max(4 (K + 1), minimum)),
/// doubled `refine` times. Multiples of 16 keep rotations by 2 pi / 16 on
/// the grid.
std::size_t angular_size(std::size_t degree, unsigned refine = 0, std::size_t minimum = 64);

/// Floor of one-variable angular grids. |f|^p has kinks at zeros of f when p
/// is not even, and the trapezoid rule converges slowly there.
inline constexpr std::size_t kMinAngular1d = 256;
/// Floor per axis of two-variable grids, where f has isolated zeros on the torus.
inline constexpr std::size_t kMinAngular2d = 64;

/// Default depth of the geometric radius grid for a degree-K input.
std::size_t sup_depth(std::size_t degree);

/// Radii 1 - 2^{-j} for j = 0..depth.
std::vector<double> sup_radii(std::size_t depth);

}  // namespace polydisc::quad
