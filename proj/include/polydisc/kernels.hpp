#pragma once

// Parallel evaluation kernels: FFT synthesis on torus grids, deterministic
// reductions, and polished sup-norm search. Radii may equal 1 here (boundary
// values of a polynomial).

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "polydisc/series.hpp"

namespace polydisc::kernels {

/// f(r_1 e^{i theta_1}, ..., r_n e^{i theta_n}) on theta_j = 2 pi t / m_j,
/// row-major with the last axis fastest.
std::vector<cplx> torus_values(const CoeffTensor& f, std::span<const double> r, std::span<const std::size_t> m);

/// h(zeta) = f(r_1 zeta, ..., r_n zeta) on zeta = e^{2 pi i t / m}.
std::vector<cplx> diagonal_values(const CoeffTensor& f, std::span<const double> r, std::size_t m);

/// In-place normalized forward DFT: c_u = (1 / prod m) sum_t x_t e^{-2 pi i u.t / m}.
void fourier_coefficients(std::vector<cplx>& samples, std::span<const std::size_t> m);

/// x^e for x >= 0, by multiplication and square roots when 2e is a small integer.
inline double positive_pow(double x, double e) {
  if (e == 1.0) return x;
  if (e == 2.0) return x * x;
  if (e == 0.5) return std::sqrt(x);
  if (e == 1.5) return x * std::sqrt(x);
  if (e == 3.0) return x * x * x;
  if (e == 4.0) return (x * x) * (x * x);
  if (e == 0.25) return std::sqrt(std::sqrt(x));
  if (e == 0.75) return std::sqrt(x * std::sqrt(x));
  return std::pow(x, e);
}

/// Sum in fixed blocks so the result does not depend on the thread count.
double blocked_sum(std::span<const double> v);

/// (mean |v|^p)^{1/p}; p = infinity gives max |v|.
double power_mean(std::span<const cplx> v, double p);
/// Same for nonnegative reals.
double power_mean(std::span<const double> v, double p);

/// Mixed mean over a row-major grid: exponent p[0] over axis 0 innermost,
/// then p[1] over axis 1, and so on.
double nested_mean(std::span<const double> modulus, std::span<const std::size_t> m, std::span<const double> p);

/// max |f| on the torus of radii r: grid maximum followed by Newton polishing
/// of the best candidates with exact derivative sums.
double max_modulus(const CoeffTensor& f, std::span<const double> r, std::span<const std::size_t> m);

/// Value of f at one point r_j e^{i theta_j} (direct summation).
cplx evaluate(const CoeffTensor& f, std::span<const double> r, std::span<const double> theta);

}  // namespace polydisc::kernels
