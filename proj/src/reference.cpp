#include "polydisc/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "polydisc/error.hpp"

namespace polydisc::reference {

namespace {

// Horner over axis j for the sub-box starting at `offset`.
cplx horner(const CoeffTensor& f, const std::vector<std::size_t>& strides, std::size_t j, std::size_t offset,
            const std::vector<cplx>& z) {
  const std::size_t deg = f.degrees()[j];
  cplx acc = 0.0;
  for (std::size_t k = deg + 1; k-- > 0;) {
    const std::size_t o = offset + k * strides[j];
    const cplx c = j + 1 == f.dim() ? f.coeffs()[o] : horner(f, strides, j + 1, o, z);
    acc = acc * z[j] + c;
  }
  return acc;
}

}  // namespace

std::vector<cplx> torus_values(const CoeffTensor& f, std::span<const double> r, std::span<const std::size_t> m) {
  const std::size_t n = f.dim();
  if (r.size() != n || m.size() != n) throw InputError("grid dimension does not match series dimension");
  std::size_t total = 1;
  for (std::size_t mj : m) total *= mj;
  const auto strides = f.strides();
  std::vector<cplx> out(total);
  std::vector<std::size_t> t(n, 0);
  std::vector<cplx> z(n);
  for (std::size_t o = 0; o < total; ++o) {
    std::size_t rem = o;
    for (std::size_t j = n; j-- > 0;) {
      t[j] = rem % m[j];
      rem /= m[j];
      z[j] = std::polar(r[j], 2.0 * std::numbers::pi * static_cast<double>(t[j]) / static_cast<double>(m[j]));
    }
    out[o] = horner(f, strides, 0, 0, z);
  }
  return out;
}

double power_mean(std::span<const cplx> v, double p) {
  if (v.empty()) throw InputError("empty sample");
  double peak = 0.0;
  for (const cplx& x : v) peak = std::max(peak, std::abs(x));
  if (peak == 0.0 || std::isinf(p)) return peak;
  double s = 0.0;
  for (const cplx& x : v) s += std::pow(std::abs(x) / peak, p);
  return peak * std::pow(s / static_cast<double>(v.size()), 1.0 / p);
}

}  // namespace polydisc::reference
