#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "polydisc/kernels.hpp"
#include "polydisc/reference.hpp"
#include "polydisc/series.hpp"

using namespace polydisc;

namespace {

CoeffTensor random_tensor(const Degrees& d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::size_t size = 1;
  for (auto k : d) size *= k + 1;
  std::vector<cplx> a(size);
  for (auto& x : a) x = {g(rng), g(rng)};
  return CoeffTensor(d, a);
}

// Plain double loop over all coefficients.
cplx naive(const CoeffTensor& f, double r1, double t1, double r2, double t2) {
  cplx s = 0.0;
  const auto& d = f.degrees();
  for (std::size_t a = 0; a <= d[0]; ++a) {
    for (std::size_t b = 0; b <= d[1]; ++b) {
      const std::vector<std::size_t> k{a, b};
      s += f.at(k) * std::polar(std::pow(r1, a) * std::pow(r2, b), a * t1 + b * t2);
    }
  }
  return s;
}

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("constant and monomial grids") {
    const std::vector<double> r{0.8};
    const std::vector<std::size_t> m{64};
    for (const cplx& v : kernels::torus_values(CoeffTensor::constant(1, cplx(2, -1)), r, m)) {
      CHECK(std::abs(v - cplx(2, -1)) < 1e-14);
    }
    const auto vals = kernels::torus_values(CoeffTensor::monomial({5}), r, m);
    for (std::size_t t = 0; t < 64; ++t) {
      const cplx want = std::polar(std::pow(0.8, 5), 5 * 2 * std::numbers::pi * t / 64);
      CHECK(std::abs(vals[t] - want) < 1e-14);
    }
  }

  TEST_CASE("two-variable grid against direct summation") {
    const auto f = random_tensor({8, 8}, 3);
    const std::vector<double> r{0.7, 0.95};
    const std::vector<std::size_t> m{32, 48};
    const auto vals = kernels::torus_values(f, r, m);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < 32; ++i) {
      for (std::size_t j = 0; j < 48; ++j) {
        const cplx want = naive(f, 0.7, 2 * std::numbers::pi * i / 32, 0.95, 2 * std::numbers::pi * j / 48);
        worst = std::max(worst, std::abs(vals[i * 48 + j] - want));
        scale = std::max(scale, std::abs(want));
      }
    }
    CHECK(worst <= 1e-10 * scale);
  }

  TEST_CASE("parallel and serial grids agree") {
    const auto f = random_tensor({20, 6, 3}, 5);
    const std::vector<double> r{0.9, 0.5, 1.0};
    const std::vector<std::size_t> m{64, 16, 16};
    const auto a = kernels::torus_values(f, r, m);
    const auto b = reference::torus_values(f, r, m);
    REQUIRE(a.size() == b.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    CHECK(worst < 1e-11 * f.abs_sum());
    for (double p : {0.5, 1.0, 2.0, 3.5}) {
      CHECK(kernels::power_mean(a, p) == doctest::Approx(reference::power_mean(b, p)).epsilon(1e-12));
    }
  }

  TEST_CASE("diagonal restriction") {
    const auto f = random_tensor({5, 4}, 9);
    const std::vector<double> r{0.6, 0.3};
    const auto h = kernels::diagonal_values(f, r, 32);
    for (std::size_t t = 0; t < 32; t += 5) {
      const double th = 2 * std::numbers::pi * t / 32;
      CHECK(std::abs(h[t] - naive(f, 0.6, th, 0.3, th)) < 1e-12);
    }
  }

  TEST_CASE("Fourier coefficients recover the coefficients") {
    const auto f = random_tensor({7, 3}, 13);
    const std::vector<std::size_t> m{16, 16};
    const std::vector<double> r{1.0, 1.0};
    auto v = kernels::torus_values(f, r, m);
    kernels::fourier_coefficients(v, m);
    for (std::size_t a = 0; a <= 7; ++a) {
      for (std::size_t b = 0; b <= 3; ++b) {
        const std::vector<std::size_t> k{a, b};
        CHECK(std::abs(v[a * 16 + b] - f.at(k)) < 1e-13);
      }
    }
  }

  TEST_CASE("means and sums") {
    std::vector<double> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / static_cast<double>(i + 1);
    double s = 0.0;
    for (double x : v) s += x;
    CHECK(kernels::blocked_sum(v) == doctest::Approx(s).epsilon(1e-14));
    const std::vector<double> w{1.0, 3.0};
    CHECK(kernels::power_mean(std::span<const double>(w), 2.0) == doctest::Approx(std::sqrt(5.0)));
    CHECK(kernels::power_mean(std::span<const double>(w), INFINITY) == 3.0);
    // Axis 0 is the slow index: p = 2 over it first, then p = 1 over axis 1.
    const std::vector<double> grid{1.0, 3.0, 2.0, 2.0};
    const std::vector<std::size_t> m{2, 2};
    const std::vector<double> p{2.0, 1.0};
    CHECK(kernels::nested_mean(grid, m, p) == doctest::Approx((std::sqrt(2.5) + std::sqrt(6.5)) / 2));
  }

  TEST_CASE("polished maximum") {
    // |1 + z + z^2| peaks at z = 1; |1 + iz| peaks at z = -i, off the 5-point grid.
    const CoeffTensor f({2}, {1.0, 1.0, 1.0});
    const std::vector<double> r{1.0};
    const std::vector<std::size_t> m{7};
    CHECK(kernels::max_modulus(f, r, m) == doctest::Approx(3.0).epsilon(1e-12));
    const CoeffTensor g({1}, {1.0, cplx(0, 1)});
    const std::vector<std::size_t> m5{5};
    CHECK(kernels::max_modulus(g, r, m5) == doctest::Approx(2.0).epsilon(1e-12));
  }
}
