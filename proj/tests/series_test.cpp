#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "polydisc/error.hpp"
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

}  // namespace

TEST_SUITE("series") {
  TEST_CASE("row-major layout and indexing") {
    const CoeffTensor f({1, 2}, {1, 2, 3, 4, 5, 6});
    CHECK(f.strides() == std::vector<std::size_t>{3, 1});
    const std::vector<std::size_t> k{1, 0};
    CHECK(f.at(k) == cplx(4));
    CHECK(f.index_of(5) == MultiIndex{1, 2});
    CHECK(f.abs_sum() == doctest::Approx(21));
    CHECK_THROWS_AS(CoeffTensor({1, 2}, {1, 2, 3}), InputError);
  }

  TEST_CASE("zero order derivative is the identity") {
    const auto f = random_tensor({4, 3}, 7);
    const std::vector<double> beta{0.0, 0.0};
    const auto g = frac_diff(f, beta);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(g.coeffs()[i] - f.coeffs()[i]) == 0.0);
  }

  TEST_CASE("first derivative of a monomial") {
    const std::vector<double> beta{1.0};
    for (std::size_t k : {0u, 1u, 5u, 40u}) {
      const auto g = frac_diff(CoeffTensor::monomial({k}), beta);
      CHECK(g.coeffs()[k].real() == doctest::Approx(static_cast<double>(k + 1)).epsilon(1e-14));
    }
  }

  TEST_CASE("mixed derivative in two variables") {
    const std::vector<double> beta{1.0, 1.0};
    const auto g = frac_diff(CoeffTensor::monomial({1, 2}), beta);
    const std::vector<std::size_t> k{1, 2};
    CHECK(g.at(k).real() == doctest::Approx(6.0).epsilon(1e-14));
  }

  TEST_CASE("gamma ratio agrees with the rising factorial") {
    for (double beta : {0.5, 2.0, 3.7}) {
      double prod = 1.0;
      for (std::size_t k = 0; k < 60; ++k) {
        CHECK(gamma_ratio(k, beta) == doctest::Approx(prod).epsilon(1e-12));
        prod *= (static_cast<double>(k) + beta + 1.0) / static_cast<double>(k + 1);
      }
    }
    CHECK(std::isfinite(gamma_ratio(1u << 20, 10.0)));
    CHECK_THROWS_AS(gamma_ratio(3, -1.0), ParameterDomainError);
  }

  TEST_CASE("multipliers") {
    const auto f = random_tensor({6, 5}, 11);
    const auto same = apply_multiplier(MultiplierSeq::constant(1.0), f);
    const auto zero = apply_multiplier(MultiplierSeq::constant(0.0), f);
    for (std::size_t i = 0; i < f.size(); ++i) {
      CHECK(same.coeffs()[i] == f.coeffs()[i]);
      CHECK(zero.coeffs()[i] == cplx(0.0));
    }
    const std::vector<double> beta{0.5, 2.5};
    const auto via_seq = apply_multiplier(MultiplierSeq::gamma_ratio(beta), f);
    const auto via_diff = frac_diff(f, beta);
    for (std::size_t i = 0; i < f.size(); ++i) {
      CHECK(std::abs(via_seq.coeffs()[i] - via_diff.coeffs()[i]) <= 1e-12 * std::abs(via_diff.coeffs()[i]));
    }
    const auto pw = MultiplierSeq::power_growth({2.0});
    const std::vector<std::size_t> k{3, 4};
    CHECK(pw(k).real() == doctest::Approx(16.0 * 25.0));
  }

  TEST_CASE("products stay factored under separable multipliers") {
    const std::vector<double> beta{1.0};
    const auto g = kernel_factors(RadialPoint::diagonal(2, 0.5), beta);
    const Series h = apply_multiplier(MultiplierSeq::power_growth({1.0}), SeriesView(g));
    REQUIRE(std::holds_alternative<ProductSeries>(h));
    const auto dense = apply_multiplier(MultiplierSeq::power_growth({1.0}), g.expand());
    const auto expanded = std::get<ProductSeries>(h).expand();
    for (std::size_t i = 0; i < dense.size(); i += 97) {
      CHECK(std::abs(expanded.coeffs()[i] - dense.coeffs()[i]) <= 1e-12 * std::abs(dense.coeffs()[i]));
    }
  }

  TEST_CASE("kernel coefficients") {
    const std::vector<double> b0{0.0}, b1{1.0};
    const RadialPoint R({0.6});
    const auto geo = kernel_coeffs(R, b0);
    const auto lin = kernel_coeffs(R, b1);
    CHECK(geo.degrees()[0] == static_cast<std::size_t>(std::ceil(50.0 / 0.4)));
    for (std::size_t k = 0; k < 30; ++k) {
      CHECK(geo.coeffs()[k].real() == doctest::Approx(std::pow(0.6, k)).epsilon(1e-13));
      CHECK(lin.coeffs()[k].real() == doctest::Approx((k + 1.0) * std::pow(0.6, k)).epsilon(1e-13));
    }
  }

  TEST_CASE("kernel value against the closed form") {
    const std::vector<double> beta{1.0};
    const auto f = kernel_coeffs(RadialPoint({0.9}), beta);
    cplx s = 0.0;
    for (std::size_t k = f.size(); k-- > 0;) s = s * 0.5 + f.coeffs()[k];
    CHECK(std::abs(s - 1.0 / std::pow(1.0 - 0.45, 2)) < 1e-10);
  }

  TEST_CASE("kernel truncation below the policy is refused") {
    const std::vector<double> beta{1.0};
    CHECK_THROWS_AS(kernel_coeffs(RadialPoint({0.9}), beta, Degrees{100}), TruncationInsufficient);
    try {
      kernel_coeffs(RadialPoint({0.9, 0.5}), beta, Degrees{10, 10});
      FAIL("short truncation accepted");
    } catch (const TruncationInsufficient& e) {
      CHECK(e.recommended() == kernel_degrees(RadialPoint({0.9, 0.5})));
    }
  }

  TEST_CASE("Parseval mean") {
    CHECK(parseval_mean(CoeffTensor::monomial({5}), RadialPoint({0.7})) == doctest::Approx(std::pow(0.7, 5)));
    const CoeffTensor f({1}, {1.0, 1.0});
    CHECK(parseval_mean(f, RadialPoint({0.4})) == doctest::Approx(std::sqrt(1.0 + 0.16)));
    const std::vector<double> beta{1.0, 0.0};
    const auto g = kernel_factors(RadialPoint({0.5, 0.8}), beta);
    CHECK(parseval_mean(g, RadialPoint({0.9, 0.3})) ==
          doctest::Approx(parseval_mean(g.expand(), RadialPoint({0.9, 0.3}))).epsilon(1e-12));
  }

  TEST_CASE("scaling and rotation of products") {
    const std::vector<double> beta{1.0};
    const auto g = kernel_factors(RadialPoint::diagonal(2, 0.3), beta);
    const std::vector<double> phi{0.4, -1.1};
    const auto a = g.scaled(cplx(0, 2)).rotated(phi).expand();
    const auto b = g.expand().scaled(cplx(0, 2)).rotated(phi);
    for (std::size_t i = 0; i < a.size(); i += 13) CHECK(std::abs(a.coeffs()[i] - b.coeffs()[i]) < 1e-13);
  }

  TEST_CASE("broadcast") {
    const std::vector<double> one{2.0}, two{1.0, 3.0};
    CHECK(broadcast(one, 3, "x") == std::vector<double>{2.0, 2.0, 2.0});
    CHECK(broadcast(two, 2, "x") == two);
    CHECK_THROWS_AS(broadcast(two, 3, "x"), InputError);
  }
}
