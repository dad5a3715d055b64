#include <doctest.h>

#include <gsl/gsl_sf_ellint.h>

#include <cmath>
#include <numbers>

#include "polydisc/asymptotics.hpp"
#include "polydisc/error.hpp"

using namespace polydisc;

namespace {

const std::vector<double> kBeta0{0.0}, kBeta1{1.0}, kBeta2{2.0}, kBeta3{3.0};

}  // namespace

TEST_SUITE("asymptotics") {
  TEST_CASE("predicted exponents") {
    const auto a = predicted_exponent(space::Apq{2, 2, 1}, kBeta3, 1);
    CHECK(a.tau[0] == doctest::Approx(2.5));
    CHECK(a.valid);
    const auto m = predicted_exponent(space::Mpq{1, 2, 1}, kBeta2, 2);
    CHECK(m.tau[0] == doctest::Approx(3.0));
    CHECK(m.total == doctest::Approx(3.0));
    CHECK(m.valid);
    const auto h = predicted_exponent(space::Hp{2}, kBeta0, 1);
    CHECK(h.tau[0] == doctest::Approx(0.5));
    CHECK(h.valid);
    const auto t = predicted_exponent(space::Tpq{2, 2, 1}, kBeta2, 2);
    CHECK(t.tau[0] == doctest::Approx(2.0));
    CHECK(t.total == doctest::Approx(4.0));
    const auto low = predicted_exponent(space::Apq{2, 2, 3}, kBeta1, 1);
    CHECK_FALSE(low.valid);
    CHECK_THROWS_AS(predicted_exponent(space::Bpq{2, 2, 1}, kBeta1, 1), UnsupportedError);
  }

  TEST_CASE("geometric grids") {
    const auto g4 = geometric_r_grid(4);
    REQUIRE(g4.size() == 3);
    CHECK(g4[0][0] == 0.75);
    CHECK(g4[1][0] == 0.875);
    CHECK(g4[2][0] == 0.9375);
    CHECK(geometric_r_grid(3).size() == 2);
    CHECK_THROWS_AS(geometric_r_grid(2), InputError);
    CHECK_THROWS_AS(geometric_r_grid(15), InputError);
    for (const auto& R : geometric_r_grid(14)) {
      CHECK(kernel_degrees(R)[0] <= static_cast<std::size_t>(50.0 * std::ldexp(1.0, 14)));
    }
  }

  TEST_CASE("line fits") {
    const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
    const auto f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.residual < 1e-14);
    CHECK_THROWS_AS(fit_line(std::vector<double>{1, 1}, std::vector<double>{0, 1}), InputError);
  }

  TEST_CASE("scale invariance of the slope") {
    const std::vector<double> r{0.5, 0.75, 0.875, 0.9375, 0.96875, 0.984375};
    std::vector<double> v, w;
    for (double x : r) {
      v.push_back(std::pow(1 - x, -1.3) * (1 + x));
      w.push_back(7.5 * v.back());
    }
    CHECK(std::abs(growth_slope(r, v).slope - growth_slope(r, w).slope) < 1e-8);
  }

  TEST_CASE("H^1 norm of the geometric kernel grows only logarithmically") {
    const auto fit = norm_growth_fit(space::Hp{1}, kBeta0, geometric_r_grid(9));
    CHECK(fit.target == 0.0);
    // ||1/(1 - Rz)||_{H^1} = (2/pi) K(R) with K the complete elliptic integral.
    std::vector<double> exact;
    for (std::size_t i = 0; i < fit.radii.size(); ++i) {
      const double e = 2.0 / std::numbers::pi * gsl_sf_ellint_Kcomp(fit.radii[i], GSL_PREC_DOUBLE);
      CHECK(fit.norms[i] == doctest::Approx(e).epsilon(1e-8));
      exact.push_back(e);
    }
    CHECK(fit.fitted == doctest::Approx(growth_slope(fit.radii, exact).slope).epsilon(1e-6));
    // The log-log slope of log(1/(1 - R)) decays like 1/log(1/(1 - R)).
    const auto deeper = norm_growth_fit(space::Hp{1}, kBeta0, geometric_r_grid(13));
    CHECK(deeper.fitted < fit.fitted);
    CHECK(deeper.fitted < 0.15);
  }

  TEST_CASE("H^2 norm with beta = 1") {
    const auto fit = norm_growth_fit(space::Hp{2}, kBeta1, geometric_r_grid(10));
    CHECK(fit.fitted == doctest::Approx(1.5).epsilon(0.1 / 1.5));
    CHECK(fit.status == "matched");
    CHECK(fit.radii.size() == 9);
    CHECK(fit.window.size() == 6);
    // Against the Parseval sum directly.
    std::vector<double> parseval;
    for (double R : fit.radii) {
      const auto g = kernel_factors(RadialPoint({R}), kBeta1);
      parseval.push_back(parseval_mean(g, RadialPoint({1.0 - 1e-15})));
    }
    CHECK(growth_slope(fit.radii, parseval).slope == doctest::Approx(fit.fitted).epsilon(0.02));
  }

  TEST_CASE("non-monotone grid is rejected") {
    auto grid = geometric_r_grid(9);
    std::swap(grid[2], grid[3]);
    CHECK_THROWS_AS(norm_growth_fit(space::Hp{2}, kBeta1, grid), InputError);
  }
}
