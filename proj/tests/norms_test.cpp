#include <doctest.h>

#include <gsl/gsl_integration.h>

#include <cmath>
#include <numbers>
#include <random>

#include "polydisc/asymptotics.hpp"
#include "polydisc/error.hpp"
#include "polydisc/norms.hpp"

using namespace polydisc;

namespace {

constexpr double kPi = std::numbers::pi;

CoeffTensor random_tensor(const Degrees& d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::size_t size = 1;
  for (auto k : d) size *= k + 1;
  std::vector<cplx> a(size);
  for (auto& x : a) x = {g(rng), g(rng)};
  return CoeffTensor(d, a);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Poly1 {
  const CoeffTensor* f;
  double p, alpha, rho;
};

double modulus_p(double theta, void* data) {
  const auto* c = static_cast<Poly1*>(data);
  cplx s = 0.0;
  const auto a = c->f->coeffs();
  for (std::size_t k = a.size(); k-- > 0;) s = s * std::polar(c->rho, theta) + a[k];
  return std::pow(std::abs(s), c->p);
}

double ring(double rho, void* data) {
  auto* c = static_cast<Poly1*>(data);
  c->rho = rho;
  gsl_integration_workspace* w = gsl_integration_workspace_alloc(200);
  gsl_function F{&modulus_p, c};
  double v = 0.0, e = 0.0;
  gsl_integration_qag(&F, 0.0, 2 * kPi, 1e-13, 1e-11, 200, GSL_INTEG_GAUSS61, w, &v, &e);
  gsl_integration_workspace_free(w);
  return v * std::pow(1.0 - rho, c->alpha) * rho;
}

// (int_D |f|^p (1 - |z|)^alpha dm_2)^{1/p} by adaptive quadrature in polar form.
double bergman_oracle(const CoeffTensor& f, double p, double alpha) {
  Poly1 c{&f, p, alpha, 0.0};
  gsl_integration_workspace* w = gsl_integration_workspace_alloc(200);
  gsl_function F{&ring, &c};
  double v = 0.0, e = 0.0;
  gsl_integration_qags(&F, 0.0, 1.0, 1e-13, 1e-10, 200, w, &v, &e);
  gsl_integration_workspace_free(w);
  return std::pow(v, 1.0 / p);
}

const NormOptions kQuick{0, 16, false};

}  // namespace

TEST_SUITE("norms") {
  TEST_CASE("integral means of constants") {
    const auto f = CoeffTensor::constant(2, cplx(3, 4));
    for (double p : {0.5, 1.0, 2.0, 7.0, kInf}) {
      CHECK(integral_mean(f, p, RadialPoint({0.3, 0.9})) == doctest::Approx(5.0).epsilon(1e-13));
    }
  }

  TEST_CASE("integral mean with p = 2 is the Parseval sum") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto f = random_tensor({9, 4}, seed);
      const RadialPoint r({0.9, 0.3});
      CHECK(rel(integral_mean(f, 2.0, r), parseval_mean(f, r)) <= 1e-8);
    }
  }

  TEST_CASE("M_1 of the kernel grows like (1 - rho R)^{-beta}") {
    const std::vector<double> beta{1.0};
    const auto g = kernel_factors(RadialPoint({1.0 - std::ldexp(1.0, -12)}), beta);
    const double R = 1.0 - std::ldexp(1.0, -12);
    std::vector<double> x, y;
    for (int j = 4; j <= 9; ++j) {
      const double rho = 1.0 - std::ldexp(1.0, -j);
      x.push_back(-std::log(1.0 - rho * R));
      y.push_back(std::log(integral_mean(g, 1.0, RadialPoint({rho}))));
    }
    CHECK(fit_line(x, y).slope == doctest::Approx(1.0).epsilon(0.05));
  }

  TEST_CASE("mixed norms of the constant one") {
    const auto one1 = CoeffTensor::constant(1, 1.0);
    const auto one2 = CoeffTensor::constant(2, 1.0);
    const double gamma = 0.75, q = 3.0;
    for (const auto* f : {&one1, &one2}) {
      const double n = static_cast<double>(f->dim());
      const double want = std::pow(gamma * q, -n / q);
      CHECK(rel(evaluate_norm(*f, space::Apq{2.0, q, gamma}, kQuick).value, want) < 1e-12);
      CHECK(rel(evaluate_norm(*f, space::Fpq{1.5, q, gamma}, kQuick).value, want) < 1e-12);
    }
  }

  TEST_CASE("Fpq equals Apq when p = q") {
    const auto f = random_tensor({6, 5}, 21);
    for (double p : {1.0, 2.0, 3.0}) {
      const double a = evaluate_norm(f, space::Apq{p, p, 0.8}, kQuick).value;
      const double b = evaluate_norm(f, space::Fpq{p, p, 0.8}, kQuick).value;
      CHECK(rel(a, b) < 1e-6);
    }
  }

  TEST_CASE("one-variable coincidences") {
    const auto f = random_tensor({12}, 22);
    for (double p : {1.0, 2.5}) {
      const double fpq = evaluate_norm(f, space::Fpq{p, 2.0, 1.0}, kQuick).value;
      const double tpq = evaluate_norm(f, space::Tpq{p, 2.0, 1.0}, kQuick).value;
      const double mpq = evaluate_norm(f, space::Mpq{p, 2.0, 1.0}, kQuick).value;
      CHECK(rel(tpq, fpq) < 1e-6);
      // Angle outside, radius inside: the Triebel-Lizorkin order.
      CHECK(rel(mpq, fpq) < 1e-6);
    }
  }

  TEST_CASE("sup-type norms of constants and monomials") {
    const auto c = CoeffTensor::constant(1, cplx(0, -2));
    CHECK(evaluate_norm(c, space::Hp{3.0}, kQuick).value == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(evaluate_norm(c, space::AInfInf{0.5, 1.0}, kQuick).value == doctest::Approx(2.0).epsilon(1e-13));
    // sup (1 - r) 3 r^2 is 4/9 at r = 2/3, and 3 * 4/27 = 0.444...; D^1 z^3 = 4 z^3 gives 4 * 27/256.
    const auto z3 = CoeffTensor::monomial({3});
    CHECK(evaluate_norm(z3, space::Bloch{}, kQuick).value == doctest::Approx(4.0 * 27.0 / 256.0).epsilon(1e-10));
    CHECK(evaluate_norm(z3, space::Hp{1.0}, kQuick).value == doctest::Approx(1.0).epsilon(1e-13));
    // sup (1 - r)^s M_p(z^3, r) = sup (1 - r)^{1/2} r^3 at r = 6/7.
    const double s = 0.5, r = 6.0 / 7.0;
    CHECK(evaluate_norm(z3, space::ApInfS{2.0, s}, kQuick).value ==
          doctest::Approx(std::pow(1.0 - r, s) * std::pow(r, 3)).epsilon(1e-10));
  }

  TEST_CASE("area norm of the constant one") {
    for (double alpha : {0.0, 1.0, 2.5}) {
      for (double p : {1.0, 2.0}) {
        const std::vector<double> pv{p}, av{alpha};
        const double want = std::pow(2 * kPi / ((alpha + 1) * (alpha + 2)), 1.0 / p);
        CHECK(rel(area_mixed_norm(CoeffTensor::constant(1, 1.0), pv, av, kQuick).value, want) < 1e-12);
      }
    }
    const std::vector<double> pv{2.0, 2.0}, av{1.0, 1.0};
    CHECK(rel(area_mixed_norm(CoeffTensor::constant(2, 1.0), pv, av, kQuick).value, 2 * kPi / 6.0) < 1e-12);
  }

  TEST_CASE("area norm against adaptive quadrature") {
    const auto f = random_tensor({5}, 31);
    for (auto [p, alpha] : {std::pair{3.0, 0.5}, std::pair{1.0, 0.0}, std::pair{2.0, 2.0}}) {
      const std::vector<double> pv{p}, av{alpha};
      CHECK(rel(area_mixed_norm(f, pv, av, kQuick).value, bergman_oracle(f, p, alpha)) < 1e-6);
    }
  }

  TEST_CASE("Carleson-type norm") {
    CHECK(carleson_bmoa_norm(CoeffTensor::zeros({3}), 2.0, 0.0, 1.0, kQuick).value == 0.0);
    const double one = carleson_bmoa_norm(CoeffTensor::constant(1, 1.0), 2.0, 0.0, 1.0, kQuick).value;
    CHECK(std::isfinite(one));
    CHECK(one > 0.0);
    const auto f = random_tensor({10}, 41);
    const double a = carleson_bmoa_norm(f, 2.0, 0.0, 1.0, kQuick).value;
    const double b = carleson_bmoa_norm(f.scaled(cplx(0, -3)), 2.0, 0.0, 1.0, kQuick).value;
    CHECK(rel(b, 3.0 * a) < 1e-8);
  }

  TEST_CASE("zero function and error estimates") {
    const auto z = CoeffTensor::zeros({4, 4});
    const auto res = evaluate_norm(z, space::Apq{2, 2, 1});
    CHECK(res.value == 0.0);
    const auto f = random_tensor({8}, 51);
    const auto est = evaluate_norm(f, space::Fpq{1.0, 2.0, 1.0});
    REQUIRE(est.refine_delta.has_value());
    CHECK(*est.refine_delta < 1e-8);
    CHECK_FALSE(evaluate_norm(f, space::Fpq{1.0, 2.0, 1.0}, kQuick).refine_delta.has_value());
  }

  TEST_CASE("refinement moves up while the change is above tolerance") {
    const auto f = random_tensor({8}, 52);
    NormOptions strict;
    strict.tolerance = 0.0;
    strict.max_extra_levels = 1;
    const auto res = evaluate_norm(f, space::Hp{0.5}, strict);
    CHECK(res.grid.refine == 1);
    CHECK(res.value == evaluate_norm(f, space::Hp{0.5}, {1, 16, false}).value);
    REQUIRE(res.refine_delta.has_value());
    const double next = evaluate_norm(f, space::Hp{0.5}, {2, 16, false}).value;
    CHECK(*res.refine_delta == doctest::Approx(std::abs(next - res.value) / std::max(next, res.value)));
    CHECK(evaluate_norm(f, space::Hp{0.5}).grid.refine == 0);
  }

  TEST_CASE("product inputs agree with their expansion") {
    const ProductSeries g({random_tensor({9}, 61), random_tensor({6}, 62)});
    const auto dense = g.expand();
    for (const SpaceSpec& spec : std::vector<SpaceSpec>{space::Apq{2, 2, 1}, space::Fpq{2, 2, 1},
                                                        space::Hp{2}, space::ApInfS{2, 1}}) {
      CHECK(rel(evaluate_norm(g, spec, kQuick).value, evaluate_norm(dense, spec, kQuick).value) < 1e-8);
    }
    // Off even p the torus grid meets isolated zeros of f, so agreement is only to grid accuracy.
    const NormOptions finer{1, 16, false};
    for (const SpaceSpec& spec : std::vector<SpaceSpec>{space::Apq{1.5, 2, 1}, space::Hp{1}}) {
      CHECK(rel(evaluate_norm(g, spec, finer).value, evaluate_norm(dense, spec, finer).value) < 1e-5);
    }
  }

  TEST_CASE("parameter validation") {
    const auto f = CoeffTensor::constant(1, 1.0);
    CHECK_THROWS_AS(evaluate_norm(f, space::Apq{2, 2, -1}), ParameterDomainError);
    CHECK_THROWS_AS(evaluate_norm(f, space::Hp{0}), ParameterDomainError);
  }
}
