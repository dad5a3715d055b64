#include <doctest.h>

#include <boost/rational.hpp>

#include <cmath>

#include "polydisc/asymptotics.hpp"
#include "polydisc/error.hpp"
#include "polydisc/multiplier_lab.hpp"

using namespace polydisc;
using Q = boost::rational<long long>;

namespace {

ConditionParams<double> t11_params() {
  ConditionParams<double> p;
  p.n = 1;
  p.inv_p = 0.5;
  p.beta = {1.0};
  p.gamma = 1.0;
  p.s = 0.5;
  p.v = {2.0};
  p.bmoa_q = 2.0;
  p.bmoa_alpha = 1.0;
  return p;
}

ProductSeries power_g(double m, std::size_t degree) {
  const CoeffTensor ones({degree}, std::vector<cplx>(degree + 1, 1.0));
  return ProductSeries({apply_multiplier(MultiplierSeq::power_growth({m}), ones)});
}

}  // namespace

TEST_SUITE("multiplier_lab") {
  TEST_CASE("theorem names") {
    CHECK(theorem_name(Theorem::T3_4) == "T3.4");
    CHECK(parse_theorem("T5.2") == Theorem::T5_2);
    CHECK(theorem_group(Theorem::T4_3) == 4);
    CHECK_THROWS_AS(parse_theorem("T6.1"), InputError);
  }

  TEST_CASE("conditions in exact arithmetic") {
    ConditionParams<Q> a;
    a.n = 1;
    a.inv_p = Q(1, 2);
    a.beta = {Q(1)};
    a.gamma = Q(1);
    a.s = Q(1, 2);
    a.v = {Q(2)};
    const auto c1 = theorem_condition(Theorem::T1_1, a);
    CHECK(c1.tau == std::vector<Q>{Q(5, 2)});
    CHECK(c1.threshold == std::vector<Q>{Q(-3, 2)});
    CHECK(c1.valid);

    ConditionParams<Q> b;
    b.n = 2;
    b.inv_p = Q(1);
    b.beta = {Q(2)};
    b.gamma = Q(1);
    b.v = {Q(1)};
    const auto c4 = theorem_condition(Theorem::T4_1, b);
    CHECK(c4.tau == std::vector<Q>{Q(4)});
    CHECK(c4.threshold == std::vector<Q>{Q(0)});
    CHECK(c4.scalar_radius);
    CHECK(c4.valid);

    ConditionParams<Q> c;
    c.n = 2;
    c.inv_p = Q(0);
    c.beta = {Q(2)};
    c.gamma = Q(1);
    c.v = {Q(1)};
    const auto c3 = theorem_condition(Theorem::T3_1, c);
    CHECK(c3.tau == std::vector<Q>{Q(3), Q(3)});
    CHECK(c3.threshold == std::vector<Q>{Q(-1), Q(-1)});
    CHECK(c3.valid);
  }

  TEST_CASE("hypothesis violations") {
    auto p = t11_params();
    p.v = {3.0};
    CHECK_THROWS_AS(theorem_condition(Theorem::T1_2, p), HypothesisError);
    CHECK_NOTHROW(theorem_condition(Theorem::T1_1, p));
    p.inv_p = 0.5;
    CHECK_THROWS_AS(theorem_condition(Theorem::T3_5, p), HypothesisError);
    p.tau = {-1.0};
    CHECK_THROWS_AS(theorem_condition(Theorem::T5_1, p), HypothesisError);
    p.beta = {-3.0};
    CHECK_FALSE(theorem_condition(Theorem::T1_1, p).valid);
  }

  TEST_CASE("the constant one satisfies every condition") {
    const auto cond = theorem_condition(Theorem::T1_1, t11_params());
    const auto rep = necessary_condition_value(CoeffTensor::constant(1, 1.0), cond, geometric_r_grid(10));
    CHECK(rep.condition_value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.verdict == "finite");
    CHECK(rep.note == "necessary-condition only");
  }

  TEST_CASE("fast coefficient growth refutes the condition") {
    const auto cond = theorem_condition(Theorem::T1_1, t11_params());
    const auto grid = geometric_r_grid(10);
    const auto K = static_cast<std::size_t>(std::ceil(50.0 / (1.0 - grid.back()[0])));
    const auto rep = necessary_condition_value(power_g(10.0, K), cond, grid);
    CHECK(rep.verdict == "diverging");
    // M_2 of D^1 g grows with exponent m + beta + 1/2 = 11.5; the weight takes 2.5.
    CHECK(rep.growth_slope == doctest::Approx(9.0).epsilon(0.05));
  }

  TEST_CASE("a fixed kernel is finite") {
    const auto cond = theorem_condition(Theorem::T1_1, t11_params());
    const std::vector<double> beta{1.0};
    const auto g = kernel_factors(RadialPoint({0.9}), beta);
    CHECK(necessary_condition_value(g, cond, geometric_r_grid(10)).verdict == "finite");
  }

  TEST_CASE("identity and zero multipliers") {
    ProbeOptions opts;
    opts.depth = 8;
    opts.random_count = 4;
    const auto id = boundedness_probe(MultiplierSeq::constant(1.0), space::Hp{2}, space::Hp{2}, opts);
    for (const auto& row : id.rows) CHECK(row.ratio == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(id.bounded);
    const auto zero = boundedness_probe(MultiplierSeq::constant(0.0), space::Hp{2}, space::Hp{2}, opts);
    for (const auto& row : zero.rows) CHECK(row.ratio == 0.0);
  }

  TEST_CASE("derivative multiplier on H^2 kernels") {
    ProbeOptions opts;
    opts.depth = 10;
    opts.random_count = 2;
    const auto t = boundedness_probe(MultiplierSeq::gamma_ratio({1.5}), space::Hp{2}, space::Hp{2}, opts);
    CHECK(t.growth_slope == doctest::Approx(1.5).epsilon(0.1 / 1.5));
    CHECK_FALSE(t.bounded);
  }

  TEST_CASE("random probes are seeded") {
    const auto a = random_probes(2, 3, 10, 42);
    const auto b = random_probes(2, 3, 10, 42);
    const auto c = random_probes(2, 3, 10, 43);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(a[i].degrees() == b[i].degrees());
      CHECK(std::equal(a[i].coeffs().begin(), a[i].coeffs().end(), b[i].coeffs().begin()));
      for (auto k : a[i].degrees()) CHECK((k >= 1 && k <= 10));
    }
    CHECK_FALSE(std::equal(a[0].coeffs().begin(), a[0].coeffs().end(), c[0].coeffs().begin(), c[0].coeffs().end()));
  }

  TEST_CASE("Fpq into Apq at p = q") {
    ProbeOptions opts;
    opts.depth = 7;
    opts.random_count = 4;
    EmbeddingParams ep;
    ep.p = 2;
    ep.q = 2;
    ep.weight = 1;
    const auto t = embedding_probe(EmbeddingPair::FpqApq, ep, opts);
    for (const auto& row : t.rows) CHECK(row.ratio == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("sup-mean into Apq stays bounded") {
    ProbeOptions opts;
    opts.depth = 9;
    opts.random_count = 3;
    EmbeddingParams ep;
    const auto t = embedding_probe(EmbeddingPair::SupMeanApq, ep, opts);
    CHECK(t.bounded);
    // Both sides of a constant are explicit: sup (1 - r)^gamma = 1 and (gamma q)^{-1/q}.
    const auto one = CoeffTensor::constant(1, 1.0);
    const std::vector<double> w{ep.weight};
    const double left = weighted_sup_mean(one, ep.p, w, false, {0, 16, false}).value;
    const double right = evaluate_norm(one, space::Apq{ep.p, ep.q, ep.weight}, {0, 16, false}).value;
    CHECK(left / right == doctest::Approx(std::pow(ep.weight * ep.q, 1.0 / ep.q)).epsilon(1e-12));
  }

  TEST_CASE("theorem spaces") {
    const auto cond = theorem_condition(Theorem::T1_1, t11_params());
    const auto sp = theorem_spaces(cond);
    CHECK(family_name(sp.source) == "CarlesonBMOA");
    CHECK(family_name(sp.target) == "Apq");
    auto p = t11_params();
    p.v = {0.0};
    CHECK_THROWS_AS(theorem_spaces(theorem_condition(Theorem::T2_1, p)), UnsupportedError);
  }
}
