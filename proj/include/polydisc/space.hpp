#pragma once

// Function-space families and their parameters.

#include <cstddef>
#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace polydisc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace space {

/// sup_r M_p(f, r)
struct Hp {
  double p;
};
/// (int_{I^n} M_p^q(f, R) (1 - R)^{weight q - 1} dR)^{1/q}
struct Apq {
  double p, q, weight;
};
/// Apq with a single diagonal radius.
struct Bpq {
  double p, q, weight;
};
/// Radial L^q inside, torus L^p outside.
struct Fpq {
  double p, q, weight;
};
/// Fpq with a single diagonal radius; q = infinity takes the radial sup.
struct Tpq {
  double p, q, weight;
};
/// Radii in I^n, one shared angle; q = infinity takes the radial sup.
struct Mpq {
  double p, q, weight;
};
/// sup_r M_inf(D^order f, r) (1 - r)^weight
struct AInfInf {
  double order, weight;
};
/// AInfInf with order = weight = 1.
struct Bloch {};
/// (int_{T^n} [sup_r |f(r xi)| (1 - r)^s]^p dxi)^{1/p} over diagonal radii.
struct FpInfS {
  double p, s;
};
/// sup_r M_p(f, r) (1 - r)^s
struct ApInfS {
  double p, s;
};
/// Nested area norm with weights (1 - |xi_j|)^{alpha_j}, alpha_j > -1.
struct HvecParen {
  std::vector<double> p, alpha;
};
/// sup_r of nested torus means times prod (1 - r_j)^{alpha_j}, alpha_j >= 0.
struct HvecSub {
  std::vector<double> p, alpha;
};
/// HvecSub without weights.
struct HvecPlain {
  std::vector<double> p;
};
/// sup_w int |f|^q (1 - |z|)^s (1 - |w|)^alpha / |1 - wz|^{alpha + 1} dm(z), to the power 1/q.
struct CarlesonBMOA {
  double q, s, alpha;
};

}  // namespace space

using SpaceSpec = std::variant<space::Hp, space::Apq, space::Bpq, space::Fpq, space::Tpq, space::Mpq,
                               space::AInfInf, space::Bloch, space::FpInfS, space::ApInfS, space::HvecParen,
                               space::HvecSub, space::HvecPlain, space::CarlesonBMOA>;

/// Short family tag ("Apq", "Hvec_paren", ...).
std::string family_name(const SpaceSpec& spec);

/// Family tag with parameters, stable across runs.
std::string describe(const SpaceSpec& spec);

/// Throws ParameterDomainError when a parameter lies outside the family's
/// domain, FeasibilityError when the family is not implemented in dimension n.
void validate(const SpaceSpec& spec, std::size_t n);

/// Vector exponents broadcast to n coordinates.
space::HvecParen resolved(const space::HvecParen& s, std::size_t n);
space::HvecSub resolved(const space::HvecSub& s, std::size_t n);
space::HvecPlain resolved(const space::HvecPlain& s, std::size_t n);

}  // namespace polydisc
