#include "polydisc/space.hpp"

#include <cmath>
#include <sstream>

#include "polydisc/error.hpp"
#include "polydisc/series.hpp"

namespace polydisc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void exponent(double p, const char* name) {
  if (!(p > 0.0)) throw ParameterDomainError(std::string(name) + " must be positive (or inf)");
}

void finite_exponent(double q, const char* name) {
  exponent(q, name);
  if (std::isinf(q)) throw ParameterDomainError(std::string(name) + " must be finite for this family");
}

void positive(double a, const char* name) {
  if (!(a > 0.0) || std::isinf(a)) throw ParameterDomainError(std::string(name) + " must be positive");
}

void nonnegative(double a, const char* name) {
  if (!(a >= 0.0) || std::isinf(a)) throw ParameterDomainError(std::string(name) + " must be nonnegative");
}

std::string num(double x) {
  if (std::isinf(x)) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
  return s + "]";
}

}  // namespace

std::string family_name(const SpaceSpec& spec) {
  return std::visit(overloaded{
                        [](const space::Hp&) { return std::string("Hp"); },
                        [](const space::Apq&) { return std::string("Apq"); },
                        [](const space::Bpq&) { return std::string("Bpq"); },
                        [](const space::Fpq&) { return std::string("Fpq"); },
                        [](const space::Tpq&) { return std::string("Tpq"); },
                        [](const space::Mpq&) { return std::string("Mpq"); },
                        [](const space::AInfInf&) { return std::string("AInfInf"); },
                        [](const space::Bloch&) { return std::string("Bloch"); },
                        [](const space::FpInfS&) { return std::string("FpInfS"); },
                        [](const space::ApInfS&) { return std::string("ApInfS"); },
                        [](const space::HvecParen&) { return std::string("Hvec_paren"); },
                        [](const space::HvecSub&) { return std::string("Hvec_sub"); },
                        [](const space::HvecPlain&) { return std::string("Hvec_plain"); },
                        [](const space::CarlesonBMOA&) { return std::string("CarlesonBMOA"); },
                    },
                    spec);
}

std::string describe(const SpaceSpec& spec) {
  const std::string name = family_name(spec);
  return std::visit(
      overloaded{
          [&](const space::Hp& s) { return name + "(p=" + num(s.p) + ")"; },
          [&](const space::AInfInf& s) { return name + "(order=" + num(s.order) + ",weight=" + num(s.weight) + ")"; },
          [&](const space::Bloch&) { return name + "()"; },
          [&](const space::FpInfS& s) { return name + "(p=" + num(s.p) + ",s=" + num(s.s) + ")"; },
          [&](const space::ApInfS& s) { return name + "(p=" + num(s.p) + ",s=" + num(s.s) + ")"; },
          [&](const space::HvecParen& s) { return name + "(p=" + list(s.p) + ",alpha=" + list(s.alpha) + ")"; },
          [&](const space::HvecSub& s) { return name + "(p=" + list(s.p) + ",alpha=" + list(s.alpha) + ")"; },
          [&](const space::HvecPlain& s) { return name + "(p=" + list(s.p) + ")"; },
          [&](const space::CarlesonBMOA& s) {
            return name + "(q=" + num(s.q) + ",s=" + num(s.s) + ",alpha=" + num(s.alpha) + ")";
          },
          [&](const auto& s) { return name + "(p=" + num(s.p) + ",q=" + num(s.q) + ",weight=" + num(s.weight) + ")"; },
      },
      spec);
}

space::HvecParen resolved(const space::HvecParen& s, std::size_t n) {
  return {broadcast(s.p, n, "p"), broadcast(s.alpha, n, "alpha")};
}

space::HvecSub resolved(const space::HvecSub& s, std::size_t n) {
  return {broadcast(s.p, n, "p"), broadcast(s.alpha, n, "alpha")};
}

space::HvecPlain resolved(const space::HvecPlain& s, std::size_t n) { return {broadcast(s.p, n, "p")}; }

void validate(const SpaceSpec& spec, std::size_t n) {
  if (n == 0 || n > kMaxDim) throw FeasibilityError("dimension must be between 1 and 3");
  std::visit(overloaded{
                 [](const space::Hp& s) { exponent(s.p, "p"); },
                 [](const space::Apq& s) {
                   exponent(s.p, "p");
                   finite_exponent(s.q, "q");
                   positive(s.weight, "weight");
                 },
                 [](const space::Bpq& s) {
                   exponent(s.p, "p");
                   finite_exponent(s.q, "q");
                   positive(s.weight, "weight");
                 },
                 [](const space::Fpq& s) {
                   exponent(s.p, "p");
                   finite_exponent(s.q, "q");
                   positive(s.weight, "weight");
                 },
                 [](const space::Tpq& s) {
                   exponent(s.p, "p");
                   exponent(s.q, "q");
                   positive(s.weight, "weight");
                 },
                 [](const space::Mpq& s) {
                   exponent(s.p, "p");
                   exponent(s.q, "q");
                   positive(s.weight, "weight");
                 },
                 [](const space::AInfInf& s) {
                   nonnegative(s.order, "order");
                   nonnegative(s.weight, "weight");
                 },
                 [](const space::Bloch&) {},
                 [](const space::FpInfS& s) {
                   exponent(s.p, "p");
                   nonnegative(s.s, "s");
                 },
                 [](const space::ApInfS& s) {
                   exponent(s.p, "p");
                   nonnegative(s.s, "s");
                 },
                 [n](const space::HvecParen& s) {
                   if (n > 2) throw FeasibilityError("area norms are limited to n <= 2");
                   const auto r = resolved(s, n);
                   for (double p : r.p) exponent(p, "p");
                   for (double a : r.alpha) {
                     if (!(a > -1.0) || std::isinf(a)) throw ParameterDomainError("alpha must exceed -1");
                   }
                 },
                 [n](const space::HvecSub& s) {
                   const auto r = resolved(s, n);
                   for (double p : r.p) exponent(p, "p");
                   for (double a : r.alpha) nonnegative(a, "alpha");
                 },
                 [n](const space::HvecPlain& s) {
                   for (double p : resolved(s, n).p) exponent(p, "p");
                 },
                 [n](const space::CarlesonBMOA& s) {
                   if (n > 2) throw FeasibilityError("Carleson norms are limited to n <= 2");
                   finite_exponent(s.q, "q");
                   if (!(s.s > -1.0) || std::isinf(s.s)) throw ParameterDomainError("s must exceed -1");
                   positive(s.alpha, "alpha");
                 },
             },
             spec);
}

}  // namespace polydisc
