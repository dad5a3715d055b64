#pragma once

// Necessary conditions for coefficient multipliers and numerical probes of
// boundedness and embeddings.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polydisc/error.hpp"
#include "polydisc/norms.hpp"
#include "polydisc/series.hpp"
#include "polydisc/space.hpp"

namespace polydisc {

enum class Theorem { T1_1, T1_2, T2_1, T2_2, T3_1, T3_2, T3_3, T3_4, T3_5, T4_1, T4_2, T4_3, T5_1, T5_2, T5_3 };

/// "T1.1", ..., "T5.3"
std::string theorem_name(Theorem t);
Theorem parse_theorem(std::string_view name);
/// 1..5
int theorem_group(Theorem t);

/// Inputs of a condition. Works with double or an exact rational type.
template <class T>
struct ConditionParams {
  std::size_t n = 1;
  /// 1/p; zero for p = infinity.
  T inv_p{};
  /// Derivative order: one entry, or one per coordinate.
  std::vector<T> beta;
  T gamma{};
  /// Source index of F^{inf,q}_{sq-1,alpha} (group 1).
  T s{};
  /// Target index (group 1), free parameter v > -1 (group 2), target weights
  /// (group 3, one entry or one per coordinate), scalar weight (group 4).
  std::vector<T> v;
  /// q of the mixed-norm space (groups 2-5).
  T q{};
  /// Target weight vector of group 5.
  std::vector<T> tau;
  /// Indices q and alpha of the BMOA-type space F^{inf,q}_{.,alpha}: the
  /// source of group 1, the target of groups 3-5. They do not enter the
  /// condition.
  T bmoa_q{};
  T bmoa_alpha{};
};

template <class T>
struct Condition {
  Theorem theorem = Theorem::T1_1;
  ConditionParams<T> params;
  /// Broadcast derivative order.
  std::vector<T> beta;
  /// Weight exponents; a single entry on the diagonal radius for group 4.
  std::vector<T> tau;
  /// beta must strictly exceed these (componentwise).
  std::vector<T> threshold;
  bool scalar_radius = false;
  /// M_infinity instead of M_p.
  bool sup_mean = false;
  bool valid = false;
};

using ConditionSpec = Condition<double>;

namespace detail {

template <class T>
std::vector<T> spread(const std::vector<T>& v, std::size_t n, const char* what) {
  if (v.size() == n) return v;
  if (v.size() == 1) return std::vector<T>(n, v[0]);
  throw InputError(std::string(what) + " must have 1 or n entries");
}

template <class T>
void require_scalar(const std::vector<T>& v, const char* what) {
  for (const T& x : v) {
    if (x != v[0]) throw InputError(std::string(what) + " must be a single value for this theorem");
  }
}

}  // namespace detail

/// The necessary condition sup_r M_p(D^beta g, r) prod (1 - r_j)^{tau_j} < inf
/// of the given theorem.
template <class T>
Condition<T> theorem_condition(Theorem theorem, const ConditionParams<T>& in) {
  const std::size_t n = in.n;
  if (n == 0 || n > kMaxDim) throw InputError("dimension must lie in 1..3");
  if (in.beta.empty()) throw InputError("beta is required");
  if (in.inv_p < T(0)) throw ParameterDomainError("p must be positive");
  const T zero(0), one(1), two(2);
  const T dn(static_cast<long>(n));
  Condition<T> c;
  c.theorem = theorem;
  c.params = in;
  c.beta = detail::spread(in.beta, n, "beta");
  const int group = theorem_group(theorem);
  const bool p_infinite = in.inv_p == zero;
  auto need_v = [&]() -> const std::vector<T>& {
    if (in.v.empty()) throw InputError("v is required for this theorem");
    return in.v;
  };

  switch (group) {
    case 1: {
      if (!(in.gamma > zero)) throw HypothesisError("gamma must be positive");
      if (p_infinite) throw HypothesisError("p must be finite");
      const T v = need_v()[0];
      if (!(v > zero)) throw HypothesisError("the target index v must be positive");
      if (theorem == Theorem::T1_2 && v * in.inv_p > one) throw HypothesisError("T1.2 requires v <= p");
      for (std::size_t j = 0; j < n; ++j) {
        c.tau.push_back(in.gamma + c.beta[j] + one - in.s);
        c.threshold.push_back(in.s - one - in.gamma);
      }
      break;
    }
    case 2: {
      if (p_infinite) throw HypothesisError("p must be finite");
      detail::require_scalar(c.beta, "beta");
      const T v = need_v()[0];
      if (!(v > -one)) throw HypothesisError("T2 requires v > -1");
      if (theorem == Theorem::T2_2 && in.q * in.inv_p > one) throw HypothesisError("T2.2 requires q <= p");
      for (std::size_t j = 0; j < n; ++j) {
        c.tau.push_back(in.gamma + c.beta[j] + two + v);
        c.threshold.push_back(-v - two);
      }
      break;
    }
    case 3: {
      if (!(in.gamma > zero)) throw HypothesisError("gamma must be positive");
      if (theorem == Theorem::T3_5 && !p_infinite) throw HypothesisError("T3.5 requires p = infinity");
      detail::require_scalar(c.beta, "beta");
      const auto v = detail::spread(need_v(), n, "v");
      T bound = in.gamma + in.inv_p - one - v[0];
      for (std::size_t j = 0; j < n; ++j) {
        c.tau.push_back(v[j] + c.beta[0] - in.gamma - in.inv_p + one);
        bound = std::max(bound, in.gamma + in.inv_p - one - v[j]);
      }
      c.threshold.assign(n, bound);
      c.sup_mean = true;
      break;
    }
    case 4: {
      if (!(in.gamma > zero)) throw HypothesisError("gamma must be positive");
      detail::require_scalar(c.beta, "beta");
      const T v = need_v()[0];
      if (!(v > zero)) throw HypothesisError("T4 requires v > 0");
      const T b = c.beta[0];
      if (theorem == Theorem::T4_3) {
        if (!p_infinite) throw HypothesisError("T4.3 requires p = infinity");
        c.tau = {v + dn * (b + one) - in.gamma * dn};
        c.threshold = {in.gamma - v / dn - one};
      } else {
        c.tau = {v + dn * (b + one) - in.gamma * dn - in.inv_p};
        c.threshold = {in.gamma + in.inv_p / dn - v / dn - one};
      }
      c.scalar_radius = true;
      c.sup_mean = true;
      break;
    }
    default: {
      if (!(in.gamma > zero)) throw HypothesisError("gamma must be positive");
      if (theorem == Theorem::T5_3 && !p_infinite) throw HypothesisError("T5.3 requires p = infinity");
      detail::require_scalar(c.beta, "beta");
      if (in.tau.empty()) throw InputError("tau is required for this theorem");
      const auto tau = detail::spread(in.tau, n, "tau");
      T bound = in.inv_p + in.gamma / dn - tau[0] - one;
      for (std::size_t j = 0; j < n; ++j) {
        if (!(tau[j] > zero)) throw HypothesisError("T5 requires tau_j > 0");
        c.tau.push_back(tau[j] + c.beta[0] + one - in.gamma / dn - in.inv_p);
        bound = std::max(bound, in.inv_p + in.gamma / dn - tau[j] - one);
      }
      c.threshold.assign(n, bound);
      c.sup_mean = true;
      break;
    }
  }
  c.valid = true;
  for (std::size_t j = 0; j < c.threshold.size(); ++j) {
    if (!(c.beta[std::min(j, c.beta.size() - 1)] > c.threshold[j])) c.valid = false;
  }
  return c;
}

/// Growth slope above this marks divergence; below its negative marks a
/// finite supremum.
inline constexpr double kSlopeThreshold = 0.1;

struct ProbeReport {
  ConditionSpec condition;
  double condition_value = 0.0;
  double growth_slope = 0.0;
  double residual = 0.0;
  /// "finite", "diverging" or "inconclusive".
  std::string verdict;
  /// Grid radii (r = 0 first) and weighted means.
  std::vector<double> radii, values;
  std::string note = "necessary-condition only";
};

/// Weighted mean of D^beta g along the diagonal grid, with r = 0 prepended.
ProbeReport necessary_condition_value(SeriesView g, const ConditionSpec& cond, const std::vector<RadialPoint>& grid,
                                      unsigned refine = 0);

struct ProbeOptions {
  std::size_t n = 1;
  /// Kernel radii come from geometric_r_grid(depth).
  std::size_t depth = 10;
  std::vector<double> kernel_beta{1.0};
  std::size_t random_count = 8;
  std::size_t max_degree = 32;
  std::uint64_t seed = 1;
  NormOptions norm{0, 16, false};
};

struct RatioRow {
  std::string probe;
  /// Kernel radius; negative for random probes.
  double radius = -1.0;
  /// 0, or 1 for the second link of a chain.
  int stage = 0;
  double left = 0.0;
  double right = 0.0;
  double ratio = 0.0;
  std::string note;
};

struct RatioTable {
  std::vector<RatioRow> rows;
  double max_ratio = 0.0;
  /// Largest fitted slope of log(ratio) along the kernel radii, over stages.
  double growth_slope = 0.0;
  double residual = 0.0;
  bool bounded = true;
  std::uint64_t seed = 0;
};

/// Seeded random polynomials with degrees up to max_degree per axis.
std::vector<CoeffTensor> random_probes(std::size_t n, std::size_t count, std::size_t max_degree, std::uint64_t seed);

/// ||M_c f||_Y / ||f||_X over kernel and random probes.
RatioTable boundedness_probe(const MultiplierSeq& c, const SpaceSpec& X, const SpaceSpec& Y, const ProbeOptions& opts);

struct SpacePair {
  SpaceSpec source;
  SpaceSpec target;
};

/// Source and target spaces of the theorem behind a condition. Group 2 has a
/// BMOA source and is not computable.
SpacePair theorem_spaces(const ConditionSpec& cond);

enum class EmbeddingPair {
  SupMeanApq,
  SupMeanTpq,
  SupMeanBpq,
  FpqApq,
  NestedRadialParen,
  AreaPlain,
  MeanScalarParen,
  MeanPerCoordinateParen,
  MeanPlain,
  MeanWeightedSub,
  CarlesonChain,
};

std::string embedding_name(EmbeddingPair e);
EmbeddingPair parse_embedding(std::string_view name);

struct EmbeddingParams {
  double p = 2.0;
  double q = 2.0;
  /// Weight of the mixed-norm space, or s of the Carleson chain.
  double weight = 1.0;
  /// Vector exponents for the Hardy-type pairs.
  std::vector<double> pv{0.5};
  std::vector<double> alpha{0.0};
  /// Kernel weight of the Carleson-type norm.
  double carleson_alpha = 1.0;
};

/// Left functional / right norm over kernel and random probes.
RatioTable embedding_probe(EmbeddingPair pair, const EmbeddingParams& params, const ProbeOptions& opts);

/// Nested radial integral of M_1 bounded by the area norm; n <= 2 unless f is
/// a product.
double nested_radial_mean(SeriesView f, std::span<const double> p, std::span<const double> alpha,
                          const NormOptions& opts = {0, 16, false});

/// int_{U^n} |f| prod (1 - |z_j|)^{1/p_j - 2} dm_{2n}(z).
double weighted_area_integral(SeriesView f, std::span<const double> p, const NormOptions& opts = {0, 16, false});

}  // namespace polydisc
