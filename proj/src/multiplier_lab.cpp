#include "polydisc/multiplier_lab.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "polydisc/asymptotics.hpp"
#include "polydisc/kernels.hpp"
#include "polydisc/quadrature.hpp"

namespace polydisc {

namespace {

constexpr std::array<std::string_view, 15> kTheoremNames = {"T1.1", "T1.2", "T2.1", "T2.2", "T3.1",
                                                            "T3.2", "T3.3", "T3.4", "T3.5", "T4.1",
                                                            "T4.2", "T4.3", "T5.1", "T5.2", "T5.3"};

constexpr std::array<std::string_view, 11> kEmbeddingNames = {
    "sup-mean/Apq", "sup-mean/Tpq", "sup-mean/Bpq", "Fpq/Apq", "nested-radial/Hvec_paren", "area/Hvec_plain",
    "mean-scalar/Hvec_paren", "mean-per-coordinate/Hvec_paren", "mean/Hvec_plain", "mean-weighted/Hvec_sub",
    "carleson-chain"};

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double p_of(double inv_p) { return inv_p == 0.0 ? kInf : 1.0 / inv_p; }

double uniform_value(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw InputError(std::string(what) + " is required");
  for (double x : v) {
    if (x != v[0]) throw UnsupportedError(std::string(what) + " must be uniform for a scalar BMOA-type space");
  }
  return v[0];
}

space::CarlesonBMOA bmoa_space(const ConditionParams<double>& p, double s) {
  return space::CarlesonBMOA{p.bmoa_q, s * p.bmoa_q - 1.0, p.bmoa_alpha};
}

// Slope of log(ratio) along the kernel rows of one stage.
bool stage_slope(const std::vector<RatioRow>& rows, int stage, LineFit& out) {
  std::vector<double> r, v;
  for (const auto& row : rows) {
    if (row.stage != stage || row.radius < 0.0 || !row.note.empty()) continue;
    r.push_back(row.radius);
    v.push_back(row.ratio);
  }
  if (r.size() < 6) return false;
  for (std::size_t i = r.size() - 6; i < r.size(); ++i) {
    if (!(v[i] > 0.0)) return false;
  }
  out = growth_slope(r, v, 6);
  return true;
}

void summarize(RatioTable& t) {
  t.max_ratio = 0.0;
  for (const auto& row : t.rows) {
    if (row.note.empty()) t.max_ratio = std::max(t.max_ratio, row.ratio);
  }
  t.growth_slope = -kInf;
  t.residual = 0.0;
  bool any = false;
  for (int stage = 0; stage < 2; ++stage) {
    LineFit f;
    if (stage_slope(t.rows, stage, f)) {
      any = true;
      if (f.slope > t.growth_slope) {
        t.growth_slope = f.slope;
        t.residual = f.residual;
      }
    }
  }
  if (!any) t.growth_slope = 0.0;
  t.bounded = t.growth_slope <= kSlopeThreshold;
}

using Functional = std::function<double(SeriesView)>;

struct Probe {
  std::string name;
  double radius;
  Series f;
};

std::vector<Probe> probe_family(const ProbeOptions& opts) {
  std::vector<Probe> probes;
  for (const auto& point : geometric_r_grid(opts.depth)) {
    const double R = point[0];
    const auto g = kernel_factors(RadialPoint::diagonal(opts.n, R), opts.kernel_beta);
    probes.push_back({"kernel", R, g});
  }
  std::size_t i = 0;
  for (auto& f : random_probes(opts.n, opts.random_count, opts.max_degree, opts.seed)) {
    probes.push_back({"random-" + std::to_string(i++), -1.0, std::move(f)});
  }
  return probes;
}

RatioRow make_row(const Probe& p, int stage, double left, double right) {
  RatioRow row;
  row.probe = p.name;
  row.radius = p.radius;
  row.stage = stage;
  row.left = left;
  row.right = right;
  if (right == 0.0) {
    row.note = "zero norm, skipped";
  } else {
    row.ratio = left / right;
  }
  return row;
}

RatioTable ratio_table(const std::vector<Probe>& probes, const std::vector<std::pair<Functional, Functional>>& stages,
                       std::uint64_t seed) {
  RatioTable t;
  t.seed = seed;
  for (std::size_t s = 0; s < stages.size(); ++s) {
    for (const auto& p : probes) {
      const double left = stages[s].first(p.f);
      const double right = stages[s].second(p.f);
      t.rows.push_back(make_row(p, static_cast<int>(s), left, right));
    }
  }
  summarize(t);
  return t;
}

Functional norm_of(SpaceSpec spec, NormOptions opts) {
  return [spec = std::move(spec), opts](SeriesView f) { return evaluate_norm(f, spec, opts).value; };
}

// Per-axis radial rule with the polar factor r folded into the weights.
quad::Rule polar_rule(double w, std::size_t degree, const NormOptions& opts) {
  auto rule = quad::weighted_radial(w, quad::panel_levels(degree), opts.per_panel << opts.refine);
  for (std::size_t i = 0; i < rule.size(); ++i) rule.weights[i] *= rule.nodes[i];
  return rule;
}

double mean_one(const CoeffTensor& f, std::span<const double> r, unsigned refine) {
  return integral_mean(f, 1.0, RadialPoint(std::vector<double>(r.begin(), r.end())), refine);
}

// sum_i W_i M_1(f, r_i)^{p_1} per axis, nested as in the mixed-norm radial integral.
double nested_dense(const CoeffTensor& f, std::span<const double> p, std::span<const double> w, const NormOptions& o) {
  const std::size_t n = f.dim();
  if (n > 2) throw FeasibilityError("nested radial integrals are limited to n <= 2");
  std::vector<quad::Rule> rules;
  for (std::size_t j = 0; j < n; ++j) rules.push_back(polar_rule(w[j], f.degrees()[j], o));
  if (n == 1) {
    const std::size_t N = rules[0].size();
    std::vector<double> terms(N);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < N; ++i) {
      const double r[1] = {rules[0].nodes[i]};
      terms[i] = rules[0].weights[i] * std::pow(mean_one(f, r, o.refine), p[0]);
    }
    return std::pow(kernels::blocked_sum(terms), 1.0 / p[0]);
  }
  const std::size_t N1 = rules[0].size();
  const std::size_t N2 = rules[1].size();
  std::vector<double> outer(N2);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i2 = 0; i2 < N2; ++i2) {
    double inner = 0.0;
    for (std::size_t i1 = 0; i1 < N1; ++i1) {
      const double r[2] = {rules[0].nodes[i1], rules[1].nodes[i2]};
      inner += rules[0].weights[i1] * std::pow(mean_one(f, r, o.refine), p[0]);
    }
    outer[i2] = rules[1].weights[i2] * std::pow(inner, p[1] / p[0]);
  }
  return std::pow(kernels::blocked_sum(outer), 1.0 / p[1]);
}

}  // namespace

std::string theorem_name(Theorem t) { return std::string(kTheoremNames[static_cast<std::size_t>(t)]); }

Theorem parse_theorem(std::string_view name) {
  for (std::size_t i = 0; i < kTheoremNames.size(); ++i) {
    if (kTheoremNames[i] == name) return static_cast<Theorem>(i);
  }
  throw InputError("unknown theorem tag '" + std::string(name) + "'");
}

int theorem_group(Theorem t) { return kTheoremNames[static_cast<std::size_t>(t)][1] - '0'; }

std::string embedding_name(EmbeddingPair e) { return std::string(kEmbeddingNames[static_cast<std::size_t>(e)]); }

EmbeddingPair parse_embedding(std::string_view name) {
  for (std::size_t i = 0; i < kEmbeddingNames.size(); ++i) {
    if (kEmbeddingNames[i] == name) return static_cast<EmbeddingPair>(i);
  }
  throw UnsupportedError("unknown embedding pair '" + std::string(name) + "'");
}

ProbeReport necessary_condition_value(SeriesView g, const ConditionSpec& cond, const std::vector<RadialPoint>& grid,
                                      unsigned refine) {
  if (!cond.valid) throw HypothesisError("condition refused: beta does not exceed the theorem threshold");
  const std::size_t n = cond.params.n;
  if (g.dim() != n) throw InputError("multiplier dimension does not match the condition");
  if (grid.size() < 6) throw InputError("the condition grid needs at least 6 points");
  ProbeReport rep;
  rep.condition = cond;
  rep.radii.push_back(0.0);
  double previous = 0.0;
  for (const auto& point : grid) {
    for (std::size_t j = 1; j < point.dim(); ++j) {
      if (point[j] != point[0]) throw InputError("condition grids must be diagonal");
    }
    if (!(point[0] > previous)) throw InputError("condition grid must be strictly increasing in (0, 1)");
    previous = point[0];
    rep.radii.push_back(point[0]);
  }
  double total = 0.0;
  for (double t : cond.tau) total += t;
  const double p = cond.sup_mean ? kInf : p_of(cond.params.inv_p);
  const Series d = frac_diff(g, cond.beta);
  for (double r : rep.radii) {
    const double mean = integral_mean(d, p, RadialPoint::diagonal(n, r), refine);
    rep.values.push_back(mean * std::pow(1.0 - r, total));
  }
  rep.condition_value = *std::max_element(rep.values.begin(), rep.values.end());
  if (rep.condition_value == 0.0) {
    rep.verdict = "finite";
    rep.note += "; zero function";
    return rep;
  }
  const std::span<const double> r(rep.radii.data() + 1, grid.size());
  const std::span<const double> v(rep.values.data() + 1, grid.size());
  const LineFit fit = growth_slope(r, v, 6);
  rep.growth_slope = fit.slope;
  rep.residual = fit.residual;
  if (fit.slope > kSlopeThreshold) {
    rep.verdict = "diverging";
  } else if (fit.slope < -kSlopeThreshold) {
    rep.verdict = "finite";
  } else {
    rep.verdict = "inconclusive";
  }
  return rep;
}

std::vector<CoeffTensor> random_probes(std::size_t n, std::size_t count, std::size_t max_degree, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> degree(1, std::max<std::size_t>(1, max_degree));
  std::normal_distribution<double> normal;
  std::vector<CoeffTensor> out;
  for (std::size_t i = 0; i < count; ++i) {
    Degrees d(n);
    std::size_t size = 1;
    for (auto& k : d) {
      k = degree(rng);
      size *= k + 1;
    }
    std::vector<cplx> c(size);
    for (auto& x : c) {
      const double re = normal(rng);
      x = cplx(re, normal(rng));
    }
    out.emplace_back(d, std::move(c));
  }
  return out;
}

RatioTable boundedness_probe(const MultiplierSeq& c, const SpaceSpec& X, const SpaceSpec& Y, const ProbeOptions& opts) {
  validate(X, opts.n);
  validate(Y, opts.n);
  const auto probes = probe_family(opts);
  const Functional x_norm = norm_of(X, opts.norm);
  const Functional y_norm = norm_of(Y, opts.norm);
  const Functional image = [&](SeriesView f) {
    const Series h = apply_multiplier(c, f);
    return y_norm(h);
  };
  return ratio_table(probes, {{image, x_norm}}, opts.seed);
}

SpacePair theorem_spaces(const ConditionSpec& cond) {
  const auto& p = cond.params;
  const double pp = p_of(p.inv_p);
  switch (cond.theorem) {
    case Theorem::T1_1:
      return {bmoa_space(p, p.s), space::Apq{pp, uniform_value(p.v, "v"), p.gamma}};
    case Theorem::T1_2:
      return {bmoa_space(p, p.s), space::Fpq{pp, uniform_value(p.v, "v"), p.gamma}};
    case Theorem::T2_1:
    case Theorem::T2_2:
      throw UnsupportedError("BMOA as the dual of H^1 is not computable; no probe for " + theorem_name(cond.theorem));
    case Theorem::T3_1:
      return {space::Apq{pp, p.q, p.gamma}, bmoa_space(p, uniform_value(p.v, "v"))};
    case Theorem::T3_2:
      return {space::Fpq{pp, p.q, p.gamma}, bmoa_space(p, uniform_value(p.v, "v"))};
    case Theorem::T3_3:
      return {space::FpInfS{pp, p.gamma}, bmoa_space(p, uniform_value(p.v, "v"))};
    case Theorem::T3_4:
      return {space::ApInfS{pp, p.gamma}, bmoa_space(p, uniform_value(p.v, "v"))};
    case Theorem::T3_5:
      return {space::Apq{kInf, p.q, p.gamma}, bmoa_space(p, uniform_value(p.v, "v"))};
    case Theorem::T4_1:
      return {space::Mpq{pp, p.q, p.gamma}, bmoa_space(p, uniform_value(p.v, "v"))};
    case Theorem::T4_2:
      return {space::Mpq{pp, kInf, p.gamma}, bmoa_space(p, uniform_value(p.v, "v"))};
    case Theorem::T4_3:
      return {space::Mpq{kInf, p.q, p.gamma}, bmoa_space(p, uniform_value(p.v, "v"))};
    case Theorem::T5_1:
      return {space::Tpq{pp, p.q, p.gamma}, bmoa_space(p, uniform_value(p.tau, "tau"))};
    case Theorem::T5_2:
      return {space::Tpq{pp, kInf, p.gamma}, bmoa_space(p, uniform_value(p.tau, "tau"))};
    case Theorem::T5_3:
      return {space::Tpq{kInf, p.q, p.gamma}, bmoa_space(p, uniform_value(p.tau, "tau"))};
  }
  throw UnsupportedError("unknown theorem");
}

double nested_radial_mean(SeriesView f, std::span<const double> p_in, std::span<const double> alpha_in,
                          const NormOptions& opts) {
  const std::size_t n = f.dim();
  const auto p = broadcast(p_in, n, "p");
  const auto alpha = broadcast(alpha_in, n, "alpha");
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (!(p[j] > 0.0 && p[j] <= 1.0)) throw ParameterDomainError("nested radial integrals need 0 < p_j <= 1");
    if (!(alpha[j] > -1.0)) throw ParameterDomainError("alpha must exceed -1");
    w[j] = alpha[j] + 2.0 - p[j];
  }
  if (f.is_zero()) return 0.0;
  if (!f.is_product()) return nested_dense(f.dense(), p, w, opts);
  double v = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double pj[1] = {p[j]};
    const double wj[1] = {w[j]};
    v *= nested_dense(f.product().factor(j), pj, wj, opts);
  }
  return v;
}

double weighted_area_integral(SeriesView f, std::span<const double> p_in, const NormOptions& opts) {
  const std::size_t n = f.dim();
  const auto p = broadcast(p_in, n, "p");
  std::vector<double> w(n), ones(n, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (!(p[j] > 0.0 && p[j] < 1.0)) throw ParameterDomainError("the weighted area integral needs 0 < p_j < 1");
    w[j] = 1.0 / p[j] - 1.0;
  }
  if (f.is_zero()) return 0.0;
  const double scale = std::pow(kTwoPi, static_cast<double>(n));
  if (!f.is_product()) return scale * nested_dense(f.dense(), ones, w, opts);
  double v = scale;
  for (std::size_t j = 0; j < n; ++j) {
    const double wj[1] = {w[j]};
    v *= nested_dense(f.product().factor(j), std::span<const double>(ones.data(), 1), wj, opts);
  }
  return v;
}

RatioTable embedding_probe(EmbeddingPair pair, const EmbeddingParams& ep, const ProbeOptions& opts) {
  const std::size_t n = opts.n;
  const NormOptions no = opts.norm;
  const auto pv = broadcast(ep.pv, n, "p");
  const auto av = broadcast(ep.alpha, n, "alpha");
  auto sup_mean = [no](double p, std::vector<double> w, bool diagonal) -> Functional {
    return [=](SeriesView f) { return weighted_sup_mean(f, p, w, diagonal, no).value; };
  };
  std::vector<std::pair<Functional, Functional>> stages;
  switch (pair) {
    case EmbeddingPair::SupMeanApq:
      stages.push_back({sup_mean(ep.p, {ep.weight}, false), norm_of(space::Apq{ep.p, ep.q, ep.weight}, no)});
      break;
    case EmbeddingPair::SupMeanTpq:
      if (ep.p > ep.q) throw ParameterDomainError("this embedding needs p <= q");
      stages.push_back({sup_mean(ep.p, {ep.weight}, true), norm_of(space::Tpq{ep.p, ep.q, ep.weight}, no)});
      break;
    case EmbeddingPair::SupMeanBpq:
      stages.push_back({sup_mean(ep.p, {ep.weight}, true), norm_of(space::Bpq{ep.p, ep.q, ep.weight}, no)});
      break;
    case EmbeddingPair::FpqApq:
      if (ep.p > ep.q) throw ParameterDomainError("this embedding needs p <= q");
      stages.push_back({norm_of(space::Apq{ep.p, ep.q, ep.weight}, no), norm_of(space::Fpq{ep.p, ep.q, ep.weight}, no)});
      break;
    case EmbeddingPair::NestedRadialParen:
      stages.push_back({[=](SeriesView f) { return nested_radial_mean(f, pv, av, no); },
                        norm_of(space::HvecParen{pv, av}, no)});
      break;
    case EmbeddingPair::AreaPlain:
      stages.push_back({[=](SeriesView f) { return weighted_area_integral(f, pv, no); },
                        norm_of(space::HvecPlain{pv}, no)});
      break;
    case EmbeddingPair::MeanScalarParen:
    case EmbeddingPair::MeanPerCoordinateParen: {
      std::vector<double> tau(n);
      double total = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (!(pv[j] > 0.0 && pv[j] <= 1.0)) throw ParameterDomainError("this embedding needs 0 < p_j <= 1");
        if (!(av[j] > pv[j] - 2.0)) throw ParameterDomainError("this embedding needs alpha_j > p_j - 2");
        tau[j] = (av[j] - pv[j] + 2.0) / pv[j];
        total += tau[j];
      }
      const bool scalar = pair == EmbeddingPair::MeanScalarParen;
      stages.push_back({sup_mean(1.0, scalar ? std::vector<double>{total} : tau, scalar),
                        norm_of(space::HvecParen{pv, av}, no)});
      break;
    }
    case EmbeddingPair::MeanPlain:
    case EmbeddingPair::MeanWeightedSub: {
      const bool weighted = pair == EmbeddingPair::MeanWeightedSub;
      std::vector<double> w(n);
      for (std::size_t j = 0; j < n; ++j) {
        if (!(pv[j] > 0.0 && pv[j] < 1.0)) throw ParameterDomainError("this embedding needs 0 < p_j < 1");
        if (weighted && !(av[j] > 0.0)) throw ParameterDomainError("this embedding needs alpha_j > 0");
        w[j] = 1.0 / pv[j] - 1.0 + (weighted ? av[j] : 0.0);
      }
      const SpaceSpec right = weighted ? SpaceSpec(space::HvecSub{pv, av}) : SpaceSpec(space::HvecPlain{pv});
      stages.push_back({sup_mean(1.0, w, false), norm_of(right, no)});
      break;
    }
    case EmbeddingPair::CarlesonChain: {
      const double s = ep.weight;
      if (!(s > 0.0)) throw ParameterDomainError("the chain needs s > 0");
      const Functional carleson = norm_of(space::CarlesonBMOA{ep.q, s * ep.q - 1.0, ep.carleson_alpha}, no);
      stages.push_back({carleson, norm_of(space::Apq{kInf, ep.q, s}, no)});
      stages.push_back({norm_of(space::AInfInf{0.0, s}, no), carleson});
      break;
    }
  }
  return ratio_table(probe_family(opts), stages, opts.seed);
}

}  // namespace polydisc
