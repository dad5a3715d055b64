#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "polydisc/asymptotics.hpp"
#include "polydisc/error.hpp"
#include "polydisc/io.hpp"
#include "polydisc/multiplier_lab.hpp"
#include "polydisc/norms.hpp"
#include "polydisc/version.hpp"

namespace polydisc::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kCsvHelp =
    "Reports (CSV: '# key: value' metadata lines, then a header row):\n"
    "  norm         family,value,refine_delta,angular,radial_nodes,sup_depth,sup_polished\n"
    "  kernel-fit   R,norm,log_ratio,fitted,predicted\n"
    "  mult-check   r,value   (with --probe, a second table: probe,radius,stage,left,right,ratio,note)\n"
    "  embed-probe  probe,radius,stage,left,right,ratio,note\n"
    "  gen          CoeffTensor JSON\n"
    "JSON reports hold the same metadata and rows.\n"
    "Exit status: 0 ok, 1 error, 2 diverging mult-check verdict.\n";

struct Options {
  std::string space;
  std::vector<double> p, alpha, v, beta, tau, R;
  std::optional<double> q, gamma, s, bmoa_q, bmoa_alpha, power;
  std::string theorem, in, out, format = "csv", mode = "diagonal", pair, family;
  std::optional<std::size_t> depth, n, degree;
  std::size_t axis = 0, random = 8;
  double fixed = 0.5;
  unsigned refine = 0;
  std::uint64_t seed = 1;
  bool probe = false;
  bool no_error_estimate = false;
};

Json num(double x) {
  if (std::isfinite(x)) return x;
  return io::number(x);
}

Json nums(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::string render(const Json& j) {
  if (j.is_number_float()) return io::number(j.get<double>());
  if (j.is_string()) return j.get<std::string>();
  if (j.is_array()) {
    std::string s;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) s += ' ';
      s += render(j[i]);
    }
    return s;
  }
  return j.dump();
}

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

struct Report {
  Json meta = Json::object();
  std::vector<Table> tables;
};

std::string csv_cell(const Json& j) {
  std::string s = render(j);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void flatten(const Json& j, const std::string& prefix, std::ostream& os) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      flatten(*it, key, os);
    } else {
      os << "# " << key << ": " << render(*it) << "\n";
    }
  }
}

std::string format_report(const Report& r, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    Json j = r.meta;
    for (const auto& t : r.tables) {
      Json rows = Json::array();
      for (const auto& row : t.rows) {
        Json o = Json::object();
        for (std::size_t c = 0; c < t.columns.size(); ++c) o[t.columns[c]] = row[c];
        rows.push_back(o);
      }
      j[t.name] = rows;
    }
    os << j.dump(2) << "\n";
    return os.str();
  }
  flatten(r.meta, "", os);
  for (std::size_t i = 0; i < r.tables.size(); ++i) {
    const auto& t = r.tables[i];
    if (r.tables.size() > 1) os << "# table: " << t.name << "\n";
    for (std::size_t c = 0; c < t.columns.size(); ++c) os << (c ? "," : "") << t.columns[c];
    os << "\n";
    for (const auto& row : t.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << csv_cell(row[c]);
      os << "\n";
    }
  }
  return os.str();
}

double scalar(const std::vector<double>& v, double fallback, const char* what) {
  if (v.empty()) return fallback;
  if (v.size() != 1) throw InputError(std::string("--") + what + " takes a single value for this family");
  return v[0];
}

SpaceSpec build_space(const Options& o) {
  const std::string& f = o.space;
  const double p = scalar(o.p, o.s && f == "Hp" ? *o.s : 2.0, "p");
  const double q = o.q.value_or(2.0);
  const double gamma = o.gamma ? *o.gamma : scalar(o.alpha, 1.0, "alpha");
  const std::vector<double> pv = o.p.empty() ? std::vector<double>{2.0} : o.p;
  if (f == "Hp") return space::Hp{p};
  if (f == "Apq") return space::Apq{p, q, gamma};
  if (f == "Bpq") return space::Bpq{p, q, gamma};
  if (f == "Fpq") return space::Fpq{p, q, gamma};
  if (f == "Tpq") return space::Tpq{p, q, gamma};
  if (f == "Mpq") return space::Mpq{p, q, gamma};
  if (f == "AInfInf") return space::AInfInf{scalar(o.alpha, 0.0, "alpha"), o.s.value_or(1.0)};
  if (f == "Bloch") return space::Bloch{};
  if (f == "ApInfS") return space::ApInfS{p, o.s.value_or(0.0)};
  if (f == "FpInfS") return space::FpInfS{p, o.s.value_or(0.0)};
  if (f == "Hvec_paren") return space::HvecParen{pv, o.alpha.empty() ? std::vector<double>{0.0} : o.alpha};
  if (f == "Hvec_sub") return space::HvecSub{pv, o.alpha.empty() ? std::vector<double>{0.0} : o.alpha};
  if (f == "Hvec_plain") return space::HvecPlain{pv};
  if (f == "CarlesonBMOA") return space::CarlesonBMOA{q, o.s.value_or(0.0), scalar(o.alpha, 1.0, "alpha")};
  throw InputError("--space: unknown family '" + f + "'");
}

Json header(const std::string& command) {
  Json j = Json::object();
  j["tool"] = "polydisc";
  j["version"] = kVersion;
  j["command"] = command;
  return j;
}

Json grid_json(const GridMeta& g) {
  Json j = Json::object();
  Json a = Json::array();
  for (auto m : g.angular) a.push_back(m);
  j["angular"] = a;
  j["radial_nodes"] = g.radial_nodes;
  j["sup_depth"] = g.sup_depth;
  j["refine"] = g.refine;
  j["sup_polished"] = g.sup_polished;
  return j;
}

void emit(const Report& r, const Options& o, std::ostream& out, const std::string& summary) {
  const std::string text = format_report(r, o.format);
  if (o.out.empty()) {
    out << text;
  } else {
    io::write_text(o.out, text);
    out << summary << "\n";
  }
}

int cmd_norm(const Options& o, std::ostream& out) {
  if (o.in.empty()) throw InputError("--in is required for norm");
  const SpaceSpec spec = build_space(o);
  const CoeffTensor f = io::read_tensor(o.in);
  validate(spec, f.dim());
  const NormResult res = evaluate_norm(f, spec, NormOptions{o.refine, 16, !o.no_error_estimate});
  Report r;
  r.meta = header("norm");
  r.meta["params"] = {{"space", describe(spec)}, {"in", o.in}, {"n", f.dim()}, {"refine", o.refine},
                      {"error_estimate", !o.no_error_estimate}};
  r.meta["grid"] = grid_json(res.grid);
  Table t{"result", {"family", "value", "refine_delta", "angular", "radial_nodes", "sup_depth", "sup_polished"}, {}};
  Json angular = Json::array();
  for (auto m : res.grid.angular) angular.push_back(m);
  t.rows.push_back({family_name(spec), num(res.value), res.refine_delta ? num(*res.refine_delta) : Json("n/a"), angular,
                    res.grid.radial_nodes, res.grid.sup_depth, res.grid.sup_polished});
  r.tables.push_back(t);
  emit(r, o, out, describe(spec) + " = " + io::number(res.value));
  return kOk;
}

int cmd_kernel_fit(const Options& o, std::ostream& out) {
  const SpaceSpec spec = build_space(o);
  std::vector<double> beta = o.beta.empty() ? std::vector<double>{1.0} : o.beta;
  const std::size_t n = o.n.value_or(beta.size());
  beta = broadcast(beta, n, "beta");
  FitOptions fo;
  if (o.mode == "per-coordinate") {
    fo.mode = GridMode::PerCoordinate;
  } else if (o.mode != "diagonal") {
    throw InputError("--mode must be diagonal or per-coordinate");
  }
  fo.axis = o.axis;
  fo.fixed = o.fixed;
  fo.norm.refine = o.refine;
  const std::size_t depth = o.depth.value_or(10);
  const SlopeFit fit = norm_growth_fit(spec, beta, geometric_r_grid(depth), fo);

  Report r;
  r.meta = header("kernel-fit");
  r.meta["params"] = {{"space", describe(spec)}, {"n", n},          {"beta", nums(beta)}, {"depth", depth},
                      {"mode", o.mode},          {"axis", o.axis},  {"fixed", num(o.fixed)}, {"refine", o.refine}};
  Json window = Json::array();
  for (auto i : fit.window) window.push_back(i);
  r.meta["fit"] = {{"fitted", num(fit.fitted)},
                   {"per_coordinate", num(fit.per_coordinate)},
                   {"residual", num(fit.residual)},
                   {"window", window},
                   {"target", num(fit.target)},
                   {"tau", nums(fit.predicted.tau)},
                   {"threshold", nums(fit.predicted.threshold)},
                   {"valid", fit.predicted.valid},
                   {"multiplicity", fit.predicted.multiplicity},
                   {"status", fit.status}};
  if (!fit.grids.empty()) r.meta["grid"] = grid_json(fit.grids.back());
  Table t{"rows", {"R", "norm", "log_ratio", "fitted", "predicted"}, {}};
  for (std::size_t i = 0; i < fit.radii.size(); ++i) {
    t.rows.push_back({num(fit.radii[i]), num(fit.norms[i]), num(fit.log_ratio[i]), num(fit.fitted), num(fit.target)});
  }
  r.tables.push_back(t);
  emit(r, o, out, "fitted " + io::number(fit.fitted) + " predicted " + io::number(fit.target) + " (" + fit.status + ")");
  return kOk;
}

struct Multiplier {
  Series g;
  MultiplierSeq c;
  std::string description;
};

// g and the same coefficients as a multiplier sequence.
Multiplier build_multiplier(const Options& o, std::size_t n, std::size_t degree) {
  if (!o.in.empty()) {
    CoeffTensor g = io::read_tensor(o.in);
    return {g, MultiplierSeq::tabulated(g), "file:" + o.in};
  }
  const std::string fam = o.family.empty() ? "constant" : o.family;
  if (fam == "constant") {
    return {CoeffTensor::constant(n, 1.0), MultiplierSeq::constant(1.0), "constant"};
  }
  if (fam == "power") {
    const double m = o.power.value_or(1.0);
    const auto c = MultiplierSeq::power_growth({m});
    std::vector<CoeffTensor> factors;
    std::vector<cplx> ones(degree + 1, 1.0);
    const CoeffTensor base({degree}, ones);
    for (std::size_t j = 0; j < n; ++j) factors.push_back(apply_multiplier(MultiplierSeq::power_growth({m}), base));
    return {ProductSeries(std::move(factors)), c, "power(" + io::number(m) + ")"};
  }
  throw InputError("--family must be constant or power for mult-check (or give --in)");
}

ConditionSpec build_condition(const Options& o, std::size_t n) {
  const Theorem th = parse_theorem(o.theorem);
  ConditionParams<double> cp;
  cp.n = n;
  const double p = scalar(o.p, 2.0, "p");
  cp.inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  cp.beta = o.beta.empty() ? std::vector<double>{1.0} : o.beta;
  cp.gamma = o.gamma.value_or(1.0);
  cp.s = o.s.value_or(0.5);
  cp.v = o.v.empty() ? std::vector<double>{theorem_group(th) == 2 ? 0.0 : 1.0} : o.v;
  cp.q = o.q.value_or(2.0);
  cp.tau = o.tau.empty() ? std::vector<double>{1.0} : o.tau;
  cp.bmoa_q = o.bmoa_q.value_or(2.0);
  cp.bmoa_alpha = o.bmoa_alpha.value_or(1.0);
  return theorem_condition(th, cp);
}

Json condition_json(const ConditionSpec& c) {
  const auto& p = c.params;
  return {{"theorem", theorem_name(c.theorem)},
          {"n", p.n},
          {"p", num(p.inv_p == 0.0 ? kInf : 1.0 / p.inv_p)},
          {"beta", nums(c.beta)},
          {"gamma", num(p.gamma)},
          {"s", num(p.s)},
          {"v", nums(p.v)},
          {"q", num(p.q)},
          {"tau_target", nums(p.tau)},
          {"bmoa_q", num(p.bmoa_q)},
          {"bmoa_alpha", num(p.bmoa_alpha)},
          {"tau", nums(c.tau)},
          {"threshold", nums(c.threshold)},
          {"scalar_radius", c.scalar_radius},
          {"mean", c.sup_mean ? "M_inf" : "M_p"},
          {"valid", c.valid}};
}

Table ratio_rows(const RatioTable& t) {
  Table out{"probes", {"probe", "radius", "stage", "left", "right", "ratio", "note"}, {}};
  for (const auto& row : t.rows) {
    out.rows.push_back({row.probe, num(row.radius), row.stage, num(row.left), num(row.right), num(row.ratio), row.note});
  }
  return out;
}

Json ratio_summary(const RatioTable& t) {
  return {{"max_ratio", num(t.max_ratio)},
          {"growth_slope", num(t.growth_slope)},
          {"residual", num(t.residual)},
          {"bounded", t.bounded},
          {"seed", t.seed}};
}

int cmd_mult_check(const Options& o, std::ostream& out) {
  if (o.theorem.empty()) throw InputError("--theorem is required for mult-check");
  const std::size_t depth = o.depth.value_or(12);
  const auto grid = geometric_r_grid(depth);
  std::size_t n = o.n.value_or(1);
  if (!o.in.empty()) n = io::read_tensor(o.in).dim();
  const ConditionSpec cond = build_condition(o, n);
  const double r_max = grid.back()[0];
  const auto degree = o.degree.value_or(static_cast<std::size_t>(std::ceil(kTruncationConstant / (1.0 - r_max))));
  const Multiplier m = build_multiplier(o, n, degree);
  const ProbeReport rep = necessary_condition_value(m.g, cond, grid, o.refine);

  Report r;
  r.meta = header("mult-check");
  r.meta["params"] = {{"multiplier", m.description}, {"depth", depth}, {"degree", degree}, {"refine", o.refine},
                      {"probe", o.probe}, {"seed", o.seed}};
  r.meta["condition"] = condition_json(cond);
  r.meta["result"] = {{"condition_value", num(rep.condition_value)},
                      {"growth_slope", num(rep.growth_slope)},
                      {"residual", num(rep.residual)},
                      {"slope_threshold", num(kSlopeThreshold)},
                      {"verdict", rep.verdict},
                      {"note", rep.note}};
  Table t{"condition", {"r", "value"}, {}};
  for (std::size_t i = 0; i < rep.radii.size(); ++i) t.rows.push_back({num(rep.radii[i]), num(rep.values[i])});
  r.tables.push_back(t);
  if (o.probe) {
    const SpacePair sp = theorem_spaces(cond);
    ProbeOptions po;
    po.n = n;
    po.depth = o.depth ? std::min<std::size_t>(*o.depth, 10) : 8;
    po.kernel_beta = cond.beta;
    po.seed = o.seed;
    po.random_count = o.random;
    const RatioTable probe = boundedness_probe(m.c, sp.source, sp.target, po);
    r.meta["probe"] = ratio_summary(probe);
    r.meta["probe"]["source"] = describe(sp.source);
    r.meta["probe"]["target"] = describe(sp.target);
    r.tables.push_back(ratio_rows(probe));
  }
  emit(r, o, out, "verdict " + rep.verdict + " (slope " + io::number(rep.growth_slope) + ")");
  return rep.verdict == "diverging" ? kDiverging : kOk;
}

int cmd_embed_probe(const Options& o, std::ostream& out) {
  if (o.pair.empty()) throw InputError("--pair is required for embed-probe");
  const EmbeddingPair pair = parse_embedding(o.pair);
  EmbeddingParams ep;
  const bool hardy = pair == EmbeddingPair::NestedRadialParen || pair == EmbeddingPair::AreaPlain ||
                     pair == EmbeddingPair::MeanScalarParen || pair == EmbeddingPair::MeanPerCoordinateParen ||
                     pair == EmbeddingPair::MeanPlain || pair == EmbeddingPair::MeanWeightedSub;
  if (hardy) {
    ep.pv = o.p.empty() ? std::vector<double>{0.5} : o.p;
    ep.alpha = o.alpha.empty() ? std::vector<double>{pair == EmbeddingPair::MeanWeightedSub ? 0.5 : 0.0} : o.alpha;
  } else {
    ep.p = scalar(o.p, 2.0, "p");
  }
  ep.q = o.q.value_or(2.0);
  ep.weight = pair == EmbeddingPair::CarlesonChain ? o.s.value_or(0.5) : o.gamma.value_or(1.0);
  ep.carleson_alpha = o.bmoa_alpha.value_or(scalar(pair == EmbeddingPair::CarlesonChain ? o.alpha : std::vector<double>{}, 1.0, "alpha"));
  ProbeOptions po;
  po.n = o.n.value_or(1);
  po.depth = o.depth.value_or(10);
  po.kernel_beta = o.beta.empty() ? std::vector<double>{1.0} : o.beta;
  po.random_count = o.random;
  po.max_degree = o.degree.value_or(32);
  po.seed = o.seed;
  po.norm.refine = o.refine;
  const RatioTable t = embedding_probe(pair, ep, po);

  Report r;
  r.meta = header("embed-probe");
  r.meta["params"] = {{"pair", embedding_name(pair)},
                      {"n", po.n},
                      {"p", hardy ? nums(ep.pv) : num(ep.p)},
                      {"alpha", hardy ? nums(ep.alpha) : num(ep.carleson_alpha)},
                      {"q", num(ep.q)},
                      {"weight", num(ep.weight)},
                      {"kernel_beta", nums(po.kernel_beta)},
                      {"depth", po.depth},
                      {"random", po.random_count},
                      {"max_degree", po.max_degree},
                      {"seed", po.seed}};
  r.meta["result"] = ratio_summary(t);
  r.tables.push_back(ratio_rows(t));
  emit(r, o, out, std::string(t.bounded ? "bounded" : "growing") + " (slope " + io::number(t.growth_slope) + ")");
  return kOk;
}

int cmd_gen(const Options& o, std::ostream& out) {
  const std::string fam = o.family.empty() ? "kernel" : o.family;
  CoeffTensor f = CoeffTensor::constant(1, 1.0);
  if (fam == "kernel") {
    const std::vector<double> R = o.R.empty() ? std::vector<double>{0.9} : o.R;
    const std::size_t n = o.n.value_or(R.size());
    const auto radii = broadcast(R, n, "R");
    const std::vector<double> beta = o.beta.empty() ? std::vector<double>{1.0} : o.beta;
    if (o.degree) {
      f = kernel_coeffs(RadialPoint(radii), beta, Degrees(n, *o.degree));
    } else {
      f = kernel_coeffs(RadialPoint(radii), beta);
    }
  } else if (fam == "random") {
    f = random_probes(o.n.value_or(1), 1, o.degree.value_or(32), o.seed)[0];
  } else if (fam == "power") {
    const std::size_t n = o.n.value_or(1);
    const std::size_t K = o.degree.value_or(32);
    const Degrees d(n, K);
    std::size_t size = 1;
    for (auto k : d) size *= k + 1;
    f = apply_multiplier(MultiplierSeq::power_growth({o.power.value_or(1.0)}),
                         CoeffTensor(d, std::vector<cplx>(size, 1.0)));
  } else if (fam == "constant") {
    f = CoeffTensor::constant(o.n.value_or(1), 1.0);
  } else {
    throw InputError("--family must be kernel, random, power or constant");
  }
  const std::string text = io::format_tensor(f);
  if (o.out.empty()) {
    out << text;
  } else {
    io::write_text(o.out, text);
    out << "wrote " << f.size() << " coefficients to " << o.out << "\n";
  }
  return kOk;
}

void space_flags(CLI::App* c, Options& o) {
  c->add_option("--space", o.space, "Family: Hp Apq Bpq Fpq Tpq Mpq AInfInf Bloch ApInfS FpInfS Hvec_paren Hvec_sub "
                                    "Hvec_plain CarlesonBMOA")
      ->required();
  c->add_option("--p", o.p, "Integral-mean exponent (repeatable for vector families; inf allowed)");
  c->add_option("--q", o.q, "Radial exponent (inf allowed for Tpq, Mpq)");
  c->add_option("--gamma", o.gamma, "Weight of the mixed-norm families");
  c->add_option("--alpha", o.alpha,
                "Weights of Hvec families; derivative order of AInfInf; kernel weight of CarlesonBMOA; "
                "weight of the mixed-norm families when --gamma is absent");
  c->add_option("--s", o.s, "Exponent of Hp; weight of ApInfS, FpInfS, AInfInf; area weight of CarlesonBMOA");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Norms, kernel growth fits and multiplier conditions for power series on the unit polydisc"};
  app.footer(kCsvHelp);
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c) {
    c->add_option("--out", o.out, "Write the report here instead of standard output");
    c->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    c->add_option("--refine", o.refine, "Grid refinement level");
  };

  auto* norm = app.add_subcommand("norm", "Norm of a coefficient tensor");
  space_flags(norm, o);
  norm->add_option("--in", o.in, "CoeffTensor JSON file")->required();
  norm->add_flag("--no-error-estimate", o.no_error_estimate, "Skip the refined re-evaluation");
  common(norm);

  auto* fit = app.add_subcommand("kernel-fit", "Growth exponent of the kernel norm along R -> 1");
  space_flags(fit, o);
  fit->add_option("--beta", o.beta, "Kernel order (repeatable per coordinate)");
  fit->add_option("--n", o.n, "Dimension (default: number of --beta values)");
  fit->add_option("--depth", o.depth, "Grid radii 1 - 2^-j, j = 2..depth (default 10)");
  fit->add_option("--mode", o.mode, "diagonal or per-coordinate");
  fit->add_option("--axis", o.axis, "Varied coordinate in per-coordinate mode");
  fit->add_option("--fixed", o.fixed, "Radius of the other coordinates in per-coordinate mode");
  common(fit);

  auto* mult = app.add_subcommand("mult-check", "Necessary multiplier condition of a theorem");
  mult->add_option("--theorem", o.theorem, "T1.1 ... T5.3")->required();
  mult->add_option("--p", o.p, "Integral-mean exponent (inf allowed)");
  mult->add_option("--gamma", o.gamma, "Weight gamma");
  mult->add_option("--s", o.s, "Index s of the BMOA-type source (T1)");
  mult->add_option("--v", o.v, "Target index (T1), free parameter (T2), weights (T3, T4)");
  mult->add_option("--q", o.q, "Index q of the mixed-norm space");
  mult->add_option("--tau", o.tau, "Target weights (T5)");
  mult->add_option("--beta", o.beta, "Derivative order");
  mult->add_option("--bmoa-q", o.bmoa_q, "Index q of the BMOA-type space");
  mult->add_option("--bmoa-alpha", o.bmoa_alpha, "Index alpha of the BMOA-type space");
  mult->add_option("--n", o.n, "Dimension");
  mult->add_option("--in", o.in, "Multiplier g as CoeffTensor JSON");
  mult->add_option("--family", o.family, "constant or power when no --in is given");
  mult->add_option("--power", o.power, "Exponent m of c_k = prod (k_j + 1)^m");
  mult->add_option("--degree", o.degree, "Truncation degree of generated g");
  mult->add_option("--depth", o.depth, "Grid depth (default 12)");
  mult->add_flag("--probe", o.probe, "Also run the boundedness probe on the theorem's spaces");
  mult->add_option("--seed", o.seed, "Seed of the random probes");
  mult->add_option("--random", o.random, "Number of random probes");
  common(mult);

  auto* embed = app.add_subcommand("embed-probe", "Ratios of an embedding over kernel and random probes");
  embed->add_option("--pair", o.pair,
                    "sup-mean/Apq sup-mean/Tpq sup-mean/Bpq Fpq/Apq nested-radial/Hvec_paren area/Hvec_plain "
                    "mean-scalar/Hvec_paren mean-per-coordinate/Hvec_paren mean/Hvec_plain "
                    "mean-weighted/Hvec_sub carleson-chain")
      ->required();
  embed->add_option("--p", o.p, "Exponent(s)");
  embed->add_option("--q", o.q, "Radial exponent");
  embed->add_option("--gamma", o.gamma, "Weight of the mixed-norm pairs");
  embed->add_option("--s", o.s, "Exponent s of the Carleson chain");
  embed->add_option("--alpha", o.alpha, "Hvec weights, or the kernel weight of the Carleson chain");
  embed->add_option("--bmoa-alpha", o.bmoa_alpha, "Kernel weight of the Carleson chain");
  embed->add_option("--beta", o.beta, "Kernel order of the probes");
  embed->add_option("--n", o.n, "Dimension");
  embed->add_option("--depth", o.depth, "Kernel radii depth (default 10)");
  embed->add_option("--degree", o.degree, "Maximum degree of random probes (default 32)");
  embed->add_option("--random", o.random, "Number of random probes");
  embed->add_option("--seed", o.seed, "Seed of the random probes");
  common(embed);

  auto* gen = app.add_subcommand("gen", "Write a CoeffTensor JSON file");
  gen->add_option("--family", o.family, "kernel, random, power or constant");
  gen->add_option("--R", o.R, "Kernel radii");
  gen->add_option("--beta", o.beta, "Kernel order");
  gen->add_option("--n", o.n, "Dimension");
  gen->add_option("--degree", o.degree, "Truncation or maximum degree");
  gen->add_option("--power", o.power, "Exponent m of (k + 1)^m");
  gen->add_option("--seed", o.seed, "Seed of the random family");
  gen->add_option("--out", o.out, "Output path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kError;
  }

  try {
    if (*norm) return cmd_norm(o, out);
    if (*fit) return cmd_kernel_fit(o, out);
    if (*mult) return cmd_mult_check(o, out);
    if (*embed) return cmd_embed_probe(o, out);
    if (*gen) return cmd_gen(o, out);
  } catch (const TruncationInsufficient& e) {
    err << "error: " << e.what() << " (recommended degrees:";
    for (auto k : e.recommended()) err << ' ' << k;
    err << ")\n";
    return kError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

}  // namespace polydisc::cli
