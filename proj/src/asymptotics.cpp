#include "polydisc/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "polydisc/error.hpp"

namespace polydisc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double inv(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

double scalar_beta(std::span<const double> beta, const std::string& family) {
  for (double b : beta) {
    if (b != beta[0]) throw InputError(family + " takes a single derivative order on the diagonal");
  }
  return beta[0];
}

ExponentPrediction finish(ExponentPrediction e, std::span<const double> beta) {
  e.valid = true;
  for (std::size_t j = 0; j < e.threshold.size(); ++j) {
    const double b = beta[std::min(j, beta.size() - 1)];
    if (!(b > e.threshold[j])) e.valid = false;
  }
  double sum = 0.0;
  for (double t : e.tau) sum += std::max(0.0, t);
  e.total = static_cast<double>(e.multiplicity) * sum;
  return e;
}

// Same exponent and threshold in every coordinate, product structure.
ExponentPrediction per_axis(std::span<const double> beta, std::size_t n, double shift, double threshold) {
  ExponentPrediction e;
  for (std::size_t j = 0; j < n; ++j) {
    e.tau.push_back(beta[j] + shift);
    e.threshold.push_back(threshold);
  }
  return e;
}

}  // namespace

ExponentPrediction predicted_exponent(const SpaceSpec& spec, std::span<const double> beta_in, std::size_t n) {
  validate(spec, n);
  const auto beta = broadcast(beta_in, n, "beta");
  for (double b : beta) {
    if (!(b > -1.0)) throw ParameterDomainError("kernel order beta must exceed -1");
  }
  const double dn = static_cast<double>(n);
  const ExponentPrediction e = std::visit(
      overloaded{
          [&](const space::Hp& s) { return per_axis(beta, n, 1.0 - inv(s.p), inv(s.p) - 1.0); },
          [&](const space::Apq& s) {
            return per_axis(beta, n, 1.0 - s.weight - inv(s.p), s.weight + inv(s.p) - 1.0);
          },
          [&](const space::Fpq& s) {
            return per_axis(beta, n, 1.0 - s.weight - inv(s.p), s.weight + inv(s.p) - 1.0);
          },
          [&](const space::ApInfS& s) { return per_axis(beta, n, 1.0 - s.s - inv(s.p), s.s + inv(s.p) - 1.0); },
          [&](const space::FpInfS& s) { return per_axis(beta, n, 1.0 - s.s - inv(s.p), s.s + inv(s.p) - 1.0); },
          [&](const space::AInfInf& s) { return per_axis(beta, n, s.order + 1.0 - s.weight, s.weight - s.order - 1.0); },
          [&](const space::Bloch&) { return per_axis(beta, n, 1.0, -1.0); },
          [&](const space::CarlesonBMOA& s) {
            const double shift = (s.s + 1.0) / s.q;
            return per_axis(beta, n, 1.0 - shift, shift - 1.0);
          },
          [&](const space::Tpq& s) {
            const double b = scalar_beta(beta, "Tpq");
            ExponentPrediction r;
            r.tau = {b + 1.0 - s.weight / dn - inv(s.p)};
            r.threshold = {s.weight / dn + inv(s.p) - 1.0};
            r.multiplicity = n;
            return r;
          },
          [&](const space::Mpq& s) {
            const double b = scalar_beta(beta, "Mpq");
            ExponentPrediction r;
            r.tau = {dn * (b + 1.0) - s.weight * dn - inv(s.p)};
            r.threshold = {s.weight + inv(s.p) / dn - 1.0};
            return r;
          },
          [&](const space::HvecSub& s0) {
            const auto s = resolved(s0, n);
            ExponentPrediction r;
            for (std::size_t j = 0; j < n; ++j) {
              r.tau.push_back(beta[j] + 1.0 - inv(s.p[j]) - s.alpha[j]);
              r.threshold.push_back(s.alpha[j] + inv(s.p[j]) - 1.0);
            }
            return r;
          },
          [&](const space::HvecParen& s0) {
            const auto s = resolved(s0, n);
            ExponentPrediction r;
            for (std::size_t j = 0; j < n; ++j) {
              const double loss = (2.0 + s.alpha[j]) * inv(s.p[j]);
              r.tau.push_back(beta[j] + 1.0 - loss);
              r.threshold.push_back(loss - 1.0);
            }
            return r;
          },
          [&](const space::HvecPlain& s0) {
            const auto s = resolved(s0, n);
            ExponentPrediction r;
            for (std::size_t j = 0; j < n; ++j) {
              r.tau.push_back(beta[j] + 1.0 - inv(s.p[j]));
              r.threshold.push_back(inv(s.p[j]) - 1.0);
            }
            return r;
          },
          [&](const space::Bpq&) -> ExponentPrediction {
            throw UnsupportedError("no growth exponent is known for Bpq");
          },
      },
      spec);
  return finish(e, beta);
}

std::vector<RadialPoint> geometric_r_grid(std::size_t depth) {
  if (depth < 3 || depth > 14) throw InputError("grid depth must lie in [3, 14]");
  std::vector<RadialPoint> grid;
  for (std::size_t j = 2; j <= depth; ++j) grid.push_back(RadialPoint::diagonal(1, 1.0 - std::ldexp(1.0, -static_cast<int>(j))));
  return grid;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("a line fit needs at least two points");
  const double N = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / N;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / N;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InputError("a line fit needs distinct abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = y[i] - (f.intercept + f.slope * x[i]);
    ss += d * d;
  }
  f.residual = std::sqrt(ss / N);
  return f;
}

LineFit growth_slope(std::span<const double> radii, std::span<const double> values, std::size_t window) {
  if (radii.size() != values.size()) throw InputError("radii and values differ in length");
  if (window < 3 || radii.size() < window) throw InputError("not enough grid points for the fit window");
  std::vector<double> x, y;
  for (std::size_t i = radii.size() - window; i < radii.size(); ++i) {
    if (!(values[i] > 0.0)) throw InputError("growth fits need positive values");
    x.push_back(-std::log1p(-radii[i]));
    y.push_back(std::log(values[i]));
  }
  return fit_line(x, y);
}

SlopeFit norm_growth_fit(const SpaceSpec& spec, std::span<const double> beta_in, const std::vector<RadialPoint>& grid,
                         const FitOptions& opts) {
  const std::size_t n = beta_in.size();
  if (n == 0 || n > kMaxDim) throw InputError("beta must have one entry per coordinate");
  if (grid.size() < std::max<std::size_t>(6, opts.window)) throw InputError("a growth fit needs at least 6 grid points");
  SlopeFit fit;
  fit.predicted = predicted_exponent(spec, beta_in, n);
  const bool per_coordinate = opts.mode == GridMode::PerCoordinate;
  if (per_coordinate) {
    if (opts.axis >= n) throw InputError("axis out of range");
    if (fit.predicted.tau.size() != n) throw UnsupportedError(family_name(spec) + " has no per-coordinate exponent");
  }

  double previous = -1.0;
  for (const auto& point : grid) {
    const double R = point[0];
    for (std::size_t j = 1; j < point.dim(); ++j) {
      if (point[j] != R) throw InputError("growth grids must be diagonal");
    }
    if (!(R > previous)) throw InputError("growth grid must be strictly increasing");
    previous = R;
    std::vector<double> radii(n, R);
    if (per_coordinate) {
      std::fill(radii.begin(), radii.end(), opts.fixed);
      radii[opts.axis] = R;
    }
    const ProductSeries g = kernel_factors(RadialPoint(radii), beta_in);
    const NormResult res = evaluate_norm(g, spec, opts.norm);
    fit.radii.push_back(R);
    fit.norms.push_back(res.value);
    fit.log_ratio.push_back(-std::log1p(-R));
    fit.grids.push_back(res.grid);
  }

  const LineFit line = growth_slope(fit.radii, fit.norms, opts.window);
  fit.fitted = line.slope;
  fit.residual = line.residual;
  for (std::size_t i = grid.size() - opts.window; i < grid.size(); ++i) fit.window.push_back(i);

  const auto& tau = fit.predicted.tau;
  if (per_coordinate) {
    fit.target = std::max(0.0, tau[opts.axis]);
    fit.per_coordinate = fit.fitted;
  } else {
    fit.target = fit.predicted.total;
    fit.per_coordinate = fit.fitted / static_cast<double>(fit.predicted.multiplicity * tau.size());
  }
  const double tol = 0.1 * std::max(1.0, fit.target);
  if (std::abs(fit.fitted - fit.target) <= tol) {
    fit.status = "matched";
  } else if (fit.fitted < fit.target) {
    fit.status = "bound satisfied, not saturated";
  } else {
    fit.status = "exceeded";
  }
  return fit;
}

}  // namespace polydisc
