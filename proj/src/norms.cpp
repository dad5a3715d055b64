#include "polydisc/norms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "polydisc/error.hpp"
#include "polydisc/kernels.hpp"
#include "polydisc/quadrature.hpp"

namespace polydisc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kMaxDirections = std::size_t{1} << 24;
constexpr double kPolishBudget = 4e9;
constexpr std::size_t kCarlesonDepth = 10;
constexpr std::size_t kCarlesonAngles = 16;

struct Ctx {
  unsigned refine = 0;
  std::size_t per_panel = 16;
  GridMeta* meta = nullptr;

  std::size_t nodes() const { return per_panel << refine; }
};

std::size_t max_degree(const Degrees& d) { return *std::max_element(d.begin(), d.end()); }

std::vector<std::size_t> sizes_for(const Degrees& d, unsigned refine) {
  std::vector<std::size_t> m;
  const std::size_t lowest = d.size() == 1 ? quad::kMinAngular1d : d.size() == 2 ? quad::kMinAngular2d : 64;
  for (std::size_t k : d) m.push_back(quad::angular_size(k, refine, lowest));
  return m;
}

void note_radial(const Ctx& c, std::size_t count) {
  if (c.meta) c.meta->radial_nodes = std::max(c.meta->radial_nodes, count);
}

void note_depth(const Ctx& c, std::size_t depth) {
  if (c.meta) c.meta->sup_depth = std::max(c.meta->sup_depth, depth);
}

double modulus_pow(double x, double q) { return kernels::positive_pow(x, q); }

// ---------------------------------------------------------------------------
// Means

double mean_dense(const CoeffTensor& f, double p, std::span<const double> r, unsigned refine) {
  const auto m = sizes_for(f.degrees(), refine);
  if (std::isinf(p)) return kernels::max_modulus(f, r, m);
  return kernels::power_mean(kernels::torus_values(f, r, m), p);
}

double mean_at(SeriesView f, double p, std::span<const double> r, unsigned refine) {
  if (!f.is_product()) return mean_dense(f.dense(), p, r, refine);
  double v = 1.0;
  for (std::size_t j = 0; j < f.dim(); ++j) {
    const double rj[1] = {r[j]};
    v *= mean_dense(f.product().factor(j), p, rj, refine);
  }
  return v;
}

// (sum W_i M_i^q)^{1/q}, scaled by the largest M.
double lq_sum(std::span<const double> M, std::span<const double> W, double q) {
  const double peak = *std::max_element(M.begin(), M.end());
  if (peak == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < M.size(); ++i) s += W[i] * modulus_pow(M[i] / peak, q);
  return peak * std::pow(s, 1.0 / q);
}

// Tensor product of per-axis radial rules.
struct TensorRule {
  std::vector<quad::Rule> axes;

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.size();
    return n;
  }

  double node(std::size_t idx, std::vector<double>& r) const {
    r.resize(axes.size());
    double w = 1.0;
    for (std::size_t j = axes.size(); j-- > 0;) {
      const std::size_t i = idx % axes[j].size();
      idx /= axes[j].size();
      r[j] = axes[j].nodes[i];
      w *= axes[j].weights[i];
    }
    return w;
  }
};

TensorRule tensor_rule(const Degrees& d, double w, const Ctx& c) {
  TensorRule t;
  for (std::size_t k : d) t.axes.push_back(quad::weighted_radial(w, quad::panel_levels(k), c.nodes()));
  note_radial(c, t.axes[0].size());
  return t;
}

// |f| on the full torus grid at radii r.
std::vector<double> moduli_at(SeriesView f, std::span<const double> r, std::span<const std::size_t> m) {
  std::size_t total = 1;
  for (std::size_t mj : m) total *= mj;
  if (total > kMaxDirections) throw FeasibilityError("torus grid too large for this family");
  std::vector<double> out(total);
  if (!f.is_product()) {
    const auto v = kernels::torus_values(f.dense(), r, m);
    for (std::size_t i = 0; i < total; ++i) out[i] = std::sqrt(std::norm(v[i]));
    return out;
  }
  std::fill(out.begin(), out.end(), 1.0);
  std::size_t inner = total;
  for (std::size_t j = 0; j < f.dim(); ++j) {
    const double rj[1] = {r[j]};
    const std::size_t mj[1] = {m[j]};
    const auto v = kernels::torus_values(f.product().factor(j), rj, mj);
    inner /= m[j];
    for (std::size_t o = 0; o < total; ++o) out[o] *= std::abs(v[(o / inner) % m[j]]);
  }
  return out;
}

// |f(r_1 e^{i theta_1}, ...)| at the grid direction `dir`.
double modulus_at_direction(SeriesView f, std::span<const double> r, std::span<const std::size_t> m, std::size_t dir) {
  const std::size_t n = m.size();
  std::vector<double> theta(n);
  for (std::size_t j = n; j-- > 0;) {
    theta[j] = kTwoPi * static_cast<double>(dir % m[j]) / static_cast<double>(m[j]);
    dir /= m[j];
  }
  if (!f.is_product()) return std::abs(kernels::evaluate(f.dense(), r, theta));
  double v = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double rj[1] = {r[j]};
    const double tj[1] = {theta[j]};
    v *= std::abs(kernels::evaluate(f.product().factor(j), rj, tj));
  }
  return v;
}

std::size_t point_cost(SeriesView f) {
  if (!f.is_product()) return f.dense().size();
  std::size_t c = 0;
  for (const auto& g : f.product().factors()) c += g.size();
  return c;
}

// ---------------------------------------------------------------------------
// Sup over radii

struct SupAxis {
  double weight = 0.0;
  bool fixed_at_one = false;  // monotone functional with no weight
  double resolution = 0.0;    // samples per unit of r needed to separate local maxima
};

// Sample points t = -log2(1 - r), step h, but no coarser than h / resolution in r.
std::vector<double> sup_times(std::size_t depth, double h, double resolution) {
  std::vector<double> t;
  const double scale = resolution * std::numbers::ln2;
  for (double x = 0.0; x <= static_cast<double>(depth) + 1e-12;) {
    t.push_back(x);
    x += resolution == 0.0 ? h : h * std::min(1.0, std::exp2(x) / scale);
  }
  return t;
}

// Values along one direction oscillate on the scale 1/degree in r; means over the torus are smoother.
// Capped so that kernel-sized degrees keep the grid small.
double direction_resolution(std::size_t degree) { return std::min(2.0 * static_cast<double>(degree), 512.0); }
double mean_resolution(std::size_t degree) { return std::min(static_cast<double>(degree), 16.0); }

using GridFn = std::function<std::vector<double>(const std::vector<double>&)>;
using PointFn = std::function<double(std::size_t, const std::vector<double>&)>;

double radius_of(double t) { return std::isinf(t) ? 1.0 : 1.0 - std::exp2(-t); }

double weight_factor(const std::vector<SupAxis>& axes, const std::vector<double>& r) {
  double w = 1.0;
  for (std::size_t j = 0; j < axes.size(); ++j) {
    if (axes[j].weight != 0.0) w *= std::pow(1.0 - r[j], axes[j].weight);
  }
  return w;
}

// For each of D directions, sup over r in [0,1]^k of value(d, r) prod (1 - r_j)^{w_j}.
// Grid search on t = -log2(1 - r), then coordinate-wise Brent polishing.
std::vector<double> per_direction_sup(std::size_t D, const std::vector<SupAxis>& axes, std::size_t depth,
                                      const Ctx& c, const GridFn& grid_fn, const PointFn& point_fn, bool polish) {
  const std::size_t k = axes.size();
  const double h = std::ldexp(1.0, -static_cast<int>(c.refine));
  for (int attempt = 0;; ++attempt) {
    std::vector<std::vector<double>> tv(k);
    for (std::size_t j = 0; j < k; ++j) {
      if (axes[j].fixed_at_one) {
        tv[j] = {kInf};
        continue;
      }
      tv[j] = sup_times(depth, h, axes[j].resolution);
      if (axes[j].weight == 0.0) tv[j].push_back(kInf);
    }
    std::size_t total = 1;
    for (const auto& t : tv) total *= t.size();

    std::vector<double> best(D, -1.0);
    std::vector<std::size_t> arg(D, 0);
    constexpr std::size_t kBatch = 8;
    for (std::size_t lo = 0; lo < total; lo += kBatch) {
      const std::size_t hi = std::min(total, lo + kBatch);
      std::vector<std::vector<double>> vals(hi - lo);
      std::vector<double> wf(hi - lo);
#pragma omp parallel for schedule(dynamic)
      for (std::size_t idx = lo; idx < hi; ++idx) {
        std::vector<double> r(k);
        std::size_t rem = idx;
        for (std::size_t j = k; j-- > 0;) {
          r[j] = radius_of(tv[j][rem % tv[j].size()]);
          rem /= tv[j].size();
        }
        vals[idx - lo] = grid_fn(r);
        wf[idx - lo] = weight_factor(axes, r);
      }
      for (std::size_t idx = lo; idx < hi; ++idx) {
        const auto& v = vals[idx - lo];
        for (std::size_t d = 0; d < D; ++d) {
          const double x = v[d] * wf[idx - lo];
          if (x > best[d]) {
            best[d] = x;
            arg[d] = idx;
          }
        }
      }
    }

    // Extend the grid when a weighted sup sits on its last finite point.
    bool at_edge = false;
    if (D == 1 && attempt < 12) {
      std::size_t rem = arg[0];
      for (std::size_t j = k; j-- > 0;) {
        const double t = tv[j][rem % tv[j].size()];
        rem /= tv[j].size();
        if (!axes[j].fixed_at_one && axes[j].weight > 0.0 && t >= static_cast<double>(depth)) at_edge = true;
      }
    }
    if (at_edge && depth < 60) {
      depth += 4;
      continue;
    }
    note_depth(c, depth);
    if (!polish) return best;

    const int sweeps = k == 1 ? 1 : 3;
#pragma omp parallel for schedule(dynamic)
    for (std::size_t d = 0; d < D; ++d) {
      std::vector<double> t(k), lo(k), up(k);
      std::size_t rem = arg[d];
      for (std::size_t j = k; j-- > 0;) {
        const auto& row = tv[j];
        const std::size_t i = rem % row.size();
        t[j] = row[i];
        lo[j] = i > 0 ? row[i - 1] : 0.0;
        up[j] = i + 1 < row.size() && std::isfinite(row[i + 1]) ? row[i + 1] : t[j] + h;
        rem /= row.size();
      }
      double value = best[d];
      auto objective = [&](const std::vector<double>& tt) {
        std::vector<double> r(k);
        for (std::size_t j = 0; j < k; ++j) r[j] = radius_of(tt[j]);
        return point_fn(d, r) * weight_factor(axes, r);
      };
      for (int sweep = 0; sweep < sweeps; ++sweep) {
        for (std::size_t j = 0; j < k; ++j) {
          if (axes[j].fixed_at_one || std::isinf(t[j])) continue;
          const double a = lo[j];
          const double b = up[j];
          std::vector<double> tt = t;
          auto neg = [&](double x) {
            tt[j] = x;
            return -objective(tt);
          };
          std::uintmax_t iters = 80;
          const auto res = boost::math::tools::brent_find_minima(neg, a, b, 40, iters);
          if (-res.second > value) {
            value = -res.second;
            t[j] = res.first;
          }
        }
      }
      best[d] = value;
    }
    return best;
  }
}

// sup over r of a scalar functional of r.
double scalar_sup(const std::vector<SupAxis>& axes, std::size_t depth, const Ctx& c,
                  const std::function<double(const std::vector<double>&)>& fn) {
  GridFn g = [&](const std::vector<double>& r) { return std::vector<double>{fn(r)}; };
  PointFn p = [&](std::size_t, const std::vector<double>& r) { return fn(r); };
  return per_direction_sup(1, axes, depth, c, g, p, true)[0];
}

// sup_r M_p(f, r) prod (1 - r_j)^{w_j}; factorizes for product series.
double weighted_mean_sup(SeriesView f, std::span<const double> p, std::span<const double> w, const Ctx& c) {
  const std::size_t n = f.dim();
  const std::size_t depth = quad::sup_depth(max_degree(f.degrees()));
  auto axis = [](double weight, std::size_t degree) {
    return SupAxis{weight, weight == 0.0, mean_resolution(degree)};
  };
  if (f.is_product()) {
    double v = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      const CoeffTensor& g = f.product().factor(j);
      const double pj = p[j];
      v *= scalar_sup({axis(w[j], g.degrees()[0])}, depth, c, [&](const std::vector<double>& r) {
        return mean_dense(g, pj, r, c.refine);
      });
    }
    return v;
  }
  std::vector<SupAxis> axes;
  for (std::size_t j = 0; j < n; ++j) axes.push_back(axis(w[j], f.degrees()[j]));
  const CoeffTensor& g = f.dense();
  const auto m = sizes_for(g.degrees(), c.refine);
  const bool uniform = std::all_of(p.begin(), p.end(), [&](double x) { return x == p[0]; });
  return scalar_sup(axes, depth, c, [&](const std::vector<double>& r) {
    if (uniform) return mean_dense(g, p[0], r, c.refine);
    const auto v = kernels::torus_values(g, r, m);
    std::vector<double> mod(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) mod[i] = std::sqrt(std::norm(v[i]));
    return kernels::nested_mean(mod, m, p);
  });
}

// (int_{T^n} [sup_r |f(r xi)| (1 - r)^w]^p dxi)^{1/p} over diagonal radii.
double direction_sup_norm(SeriesView f, double p, double w, const Ctx& c) {
  const std::size_t n = f.dim();
  const auto m = sizes_for(f.degrees(), c.refine);
  std::size_t D = 1;
  for (std::size_t mj : m) D *= mj;
  if (D > kMaxDirections) throw FeasibilityError("torus grid too large for a per-direction sup");
  const std::size_t depth = quad::sup_depth(max_degree(f.degrees()));
  GridFn grid = [&](const std::vector<double>& r) {
    const std::vector<double> rr(n, r[0]);
    return moduli_at(f, rr, m);
  };
  PointFn point = [&](std::size_t d, const std::vector<double>& r) {
    const std::vector<double> rr(n, r[0]);
    return modulus_at_direction(f, rr, m, d);
  };
  const bool polish = static_cast<double>(D) * 120.0 * static_cast<double>(point_cost(f)) <= kPolishBudget;
  if (c.meta && !polish) c.meta->sup_polished = false;
  const SupAxis axis{w, false, direction_resolution(max_degree(f.degrees()))};
  const auto best = per_direction_sup(D, {axis}, depth, c, grid, point, polish);
  return kernels::power_mean(best, p);
}

// ---------------------------------------------------------------------------
// Radial mixed norms

double apq(SeriesView f, double p, double q, double weight, const Ctx& c) {
  if (f.is_product()) {
    double v = 1.0;
    for (const auto& g : f.product().factors()) v *= apq(g, p, q, weight, c);
    return v;
  }
  const CoeffTensor& g = f.dense();
  const TensorRule rule = tensor_rule(g.degrees(), weight * q, c);
  const std::size_t N = rule.size();
  std::vector<double> M(N), W(N);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < N; ++i) {
    std::vector<double> r;
    W[i] = rule.node(i, r);
    M[i] = mean_dense(g, p, r, c.refine);
  }
  return lq_sum(M, W, q);
}

double bpq(SeriesView f, double p, double q, double weight, const Ctx& c) {
  const auto rule = quad::weighted_radial(weight * q, quad::panel_levels(max_degree(f.degrees())), c.nodes());
  note_radial(c, rule.size());
  const std::size_t N = rule.size();
  std::vector<double> M(N);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < N; ++i) {
    const std::vector<double> r(f.dim(), rule.nodes[i]);
    M[i] = mean_at(f, p, r, c.refine);
  }
  return lq_sum(M, rule.weights, q);
}

// Accumulates sum_i W_i field_i^q over a batch-parallel loop with fixed order.
template <class FieldFn>
std::vector<double> accumulate_fields(std::size_t count, std::size_t size, double q, const FieldFn& field) {
  std::vector<double> G(size, 0.0);
  constexpr std::size_t kBatch = 8;
  for (std::size_t lo = 0; lo < count; lo += kBatch) {
    const std::size_t hi = std::min(count, lo + kBatch);
    std::vector<std::vector<double>> part(hi - lo);
    std::vector<double> wt(hi - lo);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = lo; i < hi; ++i) {
      part[i - lo] = field(i, wt[i - lo]);
      for (double& x : part[i - lo]) x = modulus_pow(x, q);
    }
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t t = 0; t < size; ++t) G[t] += wt[i - lo] * part[i - lo][t];
    }
  }
  return G;
}

double outer_mean(const std::vector<double>& G, double p, double q) {
  if (std::isinf(p)) return std::pow(*std::max_element(G.begin(), G.end()), 1.0 / q);
  return std::pow(kernels::power_mean(G, p / q), 1.0 / q);
}

double fpq(SeriesView f, double p, double q, double weight, const Ctx& c) {
  if (f.is_product()) {
    double v = 1.0;
    for (const auto& g : f.product().factors()) v *= fpq(g, p, q, weight, c);
    return v;
  }
  const CoeffTensor& g = f.dense();
  const auto m = sizes_for(g.degrees(), c.refine);
  std::size_t D = 1;
  for (std::size_t mj : m) D *= mj;
  const TensorRule rule = tensor_rule(g.degrees(), weight * q, c);
  const auto G = accumulate_fields(rule.size(), D, q, [&](std::size_t i, double& w) {
    std::vector<double> r;
    w = rule.node(i, r);
    return moduli_at(g, r, m);
  });
  return outer_mean(G, p, q);
}

double tpq(SeriesView f, double p, double q, double weight, const Ctx& c) {
  if (p == q) return bpq(f, p, q, weight, c);
  if (std::isinf(q)) return direction_sup_norm(f, p, weight, c);
  const auto m = sizes_for(f.degrees(), c.refine);
  std::size_t D = 1;
  for (std::size_t mj : m) D *= mj;
  if (D > kMaxDirections) throw FeasibilityError("torus grid too large for the diagonal-radius norm");
  const auto rule = quad::weighted_radial(weight * q, quad::panel_levels(max_degree(f.degrees())), c.nodes());
  note_radial(c, rule.size());
  const auto G = accumulate_fields(rule.size(), D, q, [&](std::size_t i, double& w) {
    w = rule.weights[i];
    const std::vector<double> r(f.dim(), rule.nodes[i]);
    return moduli_at(f, r, m);
  });
  return outer_mean(G, p, q);
}

// |f(r_1 zeta, ..., r_n zeta)| on zeta = e^{2 pi i t / m}.
std::vector<double> diagonal_moduli(const CoeffTensor& f, std::span<const double> r, std::size_t m) {
  const auto v = kernels::diagonal_values(f, r, m);
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = std::sqrt(std::norm(v[i]));
  return out;
}

double mpq(SeriesView f, double p, double q, double weight, const Ctx& c) {
  const std::size_t n = f.dim();
  const Degrees deg = f.degrees();
  std::size_t total_degree = 0;
  for (std::size_t k : deg) total_degree += k;
  const std::size_t m = quad::angular_size(total_degree, c.refine, quad::kMinAngular1d);
  const std::size_t depth = quad::sup_depth(total_degree);
  if (c.meta) c.meta->angular = {m};

  if (f.is_product()) {
    std::vector<double> G(m, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
      const CoeffTensor& g = f.product().factor(j);
      std::vector<double> Gj;
      if (std::isinf(q)) {
        GridFn grid = [&](const std::vector<double>& r) { return diagonal_moduli(g, r, m); };
        PointFn point = [&](std::size_t d, const std::vector<double>& r) {
          const double th[1] = {kTwoPi * static_cast<double>(d) / static_cast<double>(m)};
          return std::abs(kernels::evaluate(g, r, th));
        };
        const bool polish = static_cast<double>(m) * 120.0 * static_cast<double>(g.size()) <= kPolishBudget;
        if (c.meta && !polish) c.meta->sup_polished = false;
        const SupAxis axis{weight, false, direction_resolution(g.degrees()[0])};
        Gj = per_direction_sup(m, {axis}, depth, c, grid, point, polish);
      } else {
        const auto rule = quad::weighted_radial(weight * q, quad::panel_levels(g.degrees()[0]), c.nodes());
        note_radial(c, rule.size());
        Gj = accumulate_fields(rule.size(), m, q, [&](std::size_t i, double& w) {
          w = rule.weights[i];
          const double r[1] = {rule.nodes[i]};
          return diagonal_moduli(g, r, m);
        });
      }
      for (std::size_t t = 0; t < m; ++t) G[t] *= Gj[t];
    }
    if (std::isinf(q)) return kernels::power_mean(G, p);
    return outer_mean(G, p, q);
  }

  const CoeffTensor& g = f.dense();
  if (std::isinf(q)) {
    std::vector<SupAxis> axes(n, SupAxis{weight, false, direction_resolution(max_degree(g.degrees()))});
    GridFn grid = [&](const std::vector<double>& r) { return diagonal_moduli(g, r, m); };
    PointFn point = [&](std::size_t d, const std::vector<double>& r) {
      const std::vector<double> th(n, kTwoPi * static_cast<double>(d) / static_cast<double>(m));
      return std::abs(kernels::evaluate(g, r, th));
    };
    const bool polish = static_cast<double>(m) * 360.0 * static_cast<double>(g.size()) <= kPolishBudget;
    if (c.meta && !polish) c.meta->sup_polished = false;
    return kernels::power_mean(per_direction_sup(m, axes, depth, c, grid, point, polish), p);
  }
  const TensorRule rule = tensor_rule(deg, weight * q, c);
  const auto G = accumulate_fields(rule.size(), m, q, [&](std::size_t i, double& w) {
    std::vector<double> r;
    w = rule.node(i, r);
    return diagonal_moduli(g, r, m);
  });
  return outer_mean(G, p, q);
}

// ---------------------------------------------------------------------------
// Area norm

double area_1d(const CoeffTensor& g, double p, double alpha, const Ctx& c) {
  if (std::isinf(p)) {
    const double one[1] = {1.0};
    return mean_dense(g, kInf, one, c.refine);
  }
  const auto rule = quad::weighted_radial(alpha + 1.0, quad::panel_levels(g.degrees()[0]), c.nodes());
  note_radial(c, rule.size());
  const std::size_t N = rule.size();
  std::vector<double> M(N), W(N);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < N; ++i) {
    const double r[1] = {rule.nodes[i]};
    M[i] = mean_dense(g, p, r, c.refine);
    W[i] = kTwoPi * rule.weights[i] * rule.nodes[i];
  }
  return lq_sum(M, W, p);
}

double area_2d(const CoeffTensor& g, std::span<const double> p, std::span<const double> alpha, const Ctx& c) {
  const auto m = sizes_for(g.degrees(), c.refine);
  std::array<quad::Rule, 2> rules;
  for (std::size_t j = 0; j < 2; ++j) {
    if (std::isinf(p[j])) {
      rules[j].nodes = {1.0};
      rules[j].weights = {1.0};
    } else {
      rules[j] = quad::weighted_radial(alpha[j] + 1.0, quad::panel_levels(g.degrees()[j]), c.nodes());
      for (std::size_t i = 0; i < rules[j].size(); ++i) rules[j].weights[i] *= kTwoPi * rules[j].nodes[i];
    }
  }
  note_radial(c, std::max(rules[0].size(), rules[1].size()));
  const std::size_t N1 = rules[0].size();
  const std::size_t N2 = rules[1].size();
  const std::size_t m1 = m[0];
  const std::size_t m2 = m[1];
  // inner[i2][t2]: the xi_1 integral (or sup) raised to the power p_1, at fixed xi_2.
  std::vector<std::vector<double>> inner(N2, std::vector<double>(m2, 0.0));
  const bool sup1 = std::isinf(p[0]);
  const double half = 0.5 * p[0];
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i2 = 0; i2 < N2; ++i2) {
    std::vector<double> acc(m2);
    for (std::size_t i1 = 0; i1 < N1; ++i1) {
      const double r[2] = {rules[0].nodes[i1], rules[1].nodes[i2]};
      const auto v = kernels::torus_values(g, r, m);
      std::fill(acc.begin(), acc.end(), 0.0);
      // Squared moduli, so |f|^p = (|f|^2)^{p/2}.
      for (std::size_t t1 = 0; t1 < m1; ++t1) {
        const cplx* row = v.data() + t1 * m2;
        for (std::size_t t2 = 0; t2 < m2; ++t2) {
          const double a = std::norm(row[t2]);
          acc[t2] = sup1 ? std::max(acc[t2], a) : acc[t2] + kernels::positive_pow(a, half);
        }
      }
      for (std::size_t t2 = 0; t2 < m2; ++t2) {
        if (sup1) {
          inner[i2][t2] = std::max(inner[i2][t2], std::sqrt(acc[t2]));
        } else {
          inner[i2][t2] += rules[0].weights[i1] * acc[t2] / static_cast<double>(m1);
        }
      }
    }
  }
  // Convert to the inner norm itself.
  for (auto& row : inner) {
    for (double& x : row) x = std::isinf(p[0]) ? x : std::pow(x, 1.0 / p[0]);
  }
  if (std::isinf(p[1])) {
    double mx = 0.0;
    for (const auto& row : inner) mx = std::max(mx, *std::max_element(row.begin(), row.end()));
    return mx;
  }
  std::vector<double> M(N2), W(N2);
  for (std::size_t i2 = 0; i2 < N2; ++i2) {
    M[i2] = kernels::power_mean(inner[i2], p[1]);
    W[i2] = rules[1].weights[i2];
  }
  return lq_sum(M, W, p[1]);
}

double area_norm(SeriesView f, std::span<const double> p, std::span<const double> alpha, const Ctx& c) {
  if (f.is_product()) {
    double v = 1.0;
    for (std::size_t j = 0; j < f.dim(); ++j) v *= area_1d(f.product().factor(j), p[j], alpha[j], c);
    return v;
  }
  if (f.dim() == 1) return area_1d(f.dense(), p[0], alpha[0], c);
  return area_2d(f.dense(), p, alpha, c);
}

// ---------------------------------------------------------------------------
// Carleson-type norm

// Fourier coefficients k_e, e = 0..limit, of |1 - a e^{i phi}|^{-(alpha + 1)} (even in e).
// Near the boundary: backward recurrence for the Laplace coefficients,
// normalized by k_0 + 2 sum k_e = (1 - a)^{-(alpha + 1)}.
std::vector<double> kernel_spectrum(double a, double alpha, std::size_t limit) {
  const double s = 0.5 * (alpha + 1.0);
  if (a >= 0.5) {
    const std::size_t E = limit + static_cast<std::size_t>(std::ceil(40.0 / (1.0 - a))) + 16;
    std::vector<double> k(E + 2, 0.0);
    k[E] = 1e-300;
    const double c = a + 1.0 / a;
    for (std::size_t e = E; e-- > 0;) {
      const double x = static_cast<double>(e);
      k[e] = ((x + 1.0) * c * k[e + 1] - (x + 2.0 - s) * k[e + 2]) / (x + s);
      if (k[e] > 1e250) {
        for (std::size_t t = e; t < k.size(); ++t) k[t] *= 1e-250;
      }
    }
    double sum = 0.0;
    for (std::size_t e = E; e >= 1; --e) sum += 2.0 * k[e];
    sum += k[0];
    const double scale = std::pow(1.0 - a, -(alpha + 1.0)) / sum;
    k.resize(limit + 1);
    for (double& x : k) x *= scale;
    return k;
  }
  const std::size_t M = quad::next_smooth(std::max<std::size_t>(64, 2 * limit + 64));
  std::vector<cplx> v(M);
  for (std::size_t t = 0; t < M; ++t) {
    const double phi = kTwoPi * static_cast<double>(t) / static_cast<double>(M);
    v[t] = std::pow(1.0 - 2.0 * a * std::cos(phi) + a * a, -s);
  }
  const std::size_t dims[1] = {M};
  kernels::fourier_coefficients(v, dims);
  std::vector<double> k(limit + 1);
  for (std::size_t e = 0; e <= limit; ++e) k[e] = v[e].real();
  return k;
}

long signed_index(std::size_t u, std::size_t m) {
  return u <= m / 2 ? static_cast<long>(u) : static_cast<long>(u) - static_cast<long>(m);
}

std::size_t residue(long d) {
  const long r = d % static_cast<long>(kCarlesonAngles);
  return static_cast<std::size_t>(r < 0 ? r + static_cast<long>(kCarlesonAngles) : r);
}

std::vector<double> carleson_radii() {
  std::vector<double> r;
  for (std::size_t j = 0; j <= kCarlesonDepth; ++j) r.push_back(1.0 - std::ldexp(1.0, -static_cast<int>(j)));
  return r;
}

// Angles of the w-grid from residue sums: I_l = Re sum_r S_r e^{-2 pi i r l / 16}.
std::array<double, kCarlesonAngles> angle_values(const std::array<cplx, kCarlesonAngles>& S) {
  std::array<double, kCarlesonAngles> out{};
  for (std::size_t l = 0; l < kCarlesonAngles; ++l) {
    cplx acc = 0.0;
    for (std::size_t r = 0; r < kCarlesonAngles; ++r) {
      acc += S[r] * std::polar(1.0, -kTwoPi * static_cast<double>((r * l) % kCarlesonAngles) /
                                       static_cast<double>(kCarlesonAngles));
    }
    out[l] = acc.real();
  }
  return out;
}

quad::Rule carleson_rule(std::size_t degree, double s, std::size_t per_panel) {
  const std::size_t levels = std::max(quad::panel_levels(degree), kCarlesonDepth + 2);
  auto rule = quad::weighted_radial(s + 1.0, levels, per_panel);
  for (std::size_t i = 0; i < rule.size(); ++i) rule.weights[i] *= rule.nodes[i];
  return rule;
}

double carleson_1d(const CoeffTensor& g, double q, double s, double alpha, const Ctx& c) {
  const std::size_t m = quad::angular_size(g.degrees()[0], c.refine, quad::kMinAngular1d);
  const auto rule = carleson_rule(g.degrees()[0], s, c.nodes());
  note_radial(c, rule.size());
  const auto wr = carleson_radii();
  const std::size_t N = rule.size();
  const std::size_t A = wr.size();
  // part[i][a][l]
  std::vector<std::vector<std::array<double, kCarlesonAngles>>> part(N);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < N; ++i) {
    const double r[1] = {rule.nodes[i]};
    const std::size_t mm[1] = {m};
    auto F = kernels::torus_values(g, r, mm);
    for (cplx& x : F) x = modulus_pow(std::sqrt(std::norm(x)), q);
    kernels::fourier_coefficients(F, mm);
    part[i].resize(A);
    for (std::size_t a = 0; a < A; ++a) {
      const auto k = kernel_spectrum(wr[a] * rule.nodes[i], alpha, m / 2);
      std::array<cplx, kCarlesonAngles> S{};
      for (std::size_t u = 0; u < m; ++u) {
        const long d = signed_index(u, m);
        const auto ad = static_cast<std::size_t>(std::labs(d));
        if (ad >= k.size()) continue;
        S[residue(d)] += F[u] * k[ad];
      }
      for (auto& x : S) x *= kTwoPi * rule.weights[i];
      part[i][a] = angle_values(S);
    }
  }
  double best = 0.0;
  for (std::size_t a = 0; a < A; ++a) {
    for (std::size_t l = 0; l < kCarlesonAngles; ++l) {
      double I = 0.0;
      for (std::size_t i = 0; i < N; ++i) I += part[i][a][l];
      best = std::max(best, I * std::pow(1.0 - wr[a], alpha));
    }
  }
  return std::pow(best, 1.0 / q);
}

double carleson_2d(const CoeffTensor& g, double q, double s, double alpha, const Ctx& c) {
  const auto m = sizes_for(g.degrees(), c.refine);
  const std::size_t per_panel = std::max<std::size_t>(4, c.nodes() / 2);
  const std::array<quad::Rule, 2> rules = {carleson_rule(g.degrees()[0], s, per_panel),
                                           carleson_rule(g.degrees()[1], s, per_panel)};
  note_radial(c, rules[0].size());
  const auto wr = carleson_radii();
  const std::size_t A = wr.size();
  const std::size_t R = kCarlesonAngles;
  const std::size_t N1 = rules[0].size();
  const std::size_t N2 = rules[1].size();
  const std::size_t m1 = m[0];
  const std::size_t m2 = m[1];

  // spectra[j][a][i]
  std::array<std::vector<std::vector<std::vector<double>>>, 2> spectra;
  for (std::size_t j = 0; j < 2; ++j) {
    spectra[j].assign(A, std::vector<std::vector<double>>(rules[j].size()));
#pragma omp parallel for collapse(2) schedule(dynamic)
    for (std::size_t a = 0; a < A; ++a) {
      for (std::size_t i = 0; i < rules[j].size(); ++i) {
        spectra[j][a][i] = kernel_spectrum(wr[a] * rules[j].nodes[i], alpha, m[j] / 2);
      }
    }
  }

  // J[i2][a1][r1][a2][r2]
  const std::size_t block = A * R * A * R;
  std::vector<std::vector<cplx>> Jpart(N2, std::vector<cplx>(block));
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i2 = 0; i2 < N2; ++i2) {
    std::vector<cplx> H(A * R * m2, 0.0);
    for (std::size_t i1 = 0; i1 < N1; ++i1) {
      const double r[2] = {rules[0].nodes[i1], rules[1].nodes[i2]};
      auto F = kernels::torus_values(g, r, m);
      for (cplx& x : F) x = modulus_pow(std::sqrt(std::norm(x)), q);
      kernels::fourier_coefficients(F, m);
      const double w1 = kTwoPi * rules[0].weights[i1];
      for (std::size_t a1 = 0; a1 < A; ++a1) {
        const auto& k1 = spectra[0][a1][i1];
        for (std::size_t u1 = 0; u1 < m1; ++u1) {
          const long d1 = signed_index(u1, m1);
          const auto ad = static_cast<std::size_t>(std::labs(d1));
          if (ad >= k1.size()) continue;
          const double coef = w1 * k1[ad];
          cplx* h = &H[(a1 * R + residue(d1)) * m2];
          const cplx* row = &F[u1 * m2];
          for (std::size_t u2 = 0; u2 < m2; ++u2) h[u2] += coef * row[u2];
        }
      }
    }
    const double w2 = kTwoPi * rules[1].weights[i2];
    auto& Jp = Jpart[i2];
    for (std::size_t a2 = 0; a2 < A; ++a2) {
      const auto& k2 = spectra[1][a2][i2];
      for (std::size_t ar = 0; ar < A * R; ++ar) {
        const cplx* h = &H[ar * m2];
        for (std::size_t u2 = 0; u2 < m2; ++u2) {
          const long d2 = signed_index(u2, m2);
          const auto ad = static_cast<std::size_t>(std::labs(d2));
          if (ad >= k2.size()) continue;
          Jp[(ar * A + a2) * R + residue(d2)] += w2 * k2[ad] * h[u2];
        }
      }
    }
  }
  std::vector<cplx> J(block, 0.0);
  for (const auto& Jp : Jpart) {
    for (std::size_t x = 0; x < block; ++x) J[x] += Jp[x];
  }

  double best = 0.0;
  for (std::size_t a1 = 0; a1 < A; ++a1) {
    for (std::size_t a2 = 0; a2 < A; ++a2) {
      const double wfac = std::pow(1.0 - wr[a1], alpha) * std::pow(1.0 - wr[a2], alpha);
      for (std::size_t l1 = 0; l1 < R; ++l1) {
        for (std::size_t l2 = 0; l2 < R; ++l2) {
          cplx acc = 0.0;
          for (std::size_t r1 = 0; r1 < R; ++r1) {
            for (std::size_t r2 = 0; r2 < R; ++r2) {
              const std::size_t ph = (r1 * l1 + r2 * l2) % R;
              acc += J[((a1 * R + r1) * A + a2) * R + r2] *
                     std::polar(1.0, -kTwoPi * static_cast<double>(ph) / static_cast<double>(R));
            }
          }
          best = std::max(best, acc.real() * wfac);
        }
      }
    }
  }
  return std::pow(best, 1.0 / q);
}

double carleson(SeriesView f, double q, double s, double alpha, const Ctx& c) {
  if (f.is_product()) {
    double v = 1.0;
    for (const auto& g : f.product().factors()) v *= carleson_1d(g, q, s, alpha, c);
    return v;
  }
  if (f.dim() == 1) return carleson_1d(f.dense(), q, s, alpha, c);
  if (f.dim() == 2) return carleson_2d(f.dense(), q, s, alpha, c);
  throw FeasibilityError("Carleson norms are limited to n <= 2");
}

// ---------------------------------------------------------------------------
// Driver

struct Scaled {
  Series series;
  double scale;
};

// f / sum|a_k| so every evaluation works with |f| <= 1.
Scaled normalized(SeriesView f) {
  if (f.is_product()) {
    std::vector<CoeffTensor> factors;
    double s = 1.0;
    for (const auto& g : f.product().factors()) {
      const double a = g.abs_sum();
      s *= a;
      factors.push_back(g.scaled(1.0 / a));
    }
    return {ProductSeries(std::move(factors)), s};
  }
  const double a = f.dense().abs_sum();
  return {f.dense().scaled(1.0 / a), a};
}

using Evaluator = std::function<double(SeriesView, const Ctx&)>;

NormResult run(SeriesView f, const NormOptions& opts, const Evaluator& eval) {
  NormResult res;
  res.grid.refine = opts.refine;
  res.grid.angular = sizes_for(f.degrees(), opts.refine);
  if (f.is_zero()) {
    if (opts.estimate_error) res.refine_delta = 0.0;
    return res;
  }
  const Scaled g = normalized(f);
  const SeriesView gv(g.series);
  Ctx c{opts.refine, opts.per_panel, &res.grid};
  std::vector<std::size_t> angular = res.grid.angular;
  res.value = g.scale * eval(gv, c);
  if (res.grid.angular.empty()) res.grid.angular = angular;
  if (!opts.estimate_error) return res;
  for (unsigned extra = 0;; ++extra) {
    GridMeta fine;
    Ctx cf{res.grid.refine + 1, opts.per_panel, &fine};
    const double v1 = g.scale * eval(gv, cf);
    const double denom = std::max(std::abs(v1), std::abs(res.value));
    res.refine_delta = denom > 0.0 ? std::abs(v1 - res.value) / denom : 0.0;
    if (*res.refine_delta <= opts.tolerance || extra == opts.max_extra_levels) break;
    res.value = v1;
    if (fine.angular.empty()) fine.angular = sizes_for(f.degrees(), cf.refine);
    fine.refine = cf.refine;
    res.grid = fine;
  }
  return res;
}

void check_dim(SeriesView f, const SpaceSpec& spec) { validate(spec, f.dim()); }

}  // namespace

double integral_mean(SeriesView f, double p, const RadialPoint& r, unsigned refine) {
  if (!(p > 0.0)) throw ParameterDomainError("p must be positive (or inf)");
  if (r.dim() != f.dim()) throw InputError("radius dimension does not match series dimension");
  if (f.is_zero()) return 0.0;
  const Scaled g = normalized(f);
  return g.scale * mean_at(g.series, p, r.values(), refine);
}

NormResult radial_mixed_norm(SeriesView f, const SpaceSpec& spec, const NormOptions& opts) {
  check_dim(f, spec);
  return std::visit(
      overloaded{
          [&](const space::Apq& s) {
            return run(f, opts, [s](SeriesView g, const Ctx& c) { return apq(g, s.p, s.q, s.weight, c); });
          },
          [&](const space::Bpq& s) {
            return run(f, opts, [s](SeriesView g, const Ctx& c) { return bpq(g, s.p, s.q, s.weight, c); });
          },
          [&](const space::Fpq& s) {
            return run(f, opts, [s](SeriesView g, const Ctx& c) { return fpq(g, s.p, s.q, s.weight, c); });
          },
          [&](const space::Tpq& s) {
            return run(f, opts, [s](SeriesView g, const Ctx& c) { return tpq(g, s.p, s.q, s.weight, c); });
          },
          [&](const space::Mpq& s) {
            return run(f, opts, [s](SeriesView g, const Ctx& c) { return mpq(g, s.p, s.q, s.weight, c); });
          },
          [&](const auto&) -> NormResult {
            throw UnsupportedError(family_name(spec) + " is not a radial mixed norm");
          },
      },
      spec);
}

NormResult weighted_sup_mean(SeriesView f, double p, std::span<const double> weights, bool diagonal,
                             const NormOptions& opts) {
  if (!(p > 0.0)) throw ParameterDomainError("p must be positive (or inf)");
  const std::size_t n = f.dim();
  if (diagonal) {
    if (weights.size() != 1) throw InputError("diagonal mode takes one total weight exponent");
    const double w = weights[0];
    if (!(w >= 0.0)) throw ParameterDomainError("weight exponent must be nonnegative");
    return run(f, opts, [p, w, n](SeriesView g, const Ctx& c) {
      const std::size_t depth = quad::sup_depth(max_degree(g.degrees()));
      std::size_t total = 0;
      for (std::size_t k : g.degrees()) total += k;
      const SupAxis axis{w, w == 0.0, mean_resolution(total)};
      return scalar_sup({axis}, depth, c, [&](const std::vector<double>& r) {
        const std::vector<double> rr(n, r[0]);
        return mean_at(g, p, rr, c.refine);
      });
    });
  }
  const auto w = broadcast(weights, n, "weights");
  for (double x : w) {
    if (!(x >= 0.0)) throw ParameterDomainError("weight exponent must be nonnegative");
  }
  const std::vector<double> pv(n, p);
  return run(f, opts, [pv, w](SeriesView g, const Ctx& c) { return weighted_mean_sup(g, pv, w, c); });
}

NormResult sup_type_norm(SeriesView f, const SpaceSpec& spec, const NormOptions& opts) {
  check_dim(f, spec);
  const std::size_t n = f.dim();
  auto derivative_sup = [&](double order, double weight) {
    const std::vector<double> beta{order};
    const Series d = frac_diff(f, beta);
    const std::vector<double> w(n, weight);
    const std::vector<double> pv(n, kInf);
    return run(d, opts, [pv, w](SeriesView g, const Ctx& c) { return weighted_mean_sup(g, pv, w, c); });
  };
  return std::visit(
      overloaded{
          [&](const space::Hp& s) {
            const std::vector<double> pv(n, s.p), w(n, 0.0);
            return run(f, opts, [pv, w](SeriesView g, const Ctx& c) { return weighted_mean_sup(g, pv, w, c); });
          },
          [&](const space::AInfInf& s) { return derivative_sup(s.order, s.weight); },
          [&](const space::Bloch&) { return derivative_sup(1.0, 1.0); },
          [&](const space::ApInfS& s) {
            const std::vector<double> pv(n, s.p), w(n, s.s);
            return run(f, opts, [pv, w](SeriesView g, const Ctx& c) { return weighted_mean_sup(g, pv, w, c); });
          },
          [&](const space::FpInfS& s) {
            const double w = static_cast<double>(n) * s.s;
            return run(f, opts, [s, w](SeriesView g, const Ctx& c) { return direction_sup_norm(g, s.p, w, c); });
          },
          [&](const space::HvecSub& s) {
            const auto r = resolved(s, n);
            return run(f, opts, [r](SeriesView g, const Ctx& c) { return weighted_mean_sup(g, r.p, r.alpha, c); });
          },
          [&](const space::HvecPlain& s) {
            const auto r = resolved(s, n);
            const std::vector<double> w(n, 0.0);
            return run(f, opts, [r, w](SeriesView g, const Ctx& c) { return weighted_mean_sup(g, r.p, w, c); });
          },
          [&](const auto&) -> NormResult {
            throw UnsupportedError(family_name(spec) + " is not a sup-type norm");
          },
      },
      spec);
}

NormResult area_mixed_norm(SeriesView f, std::span<const double> p, std::span<const double> alpha,
                           const NormOptions& opts) {
  const space::HvecParen spec{std::vector<double>(p.begin(), p.end()), std::vector<double>(alpha.begin(), alpha.end())};
  validate(spec, f.dim());
  const auto r = resolved(spec, f.dim());
  return run(f, opts, [r](SeriesView g, const Ctx& c) { return area_norm(g, r.p, r.alpha, c); });
}

NormResult carleson_bmoa_norm(SeriesView f, double q, double s, double alpha, const NormOptions& opts) {
  validate(space::CarlesonBMOA{q, s, alpha}, f.dim());
  return run(f, opts, [q, s, alpha](SeriesView g, const Ctx& c) { return carleson(g, q, s, alpha, c); });
}

NormResult evaluate_norm(SeriesView f, const SpaceSpec& spec, const NormOptions& opts) {
  return std::visit(overloaded{
                        [&](const space::HvecParen& s) { return area_mixed_norm(f, s.p, s.alpha, opts); },
                        [&](const space::CarlesonBMOA& s) { return carleson_bmoa_norm(f, s.q, s.s, s.alpha, opts); },
                        [&](const space::Apq&) { return radial_mixed_norm(f, spec, opts); },
                        [&](const space::Bpq&) { return radial_mixed_norm(f, spec, opts); },
                        [&](const space::Fpq&) { return radial_mixed_norm(f, spec, opts); },
                        [&](const space::Tpq&) { return radial_mixed_norm(f, spec, opts); },
                        [&](const space::Mpq&) { return radial_mixed_norm(f, spec, opts); },
                        [&](const auto&) { return sup_type_norm(f, spec, opts); },
                    },
                    spec);
}

}  // namespace polydisc
