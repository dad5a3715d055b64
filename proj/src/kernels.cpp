#include "polydisc/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <memory>
#include <numbers>

#include <Eigen/Dense>
#include <fftw3.h>

#include "polydisc/error.hpp"

namespace polydisc::kernels {

namespace {

constexpr std::size_t kBlock = 4096;

class PlanCache {
 public:
  fftw_plan get(const std::vector<int>& dims, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(dims, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::size_t total = 1;
    for (int d : dims) total *= static_cast<std::size_t>(d);
    auto* scratch = fftw_alloc_complex(total);
    fftw_plan plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), scratch, scratch, sign, FFTW_ESTIMATE);
    fftw_free(scratch);
    plans_.emplace(std::move(key), plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<std::vector<int>, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

struct FftwDeleter {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};

// One plan for SIMD-aligned memory; other buffers go through an aligned copy,
// so results never depend on where the allocator put them.
void run_fft(std::vector<cplx>& buf, std::span<const std::size_t> m, int sign) {
  std::vector<int> dims(m.begin(), m.end());
  fftw_plan plan = plan_cache().get(dims, sign);
  auto* data = reinterpret_cast<fftw_complex*>(buf.data());
  if (fftw_alignment_of(reinterpret_cast<double*>(data)) == 0) {
    fftw_execute_dft(plan, data, data);
    return;
  }
  thread_local std::unique_ptr<fftw_complex, FftwDeleter> aligned;
  thread_local std::size_t capacity = 0;
  if (capacity < buf.size()) {
    aligned.reset(fftw_alloc_complex(buf.size()));
    capacity = buf.size();
  }
  auto* tmp = reinterpret_cast<cplx*>(aligned.get());
  std::copy(buf.begin(), buf.end(), tmp);
  fftw_execute_dft(plan, aligned.get(), aligned.get());
  std::copy(tmp, tmp + buf.size(), buf.begin());
}

std::vector<double> powers(double r, std::size_t degree) {
  std::vector<double> s(degree + 1);
  s[0] = 1.0;
  for (std::size_t k = 1; k <= degree; ++k) s[k] = s[k - 1] * r;
  return s;
}

void check_radii(const CoeffTensor& f, std::span<const double> r) {
  if (r.size() != f.dim()) throw InputError("radius dimension does not match series dimension");
  for (double x : r) {
    if (!(x >= 0.0 && x <= 1.0)) throw InputError("evaluation radius outside [0, 1]");
  }
}

// Calls fn(offset, k) for every multi-index of the box, in storage order.
template <class Fn>
void for_each_index(const Degrees& deg, Fn&& fn) {
  const std::size_t n = deg.size();
  std::vector<std::size_t> k(n, 0);
  std::size_t offset = 0;
  while (true) {
    fn(offset, k);
    ++offset;
    std::size_t j = n;
    while (j-- > 0) {
      if (++k[j] <= deg[j]) break;
      k[j] = 0;
      if (j == 0) return;
    }
  }
}

struct Derivs {
  cplx value;
  std::vector<cplx> grad;
  std::vector<cplx> hess;  // n x n row-major
};

Derivs derivatives(const CoeffTensor& f, const std::vector<std::vector<double>>& pw, std::span<const double> theta) {
  const std::size_t n = f.dim();
  std::vector<std::vector<cplx>> e(n);
  for (std::size_t j = 0; j < n; ++j) {
    e[j].resize(pw[j].size());
    for (std::size_t k = 0; k < pw[j].size(); ++k) {
      e[j][k] = pw[j][k] * std::polar(1.0, static_cast<double>(k) * theta[j]);
    }
  }
  Derivs d{0.0, std::vector<cplx>(n), std::vector<cplx>(n * n)};
  const auto coeffs = f.coeffs();
  for_each_index(f.degrees(), [&](std::size_t o, const std::vector<std::size_t>& k) {
    if (coeffs[o] == cplx{}) return;
    cplx t = coeffs[o];
    for (std::size_t j = 0; j < n; ++j) t *= e[j][k[j]];
    d.value += t;
    for (std::size_t j = 0; j < n; ++j) {
      const double kj = static_cast<double>(k[j]);
      d.grad[j] += cplx(0.0, kj) * t;
      for (std::size_t l = 0; l < n; ++l) d.hess[j * n + l] -= kj * static_cast<double>(k[l]) * t;
    }
  });
  return d;
}

// Newton ascent on |f|^2 from a grid point; returns the best |f|^2 found.
double polish(const CoeffTensor& f, const std::vector<std::vector<double>>& pw, std::vector<double> theta,
              std::span<const std::size_t> m) {
  const std::size_t n = f.dim();
  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < n; ++j) {
    if (f.degrees()[j] > 0) active.push_back(j);
  }
  Derivs d = derivatives(f, pw, theta);
  double F = std::norm(d.value);
  if (active.empty()) return F;
  const auto na = static_cast<Eigen::Index>(active.size());
  for (int iter = 0; iter < 40; ++iter) {
    Eigen::VectorXd g(na);
    Eigen::MatrixXd H(na, na);
    for (Eigen::Index a = 0; a < na; ++a) {
      const std::size_t j = active[static_cast<std::size_t>(a)];
      g[a] = 2.0 * std::real(std::conj(d.value) * d.grad[j]);
      for (Eigen::Index b = 0; b < na; ++b) {
        const std::size_t l = active[static_cast<std::size_t>(b)];
        H(a, b) = 2.0 * std::real(std::conj(d.grad[l]) * d.grad[j] + std::conj(d.value) * d.hess[j * n + l]);
      }
    }
    Eigen::VectorXd step(na);
    Eigen::LLT<Eigen::MatrixXd> llt(-H);
    if (llt.info() == Eigen::Success) {
      step = llt.solve(g);
    } else {
      for (Eigen::Index a = 0; a < na; ++a) {
        const double h = std::numbers::pi / static_cast<double>(m[active[static_cast<std::size_t>(a)]]);
        step[a] = g[a] > 0 ? 0.5 * h : (g[a] < 0 ? -0.5 * h : 0.0);
      }
    }
    for (Eigen::Index a = 0; a < na; ++a) {
      const double h = std::numbers::pi / static_cast<double>(m[active[static_cast<std::size_t>(a)]]);
      step[a] = std::clamp(step[a], -h, h);
    }
    if (step.cwiseAbs().maxCoeff() < 1e-15) break;
    bool improved = false;
    for (int halving = 0; halving < 12 && !improved; ++halving) {
      std::vector<double> trial = theta;
      for (Eigen::Index a = 0; a < na; ++a) trial[active[static_cast<std::size_t>(a)]] += step[a];
      Derivs dt = derivatives(f, pw, trial);
      const double Ft = std::norm(dt.value);
      if (Ft > F) {
        theta = std::move(trial);
        d = std::move(dt);
        F = Ft;
        improved = true;
      } else {
        step *= 0.5;
      }
    }
    if (!improved) break;
  }
  return F;
}

}  // namespace

std::vector<cplx> torus_values(const CoeffTensor& f, std::span<const double> r, std::span<const std::size_t> m) {
  check_radii(f, r);
  if (m.size() != f.dim()) throw InputError("angular grid dimension does not match series dimension");
  const std::size_t n = f.dim();
  std::size_t total = 1;
  for (std::size_t mj : m) {
    if (mj == 0) throw InputError("angular grid size must be positive");
    total *= mj;
  }
  std::vector<std::size_t> gstride(n, 1);
  for (std::size_t j = n; j-- > 1;) gstride[j - 1] = gstride[j] * m[j];
  std::vector<std::vector<double>> pw(n);
  std::vector<std::vector<std::size_t>> fold(n);
  for (std::size_t j = 0; j < n; ++j) {
    pw[j] = powers(r[j], f.degrees()[j]);
    fold[j].resize(f.degrees()[j] + 1);
    for (std::size_t k = 0; k <= f.degrees()[j]; ++k) fold[j][k] = (k % m[j]) * gstride[j];
  }
  std::vector<cplx> buf(total);
  const auto coeffs = f.coeffs();
  if (n == 1) {
    for (std::size_t k = 0; k < coeffs.size(); ++k) buf[fold[0][k]] += coeffs[k] * pw[0][k];
  } else {
    for_each_index(f.degrees(), [&](std::size_t o, const std::vector<std::size_t>& k) {
      double s = 1.0;
      std::size_t target = 0;
      for (std::size_t j = 0; j < n; ++j) {
        s *= pw[j][k[j]];
        target += fold[j][k[j]];
      }
      buf[target] += coeffs[o] * s;
    });
  }
  run_fft(buf, m, FFTW_BACKWARD);
  return buf;
}

std::vector<cplx> diagonal_values(const CoeffTensor& f, std::span<const double> r, std::size_t m) {
  check_radii(f, r);
  if (m == 0) throw InputError("angular grid size must be positive");
  const std::size_t n = f.dim();
  std::vector<std::vector<double>> pw(n);
  for (std::size_t j = 0; j < n; ++j) pw[j] = powers(r[j], f.degrees()[j]);
  std::vector<cplx> buf(m);
  const auto coeffs = f.coeffs();
  for_each_index(f.degrees(), [&](std::size_t o, const std::vector<std::size_t>& k) {
    double s = 1.0;
    std::size_t total = 0;
    for (std::size_t j = 0; j < n; ++j) {
      s *= pw[j][k[j]];
      total += k[j];
    }
    buf[total % m] += coeffs[o] * s;
  });
  const std::size_t dims[1] = {m};
  run_fft(buf, dims, FFTW_BACKWARD);
  return buf;
}

void fourier_coefficients(std::vector<cplx>& samples, std::span<const std::size_t> m) {
  std::size_t total = 1;
  for (std::size_t mj : m) total *= mj;
  if (total != samples.size()) throw InputError("sample count does not match grid");
  run_fft(samples, m, FFTW_FORWARD);
  const double inv = 1.0 / static_cast<double>(total);
  for (cplx& x : samples) x *= inv;
}

double blocked_sum(std::span<const double> v) {
  const std::size_t blocks = (v.size() + kBlock - 1) / kBlock;
  if (blocks <= 1) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = b * kBlock;
    const std::size_t hi = std::min(v.size(), lo + kBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    partial[b] = s;
  }
  double s = 0.0;
  for (double x : partial) s += x;
  return s;
}

namespace {

// Fixed-order blocked sum of fn(v[i]).
template <class Fn>
double blocked_map_sum(std::span<const double> v, Fn fn) {
  const std::size_t blocks = (v.size() + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static) if (blocks > 1)
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = b * kBlock;
    const std::size_t hi = std::min(v.size(), lo + kBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += fn(v[i]);
    partial[b] = s;
  }
  double s = 0.0;
  for (double x : partial) s += x;
  return s;
}

// (mean of (x / peak)^e)^{1/e} * peak for nonnegative samples x.
double scaled_mean(std::span<const double> x, double e) {
  const double peak = *std::max_element(x.begin(), x.end());
  if (peak == 0.0) return 0.0;
  if (std::isinf(e)) return peak;
  const double inv = 1.0 / peak;
  const double sum = blocked_map_sum(x, [inv, e](double y) { return positive_pow(y * inv, e); });
  return peak * std::pow(sum / static_cast<double>(x.size()), 1.0 / e);
}

}  // namespace

double power_mean(std::span<const double> v, double p) {
  if (v.empty()) throw InputError("empty sample");
  return scaled_mean(v, p);
}

double power_mean(std::span<const cplx> v, double p) {
  if (v.empty()) throw InputError("empty sample");
  // Work with |v|^2 so that no square root is taken unless p needs one.
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = std::norm(v[i]);
  return std::sqrt(scaled_mean(sq, 0.5 * p));
}

double nested_mean(std::span<const double> modulus, std::span<const std::size_t> m, std::span<const double> p) {
  if (m.size() != p.size()) throw InputError("one exponent per grid axis is required");
  std::vector<double> cur(modulus.begin(), modulus.end());
  std::size_t rest = cur.size();
  for (std::size_t j = 0; j < m.size(); ++j) {
    const std::size_t extent = m[j];
    rest /= extent;
    std::vector<double> next(rest);
    std::vector<double> column(extent);
    for (std::size_t r = 0; r < rest; ++r) {
      for (std::size_t t = 0; t < extent; ++t) column[t] = cur[t * rest + r];
      next[r] = power_mean(column, p[j]);
    }
    cur = std::move(next);
  }
  return cur[0];
}

double max_modulus(const CoeffTensor& f, std::span<const double> r, std::span<const std::size_t> m) {
  const auto vals = torus_values(f, r, m);
  const std::size_t n = f.dim();
  std::vector<double> mod(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) mod[i] = std::sqrt(std::norm(vals[i]));
  const double peak = *std::max_element(mod.begin(), mod.end());
  if (peak == 0.0) return 0.0;

  std::vector<std::size_t> gstride(n, 1);
  for (std::size_t j = n; j-- > 1;) gstride[j - 1] = gstride[j] * m[j];
  std::vector<std::pair<double, std::size_t>> cand;
  for (std::size_t o = 0; o < mod.size(); ++o) {
    if (mod[o] < 0.5 * peak) continue;
    bool local = true;
    for (std::size_t j = 0; j < n && local; ++j) {
      const std::size_t t = (o / gstride[j]) % m[j];
      const std::size_t base = o - t * gstride[j];
      const std::size_t up = base + ((t + 1) % m[j]) * gstride[j];
      const std::size_t dn = base + ((t + m[j] - 1) % m[j]) * gstride[j];
      local = mod[o] >= mod[up] && mod[o] >= mod[dn];
    }
    if (local) cand.emplace_back(mod[o], o);
  }
  std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  if (cand.size() > 4) cand.resize(4);

  std::vector<std::vector<double>> pw(n);
  for (std::size_t j = 0; j < n; ++j) pw[j] = powers(r[j], f.degrees()[j]);
  double best = peak * peak;
  for (const auto& c : cand) {
    std::vector<double> theta(n);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t t = (c.second / gstride[j]) % m[j];
      theta[j] = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(m[j]);
    }
    best = std::max(best, polish(f, pw, std::move(theta), m));
  }
  return std::sqrt(best);
}

cplx evaluate(const CoeffTensor& f, std::span<const double> r, std::span<const double> theta) {
  check_radii(f, r);
  std::vector<std::vector<double>> pw(f.dim());
  for (std::size_t j = 0; j < f.dim(); ++j) pw[j] = powers(r[j], f.degrees()[j]);
  return derivatives(f, pw, theta).value;
}

}  // namespace polydisc::kernels
