#include "polydisc/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "polydisc/error.hpp"

namespace polydisc {

namespace {

std::size_t box_size(const Degrees& degrees) {
  std::size_t total = 1;
  for (std::size_t d : degrees) {
    if (d + 1 > std::numeric_limits<std::size_t>::max() / total) {
      throw FeasibilityError("coefficient box too large");
    }
    total *= d + 1;
  }
  return total;
}

void check_dim(std::size_t n) {
  if (n == 0 || n > kMaxDim) {
    throw InputError("dimension must be between 1 and " + std::to_string(kMaxDim) + ", got " +
                     std::to_string(n));
  }
}

// Multiply a dense tensor entrywise by per-axis factors.
CoeffTensor scale_axes(const CoeffTensor& f, const std::vector<std::vector<cplx>>& axis) {
  const auto strides = f.strides();
  const auto& deg = f.degrees();
  std::vector<cplx> out(f.coeffs().begin(), f.coeffs().end());
  for (std::size_t j = 0; j < f.dim(); ++j) {
    const std::size_t stride = strides[j];
    const std::size_t extent = deg[j] + 1;
    for (std::size_t o = 0; o < out.size(); ++o) {
      out[o] *= axis[j][(o / stride) % extent];
    }
  }
  return CoeffTensor(deg, std::move(out));
}

}  // namespace

std::vector<double> broadcast(std::span<const double> v, std::size_t n, const char* what) {
  if (v.size() == 1) return std::vector<double>(n, v[0]);
  if (v.size() == n) return {v.begin(), v.end()};
  throw InputError(std::string(what) + ": expected 1 or " + std::to_string(n) + " values, got " +
                   std::to_string(v.size()));
}

// ---------------------------------------------------------------------------
// RadialPoint

RadialPoint::RadialPoint(std::vector<double> r) : r_(std::move(r)) {
  check_dim(r_.size());
  for (double x : r_) {
    if (!(x >= 0.0 && x < 1.0)) {
      throw InputError("radius must lie in [0, 1)");
    }
  }
}

RadialPoint RadialPoint::diagonal(std::size_t n, double r) { return RadialPoint(std::vector<double>(n, r)); }

// ---------------------------------------------------------------------------
// CoeffTensor

CoeffTensor::CoeffTensor(Degrees degrees, std::vector<cplx> coeffs)
    : degrees_(std::move(degrees)), coeffs_(std::move(coeffs)) {
  check_dim(degrees_.size());
  if (coeffs_.size() != box_size(degrees_)) {
    throw InputError("coefficient array length " + std::to_string(coeffs_.size()) +
                     " does not match the degree box " + std::to_string(box_size(degrees_)));
  }
  for (const cplx& a : coeffs_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw InputError("non-finite coefficient");
    }
  }
}

CoeffTensor CoeffTensor::zeros(Degrees degrees) {
  const std::size_t n = box_size(degrees);
  return CoeffTensor(std::move(degrees), std::vector<cplx>(n));
}

CoeffTensor CoeffTensor::constant(std::size_t n, cplx c) {
  return CoeffTensor(Degrees(n, 0), std::vector<cplx>{c});
}

CoeffTensor CoeffTensor::monomial(const MultiIndex& k, cplx c) {
  Degrees deg(k.begin(), k.end());
  std::vector<cplx> a(box_size(deg));
  a.back() = c;
  return CoeffTensor(std::move(deg), std::move(a));
}

std::vector<std::size_t> CoeffTensor::strides() const {
  std::vector<std::size_t> s(dim(), 1);
  for (std::size_t j = dim(); j-- > 1;) s[j - 1] = s[j] * (degrees_[j] + 1);
  return s;
}

std::size_t CoeffTensor::offset(std::span<const std::size_t> k) const {
  if (k.size() != dim()) throw InputError("multi-index length does not match dimension");
  std::size_t o = 0;
  for (std::size_t j = 0; j < dim(); ++j) {
    if (k[j] > degrees_[j]) throw InputError("multi-index outside the coefficient box");
    o = o * (degrees_[j] + 1) + k[j];
  }
  return o;
}

MultiIndex CoeffTensor::index_of(std::size_t offset) const {
  MultiIndex k(dim());
  for (std::size_t j = dim(); j-- > 0;) {
    k[j] = offset % (degrees_[j] + 1);
    offset /= degrees_[j] + 1;
  }
  return k;
}

bool CoeffTensor::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const cplx& a) { return a == cplx{}; });
}

double CoeffTensor::abs_sum() const noexcept {
  double s = 0.0;
  for (const cplx& a : coeffs_) s += std::abs(a);
  return s;
}

CoeffTensor CoeffTensor::scaled(cplx lambda) const {
  std::vector<cplx> a(coeffs_.begin(), coeffs_.end());
  for (cplx& x : a) x *= lambda;
  return CoeffTensor(degrees_, std::move(a));
}

CoeffTensor CoeffTensor::rotated(std::span<const double> phi) const {
  const auto ph = broadcast(phi, dim(), "rotation angles");
  std::vector<std::vector<cplx>> axis(dim());
  for (std::size_t j = 0; j < dim(); ++j) {
    axis[j].resize(degrees_[j] + 1);
    for (std::size_t k = 0; k <= degrees_[j]; ++k) {
      axis[j][k] = std::polar(1.0, static_cast<double>(k) * ph[j]);
    }
  }
  return scale_axes(*this, axis);
}

// ---------------------------------------------------------------------------
// ProductSeries

ProductSeries::ProductSeries(std::vector<CoeffTensor> factors) : factors_(std::move(factors)) {
  check_dim(factors_.size());
  for (const auto& f : factors_) {
    if (f.dim() != 1) throw InputError("ProductSeries factors must be one-dimensional");
  }
}

Degrees ProductSeries::degrees() const {
  Degrees d;
  for (const auto& f : factors_) d.push_back(f.degrees()[0]);
  return d;
}

bool ProductSeries::is_zero() const noexcept {
  return std::any_of(factors_.begin(), factors_.end(), [](const CoeffTensor& f) { return f.is_zero(); });
}

double ProductSeries::abs_sum() const noexcept {
  double s = 1.0;
  for (const auto& f : factors_) s *= f.abs_sum();
  return s;
}

CoeffTensor ProductSeries::expand() const {
  std::vector<cplx> out{1.0};
  Degrees deg;
  for (const auto& f : factors_) {
    std::vector<cplx> next;
    next.reserve(out.size() * f.size());
    for (const cplx& a : out) {
      for (const cplx& b : f.coeffs()) next.push_back(a * b);
    }
    out = std::move(next);
    deg.push_back(f.degrees()[0]);
  }
  return CoeffTensor(std::move(deg), std::move(out));
}

ProductSeries ProductSeries::scaled(cplx lambda) const {
  auto f = factors_;
  f[0] = f[0].scaled(lambda);
  return ProductSeries(std::move(f));
}

ProductSeries ProductSeries::rotated(std::span<const double> phi) const {
  const auto ph = broadcast(phi, dim(), "rotation angles");
  std::vector<CoeffTensor> f;
  for (std::size_t j = 0; j < dim(); ++j) {
    const double a[1] = {ph[j]};
    f.push_back(factors_[j].rotated(a));
  }
  return ProductSeries(std::move(f));
}

// ---------------------------------------------------------------------------
// SeriesView

SeriesView::SeriesView(const Series& f) noexcept {
  if (const auto* d = std::get_if<CoeffTensor>(&f)) {
    dense_ = d;
  } else {
    product_ = &std::get<ProductSeries>(f);
  }
}

std::size_t SeriesView::dim() const noexcept { return product_ ? product_->dim() : dense_->dim(); }
Degrees SeriesView::degrees() const { return product_ ? product_->degrees() : dense_->degrees(); }
bool SeriesView::is_zero() const noexcept { return product_ ? product_->is_zero() : dense_->is_zero(); }
double SeriesView::abs_sum() const noexcept { return product_ ? product_->abs_sum() : dense_->abs_sum(); }
CoeffTensor SeriesView::to_dense() const { return product_ ? product_->expand() : *dense_; }

// ---------------------------------------------------------------------------
// Fractional differentiation

double gamma_ratio(std::size_t k, double beta) {
  if (!(beta > -1.0)) throw ParameterDomainError("fractional order must exceed -1");
  if (beta == 0.0) return 1.0;
  // Gamma(k+1+beta)/Gamma(k+1) = 1 / tgamma_delta_ratio(k+1, beta)
  const double a = static_cast<double>(k) + 1.0;
  return 1.0 / (boost::math::tgamma_delta_ratio(a, beta) * boost::math::tgamma(beta + 1.0));
}

namespace {

std::vector<cplx> gamma_axis(std::size_t degree, double beta) {
  std::vector<cplx> v(degree + 1);
  for (std::size_t k = 0; k <= degree; ++k) v[k] = gamma_ratio(k, beta);
  return v;
}

void check_orders(std::span<const double> beta) {
  for (double b : beta) {
    if (!(b > -1.0)) throw ParameterDomainError("fractional order must exceed -1, got " + std::to_string(b));
  }
}

}  // namespace

CoeffTensor frac_diff(const CoeffTensor& f, std::span<const double> beta) {
  const auto b = broadcast(beta, f.dim(), "beta");
  check_orders(b);
  std::vector<std::vector<cplx>> axis;
  for (std::size_t j = 0; j < f.dim(); ++j) axis.push_back(gamma_axis(f.degrees()[j], b[j]));
  return scale_axes(f, axis);
}

ProductSeries frac_diff(const ProductSeries& f, std::span<const double> beta) {
  const auto b = broadcast(beta, f.dim(), "beta");
  check_orders(b);
  std::vector<CoeffTensor> out;
  for (std::size_t j = 0; j < f.dim(); ++j) {
    const double bj[1] = {b[j]};
    out.push_back(frac_diff(f.factor(j), bj));
  }
  return ProductSeries(std::move(out));
}

Series frac_diff(SeriesView f, std::span<const double> beta) {
  if (f.is_product()) return frac_diff(f.product(), beta);
  return frac_diff(f.dense(), beta);
}

// ---------------------------------------------------------------------------
// Multipliers

MultiplierSeq::MultiplierSeq(Kind kind, cplx c, std::vector<double> params, std::vector<CoeffTensor> table)
    : kind_(kind), constant_(c), params_(std::move(params)), table_(std::move(table)) {}

MultiplierSeq MultiplierSeq::constant(cplx c) { return MultiplierSeq(Kind::Constant, c, {}, {}); }

MultiplierSeq MultiplierSeq::power_growth(std::vector<double> m) {
  if (m.empty()) throw InputError("power-growth multiplier needs at least one exponent");
  for (double x : m) {
    if (!std::isfinite(x)) throw ParameterDomainError("power-growth exponent must be finite");
  }
  return MultiplierSeq(Kind::PowerGrowth, 1.0, std::move(m), {});
}

MultiplierSeq MultiplierSeq::gamma_ratio(std::vector<double> beta) {
  if (beta.empty()) throw InputError("gamma-ratio multiplier needs at least one order");
  check_orders(beta);
  return MultiplierSeq(Kind::GammaRatio, 1.0, std::move(beta), {});
}

MultiplierSeq MultiplierSeq::tabulated(CoeffTensor table) {
  std::vector<CoeffTensor> t;
  t.push_back(std::move(table));
  return MultiplierSeq(Kind::Tabulated, 1.0, {}, std::move(t));
}

double MultiplierSeq::param(std::size_t axis) const {
  if (params_.size() == 1) return params_[0];
  if (axis >= params_.size()) throw InputError("multiplier has fewer parameters than the dimension");
  return params_[axis];
}

cplx MultiplierSeq::operator()(std::span<const std::size_t> k) const {
  switch (kind_) {
    case Kind::Constant:
      return constant_;
    case Kind::PowerGrowth: {
      double v = 1.0;
      for (std::size_t j = 0; j < k.size(); ++j) v *= std::pow(static_cast<double>(k[j]) + 1.0, param(j));
      return v;
    }
    case Kind::GammaRatio: {
      double v = 1.0;
      for (std::size_t j = 0; j < k.size(); ++j) v *= polydisc::gamma_ratio(k[j], param(j));
      return v;
    }
    case Kind::Tabulated:
      return table_[0].at(k);
  }
  return 0.0;
}

std::vector<cplx> MultiplierSeq::axis_factor(std::size_t axis, std::size_t degree) const {
  std::vector<cplx> v(degree + 1);
  switch (kind_) {
    case Kind::Constant:
      std::fill(v.begin(), v.end(), axis == 0 ? constant_ : cplx(1.0));
      break;
    case Kind::PowerGrowth:
      for (std::size_t k = 0; k <= degree; ++k) v[k] = std::pow(static_cast<double>(k) + 1.0, param(axis));
      break;
    case Kind::GammaRatio:
      return gamma_axis(degree, param(axis));
    case Kind::Tabulated:
      throw InputError("tabulated multipliers are not separable");
  }
  return v;
}

std::string MultiplierSeq::describe() const {
  std::ostringstream os;
  auto list = [&os](const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  };
  switch (kind_) {
    case Kind::Constant:
      os << "constant(" << constant_.real();
      if (constant_.imag() != 0.0) os << (constant_.imag() > 0 ? "+" : "") << constant_.imag() << "i";
      os << ")";
      break;
    case Kind::PowerGrowth:
      os << "power_growth(";
      list(params_);
      os << ")";
      break;
    case Kind::GammaRatio:
      os << "gamma_ratio(";
      list(params_);
      os << ")";
      break;
    case Kind::Tabulated:
      os << "tabulated(n=" << table_[0].dim() << ")";
      break;
  }
  return os.str();
}

CoeffTensor apply_multiplier(const MultiplierSeq& c, const CoeffTensor& f) {
  if (c.separable()) {
    std::vector<std::vector<cplx>> axis;
    for (std::size_t j = 0; j < f.dim(); ++j) axis.push_back(c.axis_factor(j, f.degrees()[j]));
    return scale_axes(f, axis);
  }
  std::vector<cplx> out(f.coeffs().begin(), f.coeffs().end());
  for (std::size_t o = 0; o < out.size(); ++o) {
    const auto k = f.index_of(o);
    out[o] *= c(k);
  }
  return CoeffTensor(f.degrees(), std::move(out));
}

Series apply_multiplier(const MultiplierSeq& c, SeriesView f) {
  if (!f.is_product()) return apply_multiplier(c, f.dense());
  if (!c.separable()) return apply_multiplier(c, f.to_dense());
  std::vector<CoeffTensor> out;
  for (std::size_t j = 0; j < f.dim(); ++j) {
    const auto& fj = f.product().factor(j);
    auto a = c.axis_factor(j, fj.degrees()[0]);
    for (std::size_t k = 0; k < a.size(); ++k) a[k] *= fj.coeffs()[k];
    out.emplace_back(fj.degrees(), std::move(a));
  }
  return ProductSeries(std::move(out));
}

// ---------------------------------------------------------------------------
// Kernel family

namespace {

std::size_t policy_degree(double R) {
  return static_cast<std::size_t>(std::ceil(kTruncationConstant / (1.0 - R)));
}

// Upper bound on sum_{k > K} c_k R^k relative to sum_{k <= K} c_k R^k, using
// the term ratio R (k + beta + 1) / (k + 1), which is monotone in k.
double tail_ratio(double R, double beta, std::size_t K, double head) {
  if (R == 0.0) return 0.0;
  const double next = gamma_ratio(K + 1, beta) * std::pow(R, static_cast<double>(K + 1));
  const double Kd = static_cast<double>(K);
  const double rho = beta >= 0.0 ? R * (Kd + beta + 2.0) / (Kd + 2.0) : R;
  if (rho >= 1.0) return std::numeric_limits<double>::infinity();
  return next / (1.0 - rho) / head;
}

std::vector<cplx> kernel_axis(double R, double beta, std::size_t K) {
  std::vector<cplx> v(K + 1);
  for (std::size_t k = 0; k <= K; ++k) {
    v[k] = gamma_ratio(k, beta) * std::pow(R, static_cast<double>(k));
  }
  return v;
}

std::size_t sufficient_degree(double R, double beta, std::size_t start) {
  std::size_t K = std::max<std::size_t>(start, 1);
  for (int iter = 0; iter < 40; ++iter) {
    const auto v = kernel_axis(R, beta, K);
    double head = 0.0;
    for (const auto& x : v) head += x.real();
    if (tail_ratio(R, beta, K, head) <= kTailTolerance) return K;
    K *= 2;
  }
  throw FeasibilityError("no feasible kernel truncation");
}

}  // namespace

Degrees kernel_degrees(const RadialPoint& R) {
  Degrees d;
  for (double r : R.values()) d.push_back(policy_degree(r));
  return d;
}

ProductSeries kernel_factors(const RadialPoint& R, std::span<const double> beta, const Degrees& degrees) {
  const std::size_t n = R.dim();
  const auto b = broadcast(beta, n, "beta");
  check_orders(b);
  if (degrees.size() != n) throw InputError("kernel degrees must have one entry per coordinate");

  Degrees recommended(n);
  bool short_box = false;
  for (std::size_t j = 0; j < n; ++j) {
    recommended[j] = std::max(policy_degree(R[j]), degrees[j]);
    if (degrees[j] < policy_degree(R[j])) short_box = true;
  }
  if (short_box) {
    for (std::size_t j = 0; j < n; ++j) recommended[j] = sufficient_degree(R[j], b[j], recommended[j]);
    throw TruncationInsufficient("kernel truncation below policy minimum", recommended);
  }

  std::vector<CoeffTensor> factors;
  bool tail_fail = false;
  for (std::size_t j = 0; j < n; ++j) {
    auto v = kernel_axis(R[j], b[j], degrees[j]);
    double head = 0.0;
    for (const auto& x : v) head += x.real();
    if (tail_ratio(R[j], b[j], degrees[j], head) > kTailTolerance / static_cast<double>(n)) {
      tail_fail = true;
      recommended[j] = sufficient_degree(R[j], b[j], 2 * degrees[j]);
    }
    factors.emplace_back(Degrees{degrees[j]}, std::move(v));
  }
  if (tail_fail) throw TruncationInsufficient("kernel tail exceeds tolerance", recommended);
  return ProductSeries(std::move(factors));
}

ProductSeries kernel_factors(const RadialPoint& R, std::span<const double> beta) {
  const auto b = broadcast(beta, R.dim(), "beta");
  Degrees d;
  for (std::size_t j = 0; j < R.dim(); ++j) d.push_back(sufficient_degree(R[j], b[j], policy_degree(R[j])));
  return kernel_factors(R, b, d);
}

CoeffTensor kernel_coeffs(const RadialPoint& R, std::span<const double> beta, const Degrees& degrees) {
  return kernel_factors(R, beta, degrees).expand();
}

CoeffTensor kernel_coeffs(const RadialPoint& R, std::span<const double> beta) {
  return kernel_factors(R, beta).expand();
}

// ---------------------------------------------------------------------------

double parseval_mean(SeriesView f, const RadialPoint& r) {
  if (r.dim() != f.dim()) throw InputError("radius dimension does not match series dimension");
  if (f.is_product()) {
    double v = 1.0;
    for (std::size_t j = 0; j < f.dim(); ++j) {
      v *= parseval_mean(f.product().factor(j), RadialPoint({r[j]}));
    }
    return v;
  }
  const auto& g = f.dense();
  std::vector<std::vector<double>> pw(g.dim());
  for (std::size_t j = 0; j < g.dim(); ++j) {
    pw[j].resize(g.degrees()[j] + 1);
    for (std::size_t k = 0; k < pw[j].size(); ++k) pw[j][k] = std::pow(r[j], static_cast<double>(k));
  }
  const auto strides = g.strides();
  std::vector<double> t(g.size());
  double peak = 0.0;
  for (std::size_t o = 0; o < g.size(); ++o) {
    double w = std::abs(g.coeffs()[o]);
    for (std::size_t j = 0; j < g.dim(); ++j) w *= pw[j][(o / strides[j]) % (g.degrees()[j] + 1)];
    t[o] = w;
    peak = std::max(peak, w);
  }
  if (peak == 0.0) return 0.0;
  double s = 0.0;
  for (double w : t) s += (w / peak) * (w / peak);
  return peak * std::sqrt(s);
}

}  // namespace polydisc
