#pragma once

// Truncated multi-index power series on the unit polydisc U^n and the
// coefficient-space operators acting on them.

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace polydisc {

using cplx = std::complex<double>;

/// Largest ambient dimension supported by tensor operations.
inline constexpr std::size_t kMaxDim = 3;

/// Kernel truncation policy: K_j = ceil(kTruncationConstant / (1 - R_j)).
inline constexpr double kTruncationConstant = 50.0;
/// Accepted ratio between the discarded kernel tail and the retained head.
inline constexpr double kTailTolerance = 1e-9;

using MultiIndex = std::vector<std::size_t>;
using Degrees = std::vector<std::size_t>;

/// Radii r = (r_1, ..., r_n) with 0 <= r_j < 1.
class RadialPoint {
 public:
  explicit RadialPoint(std::vector<double> r);
  static RadialPoint diagonal(std::size_t n, double r);

  std::size_t dim() const noexcept { return r_.size(); }
  double operator[](std::size_t j) const { return r_[j]; }
  std::span<const double> values() const noexcept { return r_; }

 private:
  std::vector<double> r_;
};

/// Coefficients a_k of f(z) = sum_{k <= K} a_k z^k, stored row-major with the
/// last index fastest. Immutable once constructed.
class CoeffTensor {
 public:
  CoeffTensor(Degrees degrees, std::vector<cplx> coeffs);

  static CoeffTensor zeros(Degrees degrees);
  static CoeffTensor constant(std::size_t n, cplx c);
  static CoeffTensor monomial(const MultiIndex& k, cplx c = 1.0);

  std::size_t dim() const noexcept { return degrees_.size(); }
  const Degrees& degrees() const noexcept { return degrees_; }
  std::span<const cplx> coeffs() const noexcept { return coeffs_; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  /// Row-major strides (last axis has stride 1).
  std::vector<std::size_t> strides() const;
  std::size_t offset(std::span<const std::size_t> k) const;
  MultiIndex index_of(std::size_t offset) const;
  cplx at(std::span<const std::size_t> k) const { return coeffs_[offset(k)]; }

  bool is_zero() const noexcept;
  /// sum |a_k|; bounds sup |f| on the closed polydisc.
  double abs_sum() const noexcept;

  CoeffTensor scaled(cplx lambda) const;
  /// a_k -> a_k exp(i k.phi)
  CoeffTensor rotated(std::span<const double> phi) const;

 private:
  Degrees degrees_;
  std::vector<cplx> coeffs_;
};

/// f(z) = f_1(z_1) ... f_n(z_n), kept in factored form. Each factor is a 1-D
/// CoeffTensor. Used for the kernel family, whose dense expansion is too large
/// near the boundary.
class ProductSeries {
 public:
  explicit ProductSeries(std::vector<CoeffTensor> factors);

  std::size_t dim() const noexcept { return factors_.size(); }
  const std::vector<CoeffTensor>& factors() const noexcept { return factors_; }
  const CoeffTensor& factor(std::size_t j) const { return factors_[j]; }
  Degrees degrees() const;
  bool is_zero() const noexcept;
  double abs_sum() const noexcept;

  /// Outer product of the factors.
  CoeffTensor expand() const;
  ProductSeries scaled(cplx lambda) const;
  ProductSeries rotated(std::span<const double> phi) const;

 private:
  std::vector<CoeffTensor> factors_;
};

using Series = std::variant<CoeffTensor, ProductSeries>;

/// Non-owning view of either representation; the referenced object must
/// outlive the view.
class SeriesView {
 public:
  SeriesView(const CoeffTensor& f) noexcept : dense_(&f) {}      // NOLINT
  SeriesView(const ProductSeries& f) noexcept : product_(&f) {}  // NOLINT
  SeriesView(const Series& f) noexcept;                          // NOLINT

  bool is_product() const noexcept { return product_ != nullptr; }
  const CoeffTensor& dense() const { return *dense_; }
  const ProductSeries& product() const { return *product_; }

  std::size_t dim() const noexcept;
  Degrees degrees() const;
  bool is_zero() const noexcept;
  double abs_sum() const noexcept;
  CoeffTensor to_dense() const;

 private:
  const CoeffTensor* dense_ = nullptr;
  const ProductSeries* product_ = nullptr;
};

/// Gamma(k + beta + 1) / (Gamma(beta + 1) Gamma(k + 1)), computed in the log
/// domain so that large k does not overflow.
double gamma_ratio(std::size_t k, double beta);

/// Fractional derivative D^beta; beta has one entry per coordinate or a single
/// entry broadcast to all coordinates. Requires beta_j > -1.
CoeffTensor frac_diff(const CoeffTensor& f, std::span<const double> beta);
ProductSeries frac_diff(const ProductSeries& f, std::span<const double> beta);
Series frac_diff(SeriesView f, std::span<const double> beta);

/// Coefficient multiplier c = {c_k}.
class MultiplierSeq {
 public:
  enum class Kind { Constant, PowerGrowth, GammaRatio, Tabulated };

  static MultiplierSeq constant(cplx c);
  /// c_k = prod_j (k_j + 1)^{m_j}
  static MultiplierSeq power_growth(std::vector<double> m);
  /// c_k = prod_j Gamma(k_j+beta_j+1) / (Gamma(beta_j+1) Gamma(k_j+1))
  static MultiplierSeq gamma_ratio(std::vector<double> beta);
  static MultiplierSeq tabulated(CoeffTensor table);

  Kind kind() const noexcept { return kind_; }
  cplx operator()(std::span<const std::size_t> k) const;
  bool separable() const noexcept { return kind_ != Kind::Tabulated; }
  /// Per-axis factor c^{(axis)}_k for k = 0..degree (separable kinds only).
  std::vector<cplx> axis_factor(std::size_t axis, std::size_t degree) const;
  std::string describe() const;

 private:
  MultiplierSeq(Kind kind, cplx c, std::vector<double> params, std::vector<CoeffTensor> table);

  double param(std::size_t axis) const;

  Kind kind_;
  cplx constant_;
  std::vector<double> params_;
  std::vector<CoeffTensor> table_;  // zero or one element
};

CoeffTensor apply_multiplier(const MultiplierSeq& c, const CoeffTensor& f);
Series apply_multiplier(const MultiplierSeq& c, SeriesView f);

/// Truncation degrees recommended by the policy for the kernel at radii R.
Degrees kernel_degrees(const RadialPoint& R);

/// Coefficients of prod_j (1 - R_j z_j)^{-(beta_j + 1)} truncated at `degrees`.
/// Throws TruncationInsufficient when the truncation is shorter than the
/// policy minimum or the discarded tail exceeds kTailTolerance of the head.
CoeffTensor kernel_coeffs(const RadialPoint& R, std::span<const double> beta, const Degrees& degrees);
CoeffTensor kernel_coeffs(const RadialPoint& R, std::span<const double> beta);
ProductSeries kernel_factors(const RadialPoint& R, std::span<const double> beta, const Degrees& degrees);
ProductSeries kernel_factors(const RadialPoint& R, std::span<const double> beta);

/// Exact M_2(f, r) of the truncated series: (sum |a_k|^2 r^{2k})^{1/2}.
double parseval_mean(SeriesView f, const RadialPoint& r);

/// Broadcast a scalar-or-vector parameter to n coordinates.
std::vector<double> broadcast(std::span<const double> v, std::size_t n, const char* what);

}  // namespace polydisc
