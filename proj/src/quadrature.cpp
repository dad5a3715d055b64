#include "polydisc/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "polydisc/error.hpp"

namespace polydisc::quad {

namespace {

// Golub-Welsch for the Jacobi weight (1 - x)^a on [-1, 1], mapped to [0, 1].
Rule jacobi_unit(std::size_t count, double a) {
  if (count == 0) throw InputError("quadrature rule needs at least one node");
  if (!(a > -1.0)) throw ParameterDomainError("Jacobi exponent must exceed -1");
  const double b = 0.0;
  Eigen::VectorXd diag(static_cast<Eigen::Index>(count));
  Eigen::VectorXd off(static_cast<Eigen::Index>(count > 1 ? count - 1 : 0));
  for (std::size_t i = 0; i < count; ++i) {
    const double k = static_cast<double>(i);
    const double s = 2.0 * k + a + b;
    diag[static_cast<Eigen::Index>(i)] = i == 0 ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
  }
  for (std::size_t i = 1; i < count; ++i) {
    const double k = static_cast<double>(i);
    const double s = 2.0 * k + a + b;
    double beta = 0.0;
    if (i == 1) {
      beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) * (2.0 + a + b) * (3.0 + a + b));
    } else {
      beta = 4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0));
    }
    off[static_cast<Eigen::Index>(i - 1)] = std::sqrt(beta);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  const double mu0 = std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) -
                              std::lgamma(a + b + 2.0));
  const double scale = std::pow(2.0, -(a + 1.0));
  Rule r;
  r.nodes.resize(count);
  r.weights.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const double x = solver.eigenvalues()[ii];
    const double v = solver.eigenvectors()(0, ii);
    r.nodes[i] = 0.5 * (x + 1.0);
    r.weights[i] = scale * mu0 * v * v;
  }
  return r;
}

}  // namespace

Rule gauss_legendre(std::size_t count) { return jacobi_unit(count, 0.0); }

Rule gauss_jacobi(std::size_t count, double a) { return jacobi_unit(count, a); }

Rule weighted_radial(double w, std::size_t levels, std::size_t per_panel) {
  if (!(w > 0.0)) throw ParameterDomainError("radial weight exponent must be positive");
  const Rule gl = gauss_legendre(per_panel);
  const Rule gj = gauss_jacobi(per_panel, w - 1.0);
  Rule out;
  double lo = 0.0;
  for (std::size_t l = 1; l <= levels; ++l) {
    const double hi = 1.0 - std::ldexp(1.0, -static_cast<int>(l));
    const double width = hi - lo;
    for (std::size_t i = 0; i < gl.size(); ++i) {
      const double R = lo + width * gl.nodes[i];
      out.nodes.push_back(R);
      out.weights.push_back(width * gl.weights[i] * std::pow(1.0 - R, w - 1.0));
    }
    lo = hi;
  }
  const double h = 1.0 - lo;
  const double hw = std::pow(h, w);
  for (std::size_t i = 0; i < gj.size(); ++i) {
    out.nodes.push_back(lo + h * gj.nodes[i]);
    out.weights.push_back(hw * gj.weights[i]);
  }
  return out;
}

std::size_t panel_levels(std::size_t degree) {
  const auto bits = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(degree) + 1.0)));
  return std::max<std::size_t>(3, bits > 1 ? bits - 1 : 0);
}

std::size_t next_smooth(std::size_t n) {
  const std::size_t target = (n + 15) / 16;
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::size_t a = 1; a < best; a *= 2) {
    for (std::size_t b = a; b < best; b *= 3) {
      for (std::size_t c = b; c < best; c *= 5) {
        if (c >= target) {
          best = c;
          break;
        }
      }
    }
  }
  return 16 * best;
}

std::size_t angular_size(std::size_t degree, unsigned refine, std::size_t minimum) {
  const std::size_t base = next_smooth(std::max<std::size_t>(4 * (degree + 1), minimum));
  return base << refine;
}

std::size_t sup_depth(std::size_t degree) {
  const auto bits = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(degree) + 1.0)));
  return std::max<std::size_t>(12, bits + 4);
}

std::vector<double> sup_radii(std::size_t depth) {
  std::vector<double> r;
  for (std::size_t j = 0; j <= depth; ++j) r.push_back(1.0 - std::ldexp(1.0, -static_cast<int>(j)));
  return r;
}

}  // namespace polydisc::quad
