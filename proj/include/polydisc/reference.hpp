#pragma once

// Serial reference implementations used to validate the parallel kernels.

#include <cstddef>
#include <span>
#include <vector>

#include "polydisc/series.hpp"

namespace polydisc::reference {

/// Grid values by nested Horner evaluation, one point at a time.
std::vector<cplx> torus_values(const CoeffTensor& f, std::span<const double> r, std::span<const std::size_t> m);

/// (mean |v|^p)^{1/p} by a plain serial loop.
double power_mean(std::span<const cplx> v, double p);

}  // namespace polydisc::reference
