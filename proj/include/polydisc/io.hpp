#pragma once

// CoeffTensor interchange format:
// {"n": int, "degrees": [int...], "coeffs_re": [float...], "coeffs_im": [float...]}
// row-major, last index fastest.

#include <string>

#include "polydisc/series.hpp"

namespace polydisc::io {

CoeffTensor parse_tensor(const std::string& text);
std::string format_tensor(const CoeffTensor& f);

CoeffTensor read_tensor(const std::string& path);
void write_text(const std::string& path, const std::string& text);

/// %.17g, with "inf" / "-inf" / "nan" spelled out.
std::string number(double x);

}  // namespace polydisc::io
