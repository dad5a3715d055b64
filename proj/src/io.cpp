#include "polydisc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "polydisc/error.hpp"

namespace polydisc::io {

CoeffTensor parse_tensor(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed tensor JSON: ") + e.what());
  }
  try {
    const auto n = j.at("n").get<std::size_t>();
    const auto degrees = j.at("degrees").get<Degrees>();
    const auto re = j.at("coeffs_re").get<std::vector<double>>();
    std::vector<double> im(re.size(), 0.0);
    if (j.contains("coeffs_im")) im = j.at("coeffs_im").get<std::vector<double>>();
    if (degrees.size() != n) throw InputError("'degrees' must have n entries");
    if (im.size() != re.size()) throw InputError("'coeffs_re' and 'coeffs_im' differ in length");
    std::vector<cplx> c(re.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = cplx(re[i], im[i]);
    return CoeffTensor(degrees, std::move(c));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad tensor field: ") + e.what());
  }
}

std::string format_tensor(const CoeffTensor& f) {
  nlohmann::ordered_json j;
  j["n"] = f.dim();
  j["degrees"] = f.degrees();
  std::vector<double> re, im;
  for (const cplx& c : f.coeffs()) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  j["coeffs_re"] = re;
  j["coeffs_im"] = im;
  return j.dump() + "\n";
}

CoeffTensor read_tensor(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_tensor(ss.str());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

std::string number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace polydisc::io
