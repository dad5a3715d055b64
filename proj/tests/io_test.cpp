#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "polydisc/error.hpp"
#include "polydisc/io.hpp"

using namespace polydisc;

TEST_SUITE("io") {
  TEST_CASE("tensor JSON round trip") {
    const CoeffTensor f({1, 2}, {cplx(1, 0.1), 2, cplx(0, -3), 1e-300, cplx(0.1, 0.7), 6});
    const auto g = io::parse_tensor(io::format_tensor(f));
    CHECK(g.degrees() == f.degrees());
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(g.coeffs()[i] == f.coeffs()[i]);
  }

  TEST_CASE("imaginary parts are optional") {
    const auto f = io::parse_tensor(R"({"n": 1, "degrees": [2], "coeffs_re": [1, 0, 3]})");
    CHECK(f.coeffs()[2] == cplx(3, 0));
  }

  TEST_CASE("malformed input") {
    CHECK_THROWS_AS(io::parse_tensor("{"), InputError);
    CHECK_THROWS_AS(io::parse_tensor(R"({"n": 2, "degrees": [2], "coeffs_re": [1, 0, 3]})"), InputError);
    CHECK_THROWS_AS(io::parse_tensor(R"({"n": 1, "degrees": [3], "coeffs_re": [1, 0, 3]})"), InputError);
    CHECK_THROWS_AS(io::parse_tensor(R"({"n": 1, "degrees": [1], "coeffs_re": [1, 0], "coeffs_im": [0]})"),
                    InputError);
    CHECK_THROWS_AS(io::read_tensor("/nonexistent/f.json"), InputError);
  }

  TEST_CASE("files") {
    const auto path = (std::filesystem::temp_directory_path() / "polydisc_io_test.json").string();
    const auto f = CoeffTensor::monomial({2, 1}, cplx(0.5, -0.25));
    io::write_text(path, io::format_tensor(f));
    CHECK(io::read_tensor(path).at(std::vector<std::size_t>{2, 1}) == cplx(0.5, -0.25));
    std::filesystem::remove(path);
  }

  TEST_CASE("number formatting") {
    CHECK(io::number(0.1) == "0.10000000000000001");
    CHECK(io::number(INFINITY) == "inf");
    CHECK(io::number(-INFINITY) == "-inf");
    CHECK(io::number(NAN) == "nan");
  }
}
