#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "polydisc/io.hpp"

using namespace polydisc;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp(const std::string& name) { return (std::filesystem::temp_directory_path() / name).string(); }

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("norm of a tensor file") {
    const auto path = temp("polydisc_cli_one.json");
    io::write_text(path, io::format_tensor(CoeffTensor::constant(1, 1.0)));
    const auto r = run({"norm", "--space", "Apq", "--p", "2", "--q", "2", "--alpha", "1", "--in", path});
    CHECK(r.code == 0);
    CHECK(r.out.find("# version: ") != std::string::npos);
    CHECK(r.out.find("# params.space: ") != std::string::npos);
    CHECK(r.out.find("family,value,") != std::string::npos);
    // f = 1 in A^{2,2}_1 has norm 2^{-1/2}.
    CHECK(r.out.find("Apq,0.70710678118654") != std::string::npos);
  }

  TEST_CASE("usage errors") {
    const auto missing = run({"norm", "--space", "Apq"});
    CHECK(missing.code == 1);
    CHECK(missing.err.find("--in") != std::string::npos);
    CHECK(run({"norm", "--space", "Apq", "--bogus", "1", "--in", "x"}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    const auto bad_file = run({"norm", "--space", "Hp", "--in", temp("polydisc_absent.json")});
    CHECK(bad_file.code == 1);
    CHECK(bad_file.err.find("cannot open") != std::string::npos);
    CHECK(run({"norm", "--space", "Nope", "--in", temp("polydisc_cli_one.json")}).code == 1);
    CHECK(run({"kernel-fit", "--space", "Hp", "--depth", "20"}).code == 1);
  }

  TEST_CASE("kernel fit report") {
    const auto r = run({"kernel-fit", "--space", "Hp", "--s", "2", "--beta", "1", "--depth", "10"});
    REQUIRE(r.code == 0);
    const auto ls = lines(r.out);
    std::size_t header = 0;
    while (header < ls.size() && ls[header].rfind("#", 0) == 0) ++header;
    REQUIRE(header < ls.size());
    CHECK(ls[header] == "R,norm,log_ratio,fitted,predicted");
    CHECK(ls.size() - header - 1 == 9);
    const auto last = ls.back();
    const auto c3 = last.find(',', last.find(',', last.find(',') + 1) + 1);
    const double fitted = std::stod(last.substr(c3 + 1));
    CHECK(fitted == doctest::Approx(1.5).epsilon(0.1 / 1.5));
    CHECK(last.substr(last.rfind(',') + 1) == "1.5");
  }

  TEST_CASE("JSON mirrors CSV") {
    const auto r = run({"kernel-fit", "--space", "Hp", "--s", "2", "--beta", "1", "--depth", "8", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["command"] == "kernel-fit");
    CHECK(j["rows"].size() == 7);
    CHECK(j["rows"][0].contains("log_ratio"));
    CHECK(j["fit"]["status"].is_string());
  }

  TEST_CASE("mult-check exit codes") {
    CHECK(run({"mult-check", "--theorem", "T1.1", "--gamma", "1", "--s", "0.5", "--beta", "1", "--family", "constant"})
              .code == 0);
    const auto div = run({"mult-check", "--theorem", "T1.1", "--gamma", "1", "--s", "0.5", "--beta", "1", "--family",
                          "power", "--power", "10", "--depth", "10"});
    CHECK(div.code == 2);
    CHECK(div.out.find("# result.verdict: diverging") != std::string::npos);
    CHECK(div.out.find("necessary-condition only") != std::string::npos);
    CHECK(run({"mult-check", "--theorem", "T1.2", "--v", "5", "--family", "constant"}).code == 1);
  }

  TEST_CASE("gen and --out") {
    const auto path = temp("polydisc_cli_gen.json");
    const auto r = run({"gen", "--family", "kernel", "--R", "0.5", "--beta", "1", "--out", path});
    CHECK(r.code == 0);
    const auto f = io::read_tensor(path);
    CHECK(f.degrees()[0] == 100);
    CHECK(f.coeffs()[3].real() == doctest::Approx(4 * 0.125));
    const auto report = temp("polydisc_cli_norm.csv");
    const auto n = run({"norm", "--space", "Hp", "--p", "2", "--in", path, "--out", report});
    CHECK(n.code == 0);
    CHECK(n.out.find("=") != std::string::npos);
    std::ifstream in(report);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str().rfind("# tool: polydisc", 0) == 0);
  }

  TEST_CASE("identical runs give identical reports") {
    const std::vector<std::string> args{"embed-probe", "--pair", "Fpq/Apq", "--depth", "6", "--random", "3",
                                        "--seed", "9"};
    const auto a = run(args);
    const auto b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
}
