#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "blt/cli.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "blt");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = blt::cli::run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

fs::path scratch() {
  const fs::path p = fs::temp_directory_path() / ("blt_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("bounds table") {
  const Run r = run({"bounds", "--n-max", "8"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 9);
  CHECK(ls[0] == "n,opt_lt_toe,mathias_ub,matousek_lb,bintree,mechanism_maxerr,ratio");
  CHECK(ls[8].rfind("8,", 0) == 0);
  CHECK(ls[8].find(",4,,") != std::string::npos);
  const Run g = run({"bounds", "--n-max", "1000000", "--log-grid", "7"});
  CHECK(g.code == 0);
  CHECK(lines(g.out).size() == 8);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 1);
  CHECK(run({"bounds", "--n-max", "8", "--bogus"}).code == 1);
  CHECK(run({"eval", "--steps", "10"}).code == 1);
  CHECK(run({"eval", "--blt", "/nonexistent.json", "--steps", "10"}).code != 0);
  CHECK(run({"bounds", "--n-max", "100000000"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("identity eval and bad files") {
  const fs::path dir = scratch();
  const fs::path id = dir / "id.json";
  std::ofstream(id) << R"({"degree":0,"theta":[],"theta_hat":[],"n":100,"meta":{"method":"identity","version":1}})";
  const Run r = run({"eval", "--blt", id.string(), "--steps", "100"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["max_err"].get<double>() == doctest::Approx(10.0));

  const fs::path bad = dir / "bad.json";
  std::ofstream(bad) << R"({"degree":2,"theta":[0.5],"theta_hat":[0.6],"n":10,"meta":{"method":"opt","version":1}})";
  CHECK(run({"eval", "--blt", bad.string(), "--steps", "10"}).code == 1);
  std::ofstream(bad) << "not json";
  CHECK(run({"eval", "--blt", bad.string(), "--steps", "10"}).code == 1);
}

TEST_CASE("optimize, verify, noisegen, recursive") {
  const fs::path dir = scratch();
  const std::string opt = (dir / "opt3.json").string();
  REQUIRE(run({"optimize", "--degree", "3", "--steps", "512", "--out", opt}).code == 0);
  const Run v = run({"verify", "--blt", opt, "--steps", "512", "--dim", "2", "--seed", "1"});
  REQUIRE(v.code == 0);
  CHECK(json::parse(v.out)["max_abs_dev"].get<double>() <= 1e-10);
  CHECK(run({"verify", "--blt", opt, "--steps", "20000"}).code == 1);

  const std::string csv = (dir / "noise.csv").string();
  REQUIRE(run({"noisegen", "--blt", opt, "--steps", "5", "--dim", "3", "--seed", "2", "--zeta", "1",
               "--mode", "prefix", "--format", "csv", "--out", csv})
              .code == 0);
  std::ifstream is(csv);
  std::stringstream ss;
  ss << is.rdbuf();
  const auto ls = lines(ss.str());
  CHECK(ls.size() == 6);
  CHECK(ls[0] == "step,dim0,dim1,dim2");

  const std::string bin = (dir / "noise.f64").string();
  REQUIRE(run({"noisegen", "--blt", opt, "--steps", "10", "--dim", "4", "--seed", "2", "--format", "f64",
               "--out", bin})
              .code == 0);
  CHECK(fs::file_size(bin) == 10 * 4 * sizeof(double));
  std::ifstream sj(bin + ".json");
  const json side = json::parse(sj);
  for (const char* k : {"n", "m", "zeta", "sigma", "seed", "rng", "factorization_path"})
    CHECK(side.contains(k));

  const std::string ra = (dir / "ra.json").string();
  REQUIRE(run({"build", "--method", "ra", "--degree", "6", "--steps", "10", "--out", ra}).code == 0);
  const Run rr = run({"recursive", "--base", ra, "--levels", "3", "--steps-check", "200", "--dim", "2"});
  REQUIRE(rr.code == 0);
  const json rj = json::parse(rr.out);
  CHECK(rj["n"] == 1000);
  CHECK(rj["n_prime"] == 1110);
  CHECK(rj["valid"] == true);
  CHECK(rj["rows_checked"] == 200);
  fs::remove_all(dir);
}

TEST_CASE("compare table") {
  const Run r = run({"compare", "--degrees", "3", "--methods", "ra,opt", "--n-grid", "10,100"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  CHECK(ls[0] == "method,degree,n,opt_lt_toe,mathias_ub,matousek_lb,bintree,mechanism_maxerr,ratio");
  CHECK(ls.size() == 5);
  CHECK(run({"compare", "--degrees", "3", "--methods", "xx", "--n-grid", "10"}).code == 1);
}
