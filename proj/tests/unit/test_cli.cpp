#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "optisph/experiments.hpp"
#include "optisph/file_formats.hpp"

using namespace optisph;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string line(const std::string& text, int n) {
  std::istringstream in(text);
  std::string l;
  for (int i = 0; i <= n; ++i) std::getline(in, l);
  return l;
}

double field(const std::string& text, const std::string& key) {
  const auto at = text.find(key + "=");
  REQUIRE(at != std::string::npos);
  return std::stod(text.substr(at + key.size() + 1));
}

fs::path workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("optisph-cli-" + std::to_string(std::random_device{}()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string grid_file(int L) {
  const auto path = (workdir() / ("grid" + std::to_string(L) + ".txt")).string();
  if (!fs::exists(path)) REQUIRE(run({"grid", "-L", std::to_string(L), "-o", path}).code == 0);
  return path;
}

}  // namespace

TEST_CASE("report headers") {
  CHECK(line(run({"exp1", "-L", "2", "--trials", "1"}).out, 0) == "# optisph exp1 seed=1");
  CHECK(line(run({"exp1", "-L", "2", "--trials", "1"}).out, 1) == "L,trials,E_max,E_mean,rel_l2,status");
  CHECK(line(run({"exp2", "-L", "2", "--trials", "1", "--seed", "9"}).out, 0) == "# optisph exp2 seed=9");
  CHECK(line(run({"exp2", "-L", "2", "--trials", "1"}).out, 1) == "L,trials,E_max,E_mean,rel_l2,status");
  CHECK(line(run({"errsurface", "-L", "2", "--trials", "1"}).out, 1) == "L,ell,m,E");
  CHECK(line(run({"cond", "-L", "2"}).out, 1) == "L,measure,ordering,m,kappa,max_kappa");
  CHECK(line(run({"bench", "-L", "2", "--trials", "1"}).out, 1) == "L,trials,tau_I,tau_F,tau_F1,stat");
}

TEST_CASE("sweeps produce one record per band-limit") {
  const auto r = run({"exp1", "-L", "2,3,4", "--trials", "2"});
  CHECK(r.code == 0);
  CHECK(line(r.out, 4).rfind("4,2,", 0) == 0);
  CHECK(line(r.out, 4).ends_with(",ok"));
  CHECK(line(r.out, 5).empty());

  const auto s = run({"errsurface", "-L", "3", "--trials", "1"});
  CHECK(std::count(s.out.begin(), s.out.end(), '\n') == 2 + 9);

  const auto path = workdir() / "exp2.csv";
  CHECK(run({"exp2", "-L", "3", "-o", path.string()}).code == 0);
  CHECK(read_text(path).rfind("# optisph exp2 seed=1\n", 0) == 0);
}

TEST_CASE("grid command") {
  const auto one = run({"grid", "-L", "1"});
  CHECK(one.code == 0);
  CHECK(one.out.find("samples=1 ") != std::string::npos);
  CHECK(field(one.out, "max_kappa") == 1.0);

  const auto opt = run({"grid", "-L", "64", "--ordering", "condmin"});
  const auto inter = run({"grid", "-L", "64", "--ordering", "interleaved"});
  CHECK(field(opt.out, "max_kappa") < field(inter.out, "max_kappa"));
  CHECK(opt.out.find("samples=4096") != std::string::npos);

  const auto sine = run({"grid", "-L", "64", "--measure", "sine"});
  CHECK(sine.code == 0);
  CHECK(field(sine.out, "max_kappa") >= field(opt.out, "max_kappa"));
}

TEST_CASE("transform commands") {
  const int L = 32;
  const auto grid = grid_file(L);
  HarmonicCoefficients ones(L);
  ones(0, 0) = std::sqrt(4 * std::numbers::pi);
  const auto cpath = (workdir() / "ones.coef").string();
  const auto spath = (workdir() / "ones.sig").string();
  write_coefficients(ones, cpath);
  REQUIRE(run({"inverse", cpath, "-g", grid, "-o", spath}).code == 0);
  const auto flat = read_samples(spath);
  for (auto v : flat.values()) CHECK(std::abs(v - 1.0) < 1e-13);

  UniformSource rng(6);
  const auto coeffs = random_coefficients(L, rng);
  const auto rpath = (workdir() / "rand.coef").string();
  const auto rsig = (workdir() / "rand.sig").string();
  const auto rback = (workdir() / "rand.back").string();
  write_coefficients(coeffs, rpath);
  REQUIRE(run({"inverse", rpath, "-g", grid, "-o", rsig}).code == 0);
  REQUIRE(run({"forward", rsig, "-g", grid, "-o", rback, "--peel", "spectral"}).code == 0);
  const auto back = read_coefficients(rback);
  double worst = 0.0;
  for (std::size_t i = 0; i < back.size(); ++i) worst = std::max(worst, std::abs(back.values()[i] - coeffs.values()[i]));
  CHECK(worst <= 1e-8);

  const auto small = grid_file(8);
  HarmonicCoefficients tiny(8);
  tiny(2, 1) = {0.5, 0.25};
  const auto tpath = (workdir() / "tiny.coef").string();
  const auto tsig = (workdir() / "tiny.sig").string();
  const auto tback = (workdir() / "tiny.back").string();
  write_coefficients(tiny, tpath);
  REQUIRE(run({"inverse", tpath, "-g", small, "-o", tsig, "--oracle"}).code == 0);
  REQUIRE(run({"forward", tsig, "-g", small, "-o", tback, "--oracle"}).code == 0);
  CHECK(std::abs(read_coefficients(tback)(2, 1) - std::complex<double>(0.5, 0.25)) < 1e-12);
}

TEST_CASE("errors map to exit codes") {
  const auto grid = grid_file(8);
  const auto cpath = (workdir() / "l5.coef").string();
  write_coefficients(HarmonicCoefficients(5), cpath);
  const auto mismatch = run({"inverse", cpath, "-g", grid, "-o", (workdir() / "x").string()});
  CHECK(mismatch.code == 2);
  CHECK(mismatch.err.find("L=5") != std::string::npos);
  CHECK(mismatch.err.find("L=8") != std::string::npos);

  const auto spath = (workdir() / "l5.sig").string();
  write_samples(SpatialSamples(5), spath);
  const auto smis = run({"forward", spath, "-g", grid, "-o", (workdir() / "y").string()});
  CHECK(smis.code == 2);
  CHECK(smis.err.find("L=5") != std::string::npos);

  CHECK(run({}).code == 2);
  CHECK(run({"grid"}).code == 2);
  CHECK(run({"grid", "-L", "0"}).code == 2);
  CHECK(run({"grid", "-L", "4", "--measure", "gauss"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"inverse", (workdir() / "missing").string(), "-g", grid, "-o", "z"}).code == 2);

  const auto junk = (workdir() / "junk.coef").string();
  write_text("not a coefficient file\n", junk);
  CHECK(run({"inverse", junk, "-g", grid, "-o", (workdir() / "z").string()}).code == 2);
  CHECK(run({"--help"}).code == 0);
}
