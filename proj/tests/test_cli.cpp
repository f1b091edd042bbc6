#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "shentropy/io.hpp"

using namespace shent;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("shentropy_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  CliResult run(const std::string& args) const {
    const std::string out = path("stdout.txt"), err = path("stderr.txt");
    const std::string cmd = std::string("\"") + SHENTROPY_CLI_PATH + "\" " + args + " > \"" + out + "\" 2> \"" + err + "\"";
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static int selected_order(const std::string& out) {
    const std::string key = "selected order: ";
    const auto pos = out.find(key);
    if (pos == std::string::npos) return -1;
    return std::stoi(out.substr(pos + key.size()));
  }

  fs::path dir_;
};

TEST_F(Cli, UnitSphereAnalyzesToConstantTerm) {
  ASSERT_EQ(run("synth --shape unit-sphere --grid gauss:8 -o " + path("s.csv")).code, 0);
  const auto r = run("analyze -i " + path("s.csv") + " --lmax 4 -o " + path("s"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("parseval"), std::string::npos);
  const auto pyr = read_pyramid(path("s.coeffs.json"));
  ASSERT_EQ(pyr.band_limit(), 4);
  EXPECT_NEAR(pyr(0, 0).real(), std::sqrt(4.0 * std::numbers::pi), 1e-12);
  EXPECT_NEAR(pyr(0, 0).imag(), 0.0, 1e-12);
  for (int l = 1; l <= 4; ++l)
    for (int m = -l; m <= l; ++m) EXPECT_LT(std::abs(pyr(l, m)), 1e-12) << l << "," << m;
  EXPECT_TRUE(fs::exists(path("s.spectrum.csv")));
}

TEST_F(Cli, BandLimitAboveGaussGridIsValidationError) {
  ASSERT_EQ(run("synth --grid gauss:4 -o " + path("s.csv")).code, 0);
  const auto r = run("analyze -i " + path("s.csv") + " --lmax 9");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("L = 9"), std::string::npos) << r.err;
}

TEST_F(Cli, AnalyzeThenReconstructRoundTrips) {
  ASSERT_EQ(run("synth --shape random-bandlimited --lmax 6 --seed 3 --grid gauss:6 -o " + path("f.csv")).code, 0);
  ASSERT_EQ(run("analyze -i " + path("f.csv") + " -o " + path("f")).code, 0);
  const auto r = run("reconstruct -i " + path("f.csv") + " --coeffs " + path("f.coeffs.json") + " -J 6");
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string key = "residual = ";
  const auto pos = r.out.find(key);
  ASSERT_NE(pos, std::string::npos);
  EXPECT_LT(std::stod(r.out.substr(pos + key.size())), 1e-8) << r.out;
}

TEST_F(Cli, SelectsTopDegreeOfRandomShape) {
  ASSERT_EQ(run("synth --shape random-bandlimited --lmax 7 --grid gauss:10 -o " + path("f.csv")).code, 0);
  const auto r = run("select-order -i " + path("f.csv") + " -o " + path("rep.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(selected_order(r.out), 7) << r.out;
  EXPECT_EQ(read_json(path("rep.json")).at("selected_order").get<int>(), 7);
}

TEST_F(Cli, UnitSphereSelectsOrderZero) {
  ASSERT_EQ(run("synth --grid gauss:6 -o " + path("s.csv")).code, 0);
  const auto r = run("select-order -i " + path("s.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(selected_order(r.out), 0);
}

TEST_F(Cli, FlowchartCriterionAddsTwo) {
  ASSERT_EQ(run("synth --shape radial-harmonic-bump --bump 2,1,0.2 --grid gauss:8 -o " + path("b.csv")).code, 0);
  const auto r = run("select-order -i " + path("b.csv") + " --criterion flowchart");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(selected_order(r.out), 4) << r.out;
}

TEST_F(Cli, NoConvergenceExitsWithFive) {
  ASSERT_EQ(run("synth --shape radial-harmonic-bump --bump 2,1,0.2 --grid gauss:8 -o " + path("b.csv")).code, 0);
  EXPECT_EQ(run("select-order -i " + path("b.csv") + " --criterion flowchart --lmax 3").code, 5);
}

TEST_F(Cli, EntropyAndSpectrumOnCoefficientFile) {
  ASSERT_EQ(run("synth --shape random-bandlimited --lmax 4 --grid gauss:4 -o " + path("f.csv")).code, 0);
  ASSERT_EQ(run("analyze -i " + path("f.csv") + " -o " + path("f")).code, 0);
  auto r = run("entropy -i " + path("f.coeffs.json") + " --log-base 2 -J 4 -o " + path("she.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("SHE(4) = "), std::string::npos);
  EXPECT_TRUE(fs::exists(path("she.csv")));
  r = run("spectrum -i " + path("f.coeffs.json") + " -o " + path("spec.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(path("spec.csv")));
}

TEST_F(Cli, ErrorsMapToDocumentedExitCodes) {
  EXPECT_EQ(run("analyze -i " + path("missing.csv")).code, 3);
  EXPECT_EQ(run("analyze").code, 2);
  EXPECT_EQ(run("synth --grid hexagonal:4 -o " + path("x.csv")).code, 2);
  EXPECT_EQ(run("synth --grid gauss:abc -o " + path("x.csv")).code, 2);
  EXPECT_EQ(run("select-order -i " + path("missing.json") + " --criterion sideways").code, 2);
  EXPECT_EQ(run("--help").code, 0);

  std::ofstream(path("bad.csv")) << "theta,phi,weight,v0\n0.1,0.2,oops,1\n";
  const auto r = run("analyze -i " + path("bad.csv"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;

  ASSERT_EQ(run("synth --grid gauss:4 -o " + path("z.csv")).code, 0);
  std::ofstream(path("zero.json")) << R"({"format_version":1,"L":1,"channels":1,"convention":"complex-CS",)"
                                   << R"("ordering":"l-major","coeffs":[[0,0],[0,0],[0,0],[0,0]]})";
  EXPECT_EQ(run("select-order -i " + path("zero.json")).code, 4);
}

TEST_F(Cli, QuickBenchWritesCsv) {
  const auto r = run("bench --quick -o " + path("bench.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("speedup"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("bench.csv")));
}

}  // namespace
