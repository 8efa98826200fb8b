#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "levyatm/model.hpp"

using namespace levyatm;

namespace {
const CgmyParams kPaper(0.5, 2.0, 3.6, 1.5, 0.0);
const CgmyParams kPaperMixed(0.5, 2.0, 3.6, 1.5, 0.1);
}  // namespace

TEST_CASE("CgmyParams validates its domain") {
  CHECK_THROWS_AS(CgmyParams(0.0, 2.0, 3.6, 1.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(CgmyParams(0.5, -1.0, 3.6, 1.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(CgmyParams(0.5, 2.0, 0.9, 1.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(CgmyParams(0.5, 2.0, 3.6, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(CgmyParams(0.5, 2.0, 3.6, 2.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(CgmyParams(0.5, 2.0, 3.6, 1.5, -0.1), std::invalid_argument);
  CHECK(kPaper.pure_jump());
  CHECK_FALSE(kPaperMixed.pure_jump());
  CHECK_NOTHROW(CgmyParams::unchecked(0.0, 2.0, 3.6, 1.5, 0.2));
}

TEST_CASE("martingale drift reference values") {
  CHECK(martingale_drift(kPaper) == Catch::Approx(0.31953847521435945).epsilon(1e-13));
  CHECK(martingale_drift(kPaperMixed) == Catch::Approx(0.31453847521435945).epsilon(1e-13));
}

TEST_CASE("char_function reference value on the strip") {
  const auto v = char_function(kPaperMixed, 0.7, {1.3, 0.0});
  CHECK(v.real() == Catch::Approx(0.46875674738952642).epsilon(1e-12));
  CHECK(v.imag() == Catch::Approx(-0.23924000704505299).epsilon(1e-12));
}

TEST_CASE("char_function martingale identity at u = -i") {
  for (const auto& p : {kPaper, kPaperMixed}) {
    const auto v = char_function(p, 1.0, {0.0, -1.0});
    CHECK(v.real() == Catch::Approx(1.0).margin(1e-12));
    CHECK(v.imag() == Catch::Approx(0.0).margin(1e-12));
  }
}

TEST_CASE("char_function rejects arguments across the branch cut") {
  CHECK_THROWS_AS(char_function(kPaper, 1.0, {0.0, -5.0}), std::domain_error);
  CHECK_THROWS_AS(char_function(kPaper, 1.0, {0.0, 2.5}), std::domain_error);
}

TEST_CASE("levy_density reference values") {
  CHECK(levy_density(kPaper, 0.5) == Catch::Approx(0.46753585913632388).epsilon(1e-13));
  CHECK(levy_density(kPaper, -0.25) == Catch::Approx(9.7044905554021348).epsilon(1e-13));
  CHECK_THROWS_AS(levy_density(kPaper, 0.0), std::domain_error);
}

TEST_CASE("measure_constants reference values") {
  const auto k0 = measure_constants(kPaper);
  CHECK(k0.m_star == Catch::Approx(2.6).epsilon(1e-15));
  CHECK(k0.g_star == Catch::Approx(3.0).epsilon(1e-15));
  CHECK(k0.eta == Catch::Approx(11.093819909239992).epsilon(1e-12));
  CHECK(k0.gamma_tilde == Catch::Approx(0.31953847521435945).epsilon(1e-12));
  CHECK(k0.drift_c == Catch::Approx(0.31953847521435945).epsilon(1e-12));
  CHECK(k0.drift_b == Catch::Approx(-0.51835123134938953).epsilon(1e-9));

  const auto k1 = measure_constants(kPaperMixed);
  CHECK(k1.gamma_tilde == Catch::Approx(0.32453847521435945).epsilon(1e-12));
  CHECK(k1.drift_c == Catch::Approx(0.31453847521435945).epsilon(1e-12));
}

TEST_CASE("general drift agrees with the CGMY closed-path drift") {
  for (const auto& p : {kPaper, kPaperMixed}) {
    const auto spec = TemperedStableSpec::from_cgmy(p);
    CHECK(general_drift_b(spec) == Catch::Approx(measure_constants(p).drift_b).margin(1e-7));
  }
}

TEST_CASE("TemperedStableSpec rejects inconsistent tempering functions") {
  // slope at 0+ says M=2 but big_m claims 3
  CHECK_THROWS_AS(TemperedStableSpec(0.5, 0.5, 3.0, 2.0, 1.5, 0.0,
                                     [](double x) {
                                       return x > 0.0 ? std::exp(-2.0 * x) : std::exp(2.0 * x);
                                     }),
                  std::invalid_argument);
  // qbar above e^{-x} on the right
  CHECK_THROWS_AS(TemperedStableSpec(0.5, 0.5, 3.6, 2.0, 1.5, 0.0,
                                     [](double) { return 1.5; }),
                  std::invalid_argument);
}

TEST_CASE("key=value parsing skips comments and trims whitespace") {
  std::istringstream in("C = 0.5\n# comment\nG=2 # trailing\n\nM = 3.6\nY=1.5\nsigma = 0.1\n");
  const auto kv = parse_key_value_stream(in);
  REQUIRE(kv.size() == 5);
  CHECK(kv.at("C") == 0.5);
  CHECK(kv.at("G") == 2.0);
  CHECK(kv.at("sigma") == 0.1);
}

TEST_CASE("params_from_file round trip") {
  const std::string path = "model_roundtrip.cfg";
  {
    std::ofstream out(path);
    out << "C=0.5\nG=2\nM=3.6\nY=1.5\nsigma=0.1\n";
  }
  const CgmyParams p = params_from_file(path);
  CHECK(p.C == 0.5);
  CHECK(p.sigma == 0.1);
  std::remove(path.c_str());

  {
    std::ofstream out(path);
    out << "C=0.5\nG=2\nM=3.6\n";  // Y missing
  }
  CHECK_THROWS_AS(params_from_file(path), std::runtime_error);
  std::remove(path.c_str());
}
