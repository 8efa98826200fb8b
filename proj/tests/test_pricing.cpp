#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>

#include "levyatm/pricing.hpp"

using namespace levyatm;

namespace {
const CgmyParams kPaper(0.5, 2.0, 3.6, 1.5, 0.0);
const CgmyParams kPaperMixed(0.5, 2.0, 3.6, 1.5, 0.1);
}  // namespace

TEST_CASE("bs_call reference values") {
  CHECK(bs_call(1.0, 1.0, 0.2, 0.25) == Catch::Approx(0.039877611676744923).epsilon(1e-13));
  CHECK(bs_call(100.0, 95.0, 0.3, 0.5) == Catch::Approx(10.974459762526391).epsilon(1e-13));
  CHECK(bs_call(100.0, 95.0, 0.0, 0.5) == 5.0);   // intrinsic at zero vol
  CHECK(bs_call(1.0, 1.0, 0.2, 0.0) == 0.0);
}

TEST_CASE("implied_vol inverts bs_call") {
  CHECK(implied_vol(0.039877611676744923, 1.0, 1.0, 0.25) == Catch::Approx(0.2).epsilon(1e-9));
  CHECK(implied_vol(10.974459762526391, 100.0, 95.0, 0.5) == Catch::Approx(0.3).epsilon(1e-9));
  // high-vol branch exercises the bracket expansion
  const double p = bs_call(1.0, 1.0, 3.5, 1.0);
  CHECK(implied_vol(p, 1.0, 1.0, 1.0) == Catch::Approx(3.5).epsilon(1e-9));
}

TEST_CASE("implied_vol rejects prices outside no-arbitrage bounds") {
  CHECK_THROWS_AS(implied_vol(0.0, 1.0, 1.0, 0.25), std::domain_error);
  CHECK_THROWS_AS(implied_vol(1.0, 1.0, 1.0, 0.25), std::domain_error);
  CHECK_THROWS_AS(implied_vol(4.9, 100.0, 95.0, 0.5), std::domain_error);
  CHECK_THROWS_AS(implied_vol(0.1, 1.0, 1.0, 0.0), std::domain_error);
}

TEST_CASE("IFT pricer matches independent inversion oracles") {
  const IftConfig cfg;
  struct Case {
    const CgmyParams* p;
    double t;
    double oracle;
  };
  const Case cases[] = {
      {&kPaper, 0.002, 0.0145806184827783},  {&kPaperMixed, 0.002, 0.0147147381686331},
      {&kPaper, 0.01, 0.0367479766161693},   {&kPaperMixed, 0.01, 0.036993947114443},
      {&kPaper, 0.05, 0.0880067288100308},   {&kPaperMixed, 0.05, 0.088483194088358},
      {&kPaper, 0.2, 0.179871587959117},     {&kPaperMixed, 0.2, 0.180746550592274},
  };
  for (const auto& c : cases) {
    const IftResult r = price_ift(*c.p, c.t, cfg);
    CAPTURE(c.t, c.p->sigma);
    CHECK(r.price == Catch::Approx(c.oracle).margin(1e-6));
    CHECK_FALSE(r.tail_warning);
    CHECK(r.error_estimate < 1e-4);
  }
}

TEST_CASE("IFT price is invariant to the control volatility") {
  IftConfig cfg;
  const double ref = price_ift(kPaper, 0.1, cfg).price;
  for (double cv : {0.05, 0.1, 0.35, 0.5}) {
    cfg.control_vol = cv;
    CHECK(price_ift(kPaper, 0.1, cfg).price == Catch::Approx(ref).margin(1e-9));
  }
}

TEST_CASE("IFT pricer scales linearly in spot and validates inputs") {
  const IftConfig cfg;
  const double p1 = price_ift(kPaper, 0.05, cfg).price;
  CHECK(price_ift(kPaper, 0.05, cfg, 100.0).price == Catch::Approx(100.0 * p1).epsilon(1e-12));
  CHECK_THROWS_AS(price_ift(kPaper, 0.0, cfg), std::domain_error);
  IftConfig bad = cfg;
  bad.p_points = 101;
  CHECK_THROWS_AS(price_ift(kPaper, 0.05, bad), std::invalid_argument);
}

TEST_CASE("MC pricer is reproducible and thread-count invariant") {
  McConfig cfg;
  cfg.n_paths = 50000;
  cfg.seed = 42;
  const McResult a = price_mc(kPaperMixed, 0.05, cfg);
  const McResult b = price_mc(kPaperMixed, 0.05, cfg);
  CHECK(a.price == b.price);
  CHECK(a.std_error == b.std_error);

  McConfig one = cfg;
  one.max_threads = 1;
  McConfig four = cfg;
  four.max_threads = 4;
  CHECK(price_mc(kPaperMixed, 0.05, one).price == price_mc(kPaperMixed, 0.05, four).price);

  setenv("LEVY_ATM_THREADS", "3", 1);
  const McResult env3 = price_mc(kPaperMixed, 0.05, cfg);
  unsetenv("LEVY_ATM_THREADS");
  CHECK(env3.price == a.price);

  McConfig other = cfg;
  other.seed = 43;
  CHECK(price_mc(kPaperMixed, 0.05, other).price != a.price);
}

TEST_CASE("MC pricer agrees with the inversion oracle") {
  McConfig cfg;
  cfg.n_paths = 200000;
  cfg.seed = 7;
  struct Case {
    const CgmyParams* p;
    double t;
    double oracle;
  };
  const Case cases[] = {
      {&kPaper, 0.05, 0.0880067288100308},
      {&kPaperMixed, 0.05, 0.088483194088358},
      {&kPaper, 0.002, 0.0145806184827783},
  };
  for (const auto& c : cases) {
    const McResult r = price_mc(*c.p, c.t, cfg);
    CAPTURE(c.t, c.p->sigma);
    CHECK(std::abs(r.price - c.oracle) < 4.0 * r.std_error);
    CHECK(r.std_error > 0.0);
    CHECK(r.std_error < 1e-3);
  }
}

TEST_CASE("antithetic MC stays unbiased in the mixed regime") {
  McConfig cfg;
  cfg.n_paths = 200000;
  cfg.seed = 11;
  cfg.antithetic = true;
  const McResult r = price_mc(kPaperMixed, 0.05, cfg);
  CHECK(std::abs(r.price - 0.088483194088358) < 4.0 * r.std_error);
}

TEST_CASE("MC pricer scales linearly in spot") {
  McConfig cfg;
  cfg.n_paths = 20000;
  const McResult r1 = price_mc(kPaper, 0.05, cfg);
  const McResult r100 = price_mc(kPaper, 0.05, cfg, 100.0);
  CHECK(r100.price == Catch::Approx(100.0 * r1.price).epsilon(1e-12));
  CHECK(r100.std_error == Catch::Approx(100.0 * r1.std_error).epsilon(1e-12));
}
