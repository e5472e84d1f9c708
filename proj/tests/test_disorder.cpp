#include <cmath>

#include "doctest.h"
#include "qmem/disorder.hpp"
#include "qmem/errors.hpp"

using namespace qmem;

TEST_SUITE("disorder") {

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((SystemParams{0, 0.0, 0.0, 1.0, 0.0}.validate()), Error);
  CHECK_THROWS_AS((SystemParams{10, 0.0, 0.0, 0.0, 0.0}.validate()), Error);
  CHECK_THROWS_AS((SystemParams{10, 0.0, -1.0, 1.0, 0.0}.validate()), Error);
  // delta_g >= g is a hard error.
  CHECK_THROWS_AS((SystemParams{10, 0.0, 0.0, 1.0, 1.0}.validate()), Error);
  SystemParams ok{10, 0.5, 0.1, 1.0, 0.05};
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("degenerate spreads give exact constants") {
  const SystemParams params{100, 0.7, 0.0, 0.3, 0.0};
  const DisorderRealization r = sample_realization(params, 9);
  for (double d : r.detunings) CHECK(d == 0.7);
  for (double g : r.couplings) CHECK(g == 0.3);
  CHECK(r.eps_detuning == 0.0);
  CHECK(r.eps_coupling == 0.0);
  CHECK(r.coupling_redraws == 0);
}

TEST_CASE("fixed seed reproduces the realization bitwise") {
  const SystemParams params{5000, 1.0, 0.2, 0.5, 0.05};
  const DisorderRealization a = sample_realization(params, 1234);
  const DisorderRealization b = sample_realization(params, 1234);
  REQUIRE(a.detunings.size() == b.detunings.size());
  for (std::size_t j = 0; j < a.detunings.size(); ++j) {
    CHECK(a.detunings[j] == b.detunings[j]);
    CHECK(a.couplings[j] == b.couplings[j]);
  }
  const DisorderRealization c = sample_realization(params, 1235);
  CHECK(c.detunings[0] != a.detunings[0]);
}

TEST_CASE("sample standard deviation matches the configured spread") {
  const SystemParams params{1'000'000, 1.0, 0.1, 1.0, 0.0};
  const DisorderRealization r = sample_realization(params, 77);
  double mean = r.collective_detuning / double(params.N);
  double ss = 0.0;
  for (double d : r.detunings) ss += (d - mean) * (d - mean);
  const double sd = std::sqrt(ss / double(params.N - 1));
  CHECK(std::abs(sd / params.delta_Delta - 1.0) < 0.01);
}

TEST_CASE("collective fields equal the vector sums exactly") {
  const SystemParams params{3000, -0.4, 0.3, 1.0, 0.2};
  const DisorderRealization r = sample_realization(params, 5);
  double sd = 0.0, sg = 0.0;
  for (double d : r.detunings) sd += d;
  for (double g : r.couplings) sg += g;
  CHECK(r.collective_detuning == sd);
  CHECK(r.collective_coupling == sg);
  for (double g : r.couplings) CHECK(g > 0.0);
}

TEST_CASE("collective moments") {
  const SystemParams params{4, 1.0, 2.0, 1.0, 0.0};
  const CollectiveMoments m = collective_moments(params);
  CHECK(m.mean_detuning == doctest::Approx(4.0));
  CHECK(m.var_detuning == doctest::Approx(16.0));
  CHECK(m.mean_coupling == doctest::Approx(4.0));
  CHECK(m.var_coupling == doctest::Approx(0.0));
}

TEST_CASE("Monte Carlo variance of the collective detuning") {
  const SystemParams params{100, 0.0, 0.5, 1.0, 0.0};
  const int trials = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (int t = 0; t < trials; ++t) {
    const DisorderRealization r = sample_realization(params, 1000 + t);
    sum += r.collective_detuning;
    sumsq += r.collective_detuning * r.collective_detuning;
  }
  const double mean = sum / trials;
  const double var = (sumsq - trials * mean * mean) / (trials - 1);
  const double expected = collective_moments(params).var_detuning;  // N dDelta^2
  CHECK(std::abs(var / expected - 1.0) < 0.03);
}

TEST_CASE("relative deviation statistics over seeds") {
  const SystemParams params{400, 2.0, 0.2, 1.0, 0.0};
  const int trials = 20000;
  double sum = 0.0, sumsq = 0.0;
  for (int t = 0; t < trials; ++t) {
    const DisorderRealization r = sample_realization(params, 31 + t);
    sum += r.eps_detuning;
    sumsq += r.eps_detuning * r.eps_detuning;
  }
  const double mean = sum / trials;
  const double var = (sumsq - trials * mean * mean) / (trials - 1);
  const double expected_var =
      params.delta_Delta * params.delta_Delta / (double(params.N) * params.Delta * params.Delta);
  // 3 MC standard errors on mean and variance estimates.
  const double se_mean = std::sqrt(expected_var / trials);
  CHECK(std::abs(mean) < 3.0 * se_mean);
  CHECK(std::abs(var / expected_var - 1.0) < 3.0 * std::sqrt(2.0 / trials));
}

TEST_CASE("Delta = 0 with broadening leaves the relative deviation undefined") {
  const SystemParams params{100, 0.0, 0.5, 1.0, 0.0};
  const DisorderRealization r = sample_realization(params, 3);
  CHECK(std::isnan(r.eps_detuning));
}

TEST_CASE("excessive coupling spread is rejected deterministically") {
  // P(g + delta_g Z <= 0) > 1e-3 for delta_g / g > 0.3236.
  const SystemParams params{100, 0.0, 0.0, 1.0, 0.4};
  CHECK_THROWS_AS(sample_realization(params, 1), Error);
  const SystemParams fine{100, 0.0, 0.0, 1.0, 0.3};
  CHECK_NOTHROW(sample_realization(fine, 1));
}

}  // TEST_SUITE
