#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "qmem/errors.hpp"
#include "qmem/fock.hpp"

using namespace qmem;

namespace {

double norm_sq(const StoredState& s) { return s.norm_squared(); }

// Independent Poisson weights for tail checks.
std::vector<double> poisson_weights(double lambda, int count) {
  std::vector<double> p(count);
  p[0] = std::exp(-lambda);
  for (int n = 1; n < count; ++n) p[n] = p[n - 1] * lambda / double(n);
  return p;
}

}  // namespace

TEST_SUITE("fock") {

TEST_CASE("vacuum and Poisson statistics of coherent states") {
  const StoredState vac = make_coherent(0.0);
  CHECK(vac.n_max() == 0);
  const PhotonStats vs = photon_stats(vac);
  CHECK(vs.mean == doctest::Approx(0.0));
  CHECK(vs.variance == doctest::Approx(0.0));

  const StoredState s = make_coherent(2.0);
  const PhotonStats st = photon_stats(s);
  CHECK(st.mean == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(st.variance == doctest::Approx(4.0).epsilon(1e-10));
  // Poisson: third central moment equals the mean.
  CHECK(st.central_moments[3] == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("coherent truncation keeps the tail below 1e-12") {
  // Oracle: brute-force partial sums of the Poisson weights.
  const double lambda = 9.0;  // alpha = 3
  const StoredState s = make_coherent(3.0);
  const auto w = poisson_weights(lambda, s.n_max() + 200);
  double tail = 0.0;
  for (std::size_t n = s.n_max() + 1; n < w.size(); ++n) tail += w[n];
  CHECK(tail < 1e-12);
  // The cut is minimal: keeping one level less would exceed the budget.
  CHECK(tail + w[s.n_max()] >= 1e-12);
  CHECK(norm_sq(s) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("amplitude bound is enforced") {
  CHECK_THROWS_AS(make_coherent(25.0), Error);  // |alpha|^2 = 625 > 400
}

TEST_CASE("even cat has exactly zero odd amplitudes") {
  const StoredState s = make_cat(2.0, 0.0, 0.0);
  for (int n = 1; n <= s.n_max(); n += 2) {
    CHECK(s.amplitudes[n].real() == 0.0);
    CHECK(s.amplitudes[n].imag() == 0.0);
  }
  CHECK(norm_sq(s) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cat variance tracks |alpha|^2 in the contour-figure regime") {
  const StoredState s = make_cat(4.0, 1.0, std::numbers::pi);
  const PhotonStats st = photon_stats(s);
  CHECK(std::abs(st.variance / 16.0 - 1.0) < 0.10);
}

TEST_CASE("cat normalization matches the overlap formula") {
  // ||psi||^2 = 1 + e^{2 eta} + 2 e^eta cos(theta) e^{-2 |alpha|^2}
  const double alpha = 1.2, eta = 0.3, theta = 0.9;
  const double lambda = alpha * alpha;
  auto weights = poisson_weights(lambda, 60);
  double n2 = 0.0;
  for (int n = 0; n < 60; ++n) {
    const double parity = (n % 2 == 0) ? 1.0 : -1.0;
    const std::complex<double> f = 1.0 + parity * std::exp(eta) *
                                             std::complex<double>(std::cos(theta), std::sin(theta));
    n2 += weights[n] * std::norm(f);
  }
  const double expected = 1.0 + std::exp(2 * eta) + 2 * std::exp(eta) * std::cos(theta) *
                                                        std::exp(-2 * lambda);
  CHECK(n2 == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("large-eta cat converges to the opposite coherent branch") {
  const StoredState cat = make_cat(2.0, 40.0, 0.0);
  const StoredState minus = make_coherent(-2.0);
  std::complex<double> overlap = 0.0;
  for (int n = 0; n <= std::min(cat.n_max(), minus.n_max()); ++n)
    overlap += std::conj(minus.amplitudes[n]) * cat.amplitudes[n];
  CHECK(std::norm(overlap) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("cat rejects non-finite parameters") {
  CHECK_THROWS_AS(make_cat(1.0, std::nan(""), 0.0), Error);
  CHECK_THROWS_AS(make_cat(1.0, 0.0, std::numeric_limits<double>::infinity()), Error);
}

TEST_CASE("uniform superposition statistics") {
  CHECK(photon_stats(make_uniform(0)).variance == doctest::Approx(0.0));
  const PhotonStats s10 = photon_stats(make_uniform(10));
  CHECK(s10.mean == doctest::Approx(5.0));
  CHECK(s10.variance == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(photon_stats(make_uniform(1)).variance == doctest::Approx(0.25).epsilon(1e-12));
  CHECK_THROWS_AS(make_uniform(-1), Error);
}

TEST_CASE("uniform variance matches the discrete formula exactly at small M") {
  for (int m = 0; m <= 12; ++m) {
    const double expected = (double(m + 1) * double(m + 1) - 1.0) / 12.0;
    CHECK(photon_stats(make_uniform(m)).variance == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("Fock state moments vanish; uniform kurtosis is sub-Gaussian") {
  const PhotonStats f = photon_stats(make_fock(5), 6);
  CHECK(f.mean == doctest::Approx(5.0));
  for (int j = 1; j <= 6; ++j) CHECK(f.central_moments[j] == doctest::Approx(0.0));

  // Brute-force fourth moment of the 11-term uniform distribution.
  double mu4 = 0.0;
  for (int n = 0; n <= 10; ++n) mu4 += std::pow(double(n) - 5.0, 4) / 11.0;
  const PhotonStats u = photon_stats(make_uniform(10), 4);
  CHECK(u.central_moments[4] == doctest::Approx(mu4).epsilon(1e-12));
  CHECK(u.central_moments[4] / (u.variance * u.variance) < 3.0);
}

TEST_CASE("standardized variable has mean 0 and variance 1 for every constructor") {
  const std::vector<StoredState> states = {
      make_coherent(2.0), make_coherent(std::complex<double>(1.0, -1.5)),
      make_cat(3.0, 0.5, 1.1), make_uniform(7)};
  for (const auto& s : states) {
    const PhotonStats st = photon_stats(s);
    REQUIRE(st.variance > 0.0);
    const auto p = s.probabilities();
    double zm = 0.0, zv = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
      const double z = (double(n) - st.mean) / std::sqrt(st.variance);
      zm += p[n] * z;
      zv += p[n] * z * z;
    }
    CHECK(std::abs(zm) < 1e-9);
    CHECK(std::abs(zv - 1.0) < 1e-9);
  }
}

TEST_CASE("phases do not affect probabilities") {
  const StoredState a = make_coherent(std::complex<double>(2.0, 0.0));
  const StoredState b = make_coherent(std::complex<double>(0.0, 2.0));
  REQUIRE(a.n_max() == b.n_max());
  const auto pa = a.probabilities(), pb = b.probabilities();
  for (std::size_t n = 0; n < pa.size(); ++n) CHECK(pa[n] == doctest::Approx(pb[n]).epsilon(1e-12));
}

TEST_CASE("state JSON round-trips bit-exactly") {
  const StoredState s = make_cat(std::complex<double>(1.5, 0.4), 0.2, 2.0);
  const StoredState back = state_from_json(state_to_json(s));
  REQUIRE(back.n_max() == s.n_max());
  for (int n = 0; n <= s.n_max(); ++n) CHECK(back.amplitudes[n] == s.amplitudes[n]);
}

TEST_CASE("state JSON rejects malformed documents") {
  CHECK_THROWS_AS(state_from_json("{}"), Error);
  CHECK_THROWS_AS(state_from_json(R"({"n_max": 1, "amplitudes": [[1, 0]]})"), Error);
  CHECK_THROWS_AS(state_from_json(R"({"n_max": 0, "amplitudes": [[1, 0]], "extra": 1})"), Error);
}

TEST_CASE("appendix diagnostics: coherent family converges towards the Gaussian limit") {
  const std::vector<double> grid = {4.0, 25.0, 100.0};
  const AppendixBReport report = appendix_b_report(coherent_family(), grid);
  REQUIRE(report.kolmogorov_steps.size() == 2);
  CHECK(report.kolmogorov_steps[1] < report.kolmogorov_steps[0]);
  CHECK(report.kolmogorov_decreasing);
  for (const auto& pt : report.points) {
    REQUIRE(pt.best_fit >= 0);  // light tail: some envelope is feasible
    CHECK(pt.fits[pt.best_fit].chi > 0.0);
  }
}

TEST_CASE("appendix diagnostics: Fock family has zero tail") {
  const std::vector<double> grid = {1.0, 4.0, 9.0};
  const AppendixBReport report = appendix_b_report(fock_family(), grid);
  for (const auto& pt : report.points) CHECK(pt.zero_tail);
}

TEST_CASE("appendix diagnostics: truncated power-law weights fail the envelope fit") {
  std::vector<double> probs(401);
  for (int n = 0; n <= 400; ++n) probs[n] = 1.0 / std::pow(1.0 + n, 3.0);
  const StoredState heavy = state_from_probabilities(probs);
  StateFamily family{"heavy", [&](double) { return heavy; }};
  const std::vector<double> grid = {1.0};
  const AppendixBReport report = appendix_b_report(family, grid);
  REQUIRE(report.points.size() == 1);
  const auto& pt = report.points[0];
  CHECK(!pt.zero_tail);
  CHECK(pt.best_fit == -1);
  for (const auto& fit : pt.fits)
    if (fit.delta >= 1.0) CHECK(!fit.feasible);
}

TEST_CASE("appendix diagnostics: grid must increase") {
  const std::vector<double> bad = {4.0, 4.0};
  CHECK_THROWS_AS(appendix_b_report(coherent_family(), bad), Error);
}

}  // TEST_SUITE
