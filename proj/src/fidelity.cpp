#include "qmem/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "qmem/detail/parallel.hpp"
#include "qmem/errors.hpp"
#include "qmem/rng.hpp"

namespace qmem {

namespace {

constexpr long long kSampleChunk = 1024;

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= double(i);
  return f;
}

void check_model(const PhaseModel& model) {
  if (model.ensemble_size < 1) fail_invalid("phase model needs ensemble_size >= 1");
  if (!(model.Gamma >= 0.0)) fail_invalid("phase model needs Gamma >= 0");
}

}  // namespace

std::vector<double> difference_distribution(const StoredState& state) {
  const auto p = state.probabilities();
  const std::size_t count = p.size();
  std::vector<double> q(count, 0.0);
  for (std::size_t d = 0; d < count; ++d) {
    double s = 0.0;
    for (std::size_t n = 0; n + d < count; ++n) s += p[n] * p[n + d];
    q[d] = s;
  }
  return q;
}

FidelityResult fidelity_analytic(const StoredState& state, const PhaseModel& model,
                                 bool compensated) {
  check_model(model);
  const auto q = difference_distribution(state);
  const double damp = model.Gamma / (2.0 * double(model.ensemble_size));
  double value = q[0];
  for (std::size_t d = 1; d < q.size(); ++d) {
    const double dd = double(d);
    const double osc = compensated ? 1.0 : std::cos(dd * model.gamma0);
    value += 2.0 * q[d] * osc * std::exp(-dd * dd * damp);
  }
  FidelityResult r;
  r.value = value;
  r.method = FidelityMethod::analytic;
  return r;
}

FidelityResult fidelity_monte_carlo(const StoredState& state, const SystemParams& params,
                                    const Protocol& protocol, PhaseMode phase_mode,
                                    long long samples, std::uint64_t seed, bool compensated,
                                    int workers) {
  if (samples < 1000) fail_invalid("Monte Carlo estimate requires samples >= 1000");
  params.validate();
  const PhaseModel model = build_phase_model(params, protocol);
  if (phase_mode == PhaseMode::linear && params.Delta == 0.0)
    fail_invalid("linear phase mode unavailable at Delta = 0");

  const auto p = state.probabilities();
  const DrivingIntegral driving(protocol.profile);
  const double sum_g2_ref = double(params.N) * params.g * params.g;

  const std::size_t chunk_count = static_cast<std::size_t>((samples + kSampleChunk - 1) / kSampleChunk);
  std::vector<double> chunk_sum(chunk_count, 0.0), chunk_sumsq(chunk_count, 0.0);

  detail::for_each_chunk(chunk_count, workers, [&](std::size_t c) {
    DisorderRealization scratch;
    double sum = 0.0, sumsq = 0.0;
    const long long lo = static_cast<long long>(c) * kSampleChunk;
    const long long hi = std::min(samples, lo + kSampleChunk);
    for (long long s = lo; s < hi; ++s) {
      detail::sample_into(params, mix_seed(seed, static_cast<std::uint64_t>(s)), scratch);
      double phi1;  // cycle phase of the n = 1 component
      if (phase_mode == PhaseMode::linear) {
        phi1 = model.gamma0 * (1.0 + scratch.eps_detuning) + model.mu0 * scratch.eps_coupling;
      } else {
        double sum_g2 = 0.0, sum_g2d = 0.0;
        for (std::size_t j = 0; j < scratch.couplings.size(); ++j) {
          const double g2 = scratch.couplings[j] * scratch.couplings[j];
          sum_g2 += g2;
          sum_g2d += g2 * scratch.detunings[j];
        }
        phi1 = -(sum_g2d / sum_g2) * (protocol.tau_s + driving(sum_g2 / sum_g2_ref));
      }
      if (compensated) phi1 -= model.gamma0;
      const std::complex<double> rot(std::cos(phi1), std::sin(phi1));
      std::complex<double> factor(1.0, 0.0), overlap(0.0, 0.0);
      for (double pn : p) {
        overlap += pn * factor;
        factor *= rot;
      }
      const double o2 = std::norm(overlap);
      sum += o2;
      sumsq += o2 * o2;
    }
    chunk_sum[c] = sum;
    chunk_sumsq[c] = sumsq;
  });

  // Fixed-order reduction: identical bytes for any worker count.
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t c = 0; c < chunk_count; ++c) {
    sum += chunk_sum[c];
    sumsq += chunk_sumsq[c];
  }
  const double m = double(samples);
  const double mean = sum / m;
  const double var = std::max(0.0, (sumsq - m * mean * mean) / (m - 1.0));
  FidelityResult r;
  r.value = mean;
  r.method = phase_mode == PhaseMode::exact ? FidelityMethod::monte_carlo_exact_phase
                                            : FidelityMethod::monte_carlo_linear_phase;
  r.std_error = std::sqrt(var / m);
  r.samples = samples;
  return r;
}

namespace {

std::vector<double> moment_coefficients(const StoredState& state, int max_m) {
  const PhotonStats stats = photon_stats(state);
  if (stats.variance == 0.0) return {1.0};
  const auto q = difference_distribution(state);
  std::vector<double> c(max_m + 1, 0.0);
  c[0] = 1.0;
  for (int m = 1; m <= max_m; ++m) {
    double s = 0.0;
    for (std::size_t d = 1; d < q.size(); ++d)
      s += 2.0 * q[d] * std::pow(double(d) * double(d) / (2.0 * stats.variance), m);
    c[m] = s;
  }
  return c;
}

}  // namespace

std::vector<double> series_coefficients(const StoredState& state, int max_m) {
  if (max_m < 0 || max_m > 8) fail_invalid("series coefficients limited to max_m <= 8");
  return moment_coefficients(state, max_m);
}

FidelityResult fidelity_series(const StoredState& state, double x, int max_m) {
  if (!(x >= 0.0)) fail_invalid("series evaluation requires x >= 0");
  if (max_m < 0 || max_m > 8) fail_invalid("series order limited to max_m <= 8");
  FidelityResult r;
  r.method = FidelityMethod::series;
  const PhotonStats stats = photon_stats(state);
  if (stats.variance == 0.0) {
    r.value = 1.0;  // dephasing leaves a Fock state untouched
    return r;
  }
  const auto c = moment_coefficients(state, max_m + 1);
  double sum = 0.0, sign = 1.0, xp = 1.0;
  for (int m = 0; m <= max_m; ++m) {
    sum += sign * c[m] * xp / factorial(m);
    sign = -sign;
    xp *= x;
  }
  r.value = sum;
  r.truncation_error = c[max_m + 1] * xp / factorial(max_m + 1);
  r.series_valid = sum > 0.0 && r.truncation_error <= 0.1 * std::abs(sum);
  return r;
}

FidelityResult fidelity_lower_bound(double x) {
  if (!(x >= 0.0)) fail_invalid("lower bound requires x >= 0");
  FidelityResult r;
  r.value = std::exp(-x);
  r.method = FidelityMethod::lower_bound;
  return r;
}

FidelityResult fidelity_coherent_closed(std::complex<double> alpha, double phase_error) {
  FidelityResult r;
  r.value = std::exp(-2.0 * std::norm(alpha) * (1.0 - std::cos(phase_error)));
  r.method = FidelityMethod::coherent_closed_form;
  return r;
}

TailExponent tail_exponent(const StoredState& state, double x_min, double x_max, int points) {
  if (!(x_min >= 1.0 && x_max <= 1e3 && x_min < x_max))
    fail_invalid("tail exponent window must satisfy 1 <= x_min < x_max <= 1e3");
  if (points < 10) fail_invalid("tail exponent needs at least 10 points");
  const PhotonStats stats = photon_stats(state);
  if (stats.variance == 0.0) return {0.0, true};

  const auto q = difference_distribution(state);
  const double log_lo = std::log(x_min), log_hi = std::log(x_max);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double y_lo = 0.0, y_hi = 0.0;
  for (int i = 0; i < points; ++i) {
    const double lx = log_lo + (log_hi - log_lo) * double(i) / double(points - 1);
    const double damp = std::exp(lx) / stats.variance / 2.0;  // Gamma / 2N
    double f = q[0];
    for (std::size_t d = 1; d < q.size(); ++d)
      f += 2.0 * q[d] * std::exp(-double(d) * double(d) * damp);
    if (!(f > 0.0) || !std::isfinite(f)) fail_numeric("fidelity underflow in tail fit window");
    const double ly = std::log(f);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    if (i == 0) y_lo = ly;
    if (i == points - 1) y_hi = ly;
  }
  const double m = double(points);
  const double det = m * sxx - sx * sx;
  TailExponent t;
  if (std::abs(y_hi - y_lo) < 1e-12) {
    t.degenerate = true;
    return t;
  }
  t.slope = (m * sxy - sx * sy) / det;
  return t;
}

}  // namespace qmem
