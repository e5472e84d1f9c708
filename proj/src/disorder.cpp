#include "qmem/disorder.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qmem/errors.hpp"
#include "qmem/rng.hpp"

namespace qmem {

namespace {
constexpr std::size_t kAtomChunk = 4096;
}

void SystemParams::validate() const {
  if (N < 1) fail_invalid("N must be >= 1");
  if (!(g > 0.0)) fail_invalid("g must be positive");
  if (delta_Delta < 0.0) fail_invalid("delta_Delta must be >= 0");
  if (delta_g < 0.0) fail_invalid("delta_g must be >= 0");
  if (!(delta_g < g)) fail_invalid("delta_g must be smaller than g (negative-coupling sampling)");
  if (!std::isfinite(Delta) || !std::isfinite(delta_Delta) || !std::isfinite(g) ||
      !std::isfinite(delta_g))
    fail_invalid("system parameters must be finite");
}

namespace detail {

void sample_into(const SystemParams& params, std::uint64_t seed, DisorderRealization& out) {
  params.validate();
  if (params.delta_g > 0.0) {
    // Deterministic guard on the redraw probability P(g + delta_g Z <= 0).
    const double reject = 0.5 * std::erfc(params.g / (params.delta_g * std::sqrt(2.0)));
    if (reject > 1e-3)
      fail_invalid("coupling rejection rate " + std::to_string(reject) +
                   " exceeds 1e-3; delta_g too large relative to g");
  }
  const std::size_t n = static_cast<std::size_t>(params.N);
  out.params = params;
  out.detunings.resize(n);
  out.couplings.resize(n);
  out.coupling_redraws = 0;

  const bool draw_detuning = params.delta_Delta > 0.0;
  const bool draw_coupling = params.delta_g > 0.0;
  for (std::size_t chunk = 0; chunk * kAtomChunk < n; ++chunk) {
    NormalSampler normal(mix_seed(seed, chunk));
    const std::size_t hi = std::min(n, (chunk + 1) * kAtomChunk);
    for (std::size_t j = chunk * kAtomChunk; j < hi; ++j) {
      out.detunings[j] = draw_detuning ? params.Delta + params.delta_Delta * normal() : params.Delta;
      if (draw_coupling) {
        double gj = params.g + params.delta_g * normal();
        while (!(gj > 0.0)) {
          ++out.coupling_redraws;
          gj = params.g + params.delta_g * normal();
        }
        out.couplings[j] = gj;
      } else {
        out.couplings[j] = params.g;
      }
    }
  }

  double sum_d = 0.0, sum_g = 0.0;
  for (double d : out.detunings) sum_d += d;
  for (double gj : out.couplings) sum_g += gj;
  out.collective_detuning = sum_d;
  out.collective_coupling = sum_g;
  const double nn = double(params.N);
  if (params.Delta == 0.0)
    out.eps_detuning = std::numeric_limits<double>::quiet_NaN();
  else
    out.eps_detuning = draw_detuning ? (sum_d / nn - params.Delta) / params.Delta : 0.0;
  out.eps_coupling = draw_coupling ? (sum_g / nn - params.g) / params.g : 0.0;
}

}  // namespace detail

DisorderRealization sample_realization(const SystemParams& params, std::uint64_t seed) {
  DisorderRealization out;
  detail::sample_into(params, seed, out);
  return out;
}

CollectiveMoments collective_moments(const SystemParams& params) {
  params.validate();
  const double n = double(params.N);
  return {n * params.Delta, n * params.delta_Delta * params.delta_Delta, n * params.g,
          n * params.delta_g * params.delta_g};
}

}  // namespace qmem
