#pragma once

#include <cstdint>
#include <vector>

namespace qmem {

/// Ensemble description: per-atom detunings are N(Delta, delta_Delta^2)
/// and couplings N(g, delta_g^2), independent across atoms. Frequencies in
/// MHz, times in us throughout the library.
struct SystemParams {
  long long N = 1;
  double Delta = 0.0;
  double delta_Delta = 0.0;
  double g = 1.0;
  double delta_g = 0.0;

  void validate() const;
};

/// One sampled (Delta_j, g_j) vector pair together with its collective
/// statistics. eps_* are the relative deviations of the per-atom means
/// from the ensemble means; eps_detuning is NaN when Delta = 0.
struct DisorderRealization {
  SystemParams params;
  std::vector<double> detunings;
  std::vector<double> couplings;
  double collective_detuning = 0.0;  // sum_j Delta_j
  double collective_coupling = 0.0;  // sum_j g_j
  double eps_detuning = 0.0;
  double eps_coupling = 0.0;
  long long coupling_redraws = 0;    // non-positive draws rejected
};

/// Deterministic in (params, seed): atoms are drawn in fixed chunks with
/// per-chunk derived sub-seeds, so the realization is independent of any
/// parallel partitioning. Non-positive coupling draws are redrawn.
DisorderRealization sample_realization(const SystemParams& params, std::uint64_t seed);

namespace detail {
/// Same sampling, writing into a caller-owned scratch realization.
void sample_into(const SystemParams& params, std::uint64_t seed, DisorderRealization& out);
}  // namespace detail

struct CollectiveMoments {
  double mean_detuning = 0.0;  // N Delta
  double var_detuning = 0.0;   // N delta_Delta^2
  double mean_coupling = 0.0;  // N g
  double var_coupling = 0.0;   // N delta_g^2
};

CollectiveMoments collective_moments(const SystemParams& params);

}  // namespace qmem
