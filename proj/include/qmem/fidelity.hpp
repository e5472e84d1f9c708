#pragma once

#include <cstdint>
#include <vector>

#include "qmem/berry.hpp"
#include "qmem/disorder.hpp"
#include "qmem/fock.hpp"

namespace qmem {

enum class FidelityMethod {
  analytic,
  monte_carlo_exact_phase,
  monte_carlo_linear_phase,
  series,
  lower_bound,
  coherent_closed_form,
};

struct FidelityResult {
  double value = 0.0;
  FidelityMethod method = FidelityMethod::analytic;
  double std_error = 0.0;        // Monte Carlo only, else 0
  long long samples = 0;         // Monte Carlo only, else 0
  double truncation_error = 0.0; // series only: first omitted term estimate
  bool series_valid = true;      // false when the series estimate is unusable
};

/// Autocorrelation q(d) = sum_n p_n p_{n+d} of the photon-number
/// distribution, d = 0..n_max. Fidelities depend on the state only
/// through q.
std::vector<double> difference_distribution(const StoredState& state);

/// Double sum over the truncated support:
/// sum_{n,n'} p_n p_{n'} cos((n-n') gamma0) exp(-(n-n')^2 Gamma / 2N).
/// compensated = true drops the oscillatory factor.
FidelityResult fidelity_analytic(const StoredState& state, const PhaseModel& model,
                                 bool compensated);

enum class PhaseMode { exact, linear };

/// Disorder-averaged overlap estimate E_xi |<phi_in|phi_out,xi>|^2 with
/// cycle phases from the exact or the linearized path. Samples are drawn
/// in fixed chunks with derived sub-seeds; the estimate is reproducible
/// for a given seed regardless of worker count.
FidelityResult fidelity_monte_carlo(const StoredState& state, const SystemParams& params,
                                    const Protocol& protocol, PhaseMode phase_mode,
                                    long long samples, std::uint64_t seed, bool compensated,
                                    int workers = 1);

/// Moment coefficients c_m = E[((Z - Z')^2 / 2)^m] of the standardized
/// photon-number variable, computed by the exact double sum over the
/// support. c_0 = c_1 = 1 for any state with positive variance.
std::vector<double> series_coefficients(const StoredState& state, int max_m);

/// Truncated expansion sum_m (c_m / m!) (-x)^m with x = Gamma <dn^2> / N.
/// The result is flagged invalid when the first omitted term exceeds 10%
/// of the partial sum.
FidelityResult fidelity_series(const StoredState& state, double x, int max_m);

/// exp(-x), the universal floor for any stored state.
FidelityResult fidelity_lower_bound(double x);

/// exp(-2 |alpha|^2 (1 - cos(phase_error))) for a stored coherent state,
/// with phase_error the accumulated residual-detuning phase.
FidelityResult fidelity_coherent_closed(std::complex<double> alpha, double phase_error);

struct TailExponent {
  double slope = 0.0;
  bool degenerate = false;  // fidelity flat over the window (e.g. Fock input)
};

/// Least-squares slope of log F_analytic(compensated) against log x on a
/// log-spaced grid, x = Gamma <dn^2> / N swept via Gamma/N at fixed state.
TailExponent tail_exponent(const StoredState& state, double x_min, double x_max, int points);

}  // namespace qmem
