#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace qmem {

/// Truncated Fock-amplitude vector of the optical state to be stored.
/// Amplitudes are indexed by photon number n = 0..n_max and are kept
/// normalized to unity after every constructor.
struct StoredState {
  std::vector<std::complex<double>> amplitudes;

  int n_max() const { return static_cast<int>(amplitudes.size()) - 1; }
  std::vector<double> probabilities() const;
  double norm_squared() const;
};

struct PhotonStats {
  double mean = 0.0;
  double variance = 0.0;
  /// central_moments[j] = sum_n |C_n|^2 (n - mean)^j, j = 0..max_order
  std::vector<double> central_moments;
};

struct TruncationPolicy {
  double eps = 1e-12;             // admissible tail mass beyond n_max
  double max_mean_photons = 400;  // bound on |alpha|^2 for constructors
};

StoredState make_coherent(std::complex<double> alpha, const TruncationPolicy& policy = {});
/// N0 (|alpha> + e^{eta + i theta} |-alpha>), using <alpha|-alpha> = e^{-2|alpha|^2}.
StoredState make_cat(std::complex<double> alpha, double eta, double theta,
                     const TruncationPolicy& policy = {});
/// C_n = 1/sqrt(M+1) for n = 0..M; variance ((M+1)^2 - 1)/12.
StoredState make_uniform(int m_top);
StoredState make_fock(int n);
/// Normalizes the given amplitude vector; errors on zero or non-finite input.
StoredState state_from_amplitudes(std::vector<std::complex<double>> amplitudes);
StoredState state_from_probabilities(std::span<const double> probs);

PhotonStats photon_stats(const StoredState& state, int max_order = 4);

/// JSON document: { "n_max": int, "amplitudes": [[re, im], ...] }
std::string state_to_json(const StoredState& state);
StoredState state_from_json(const std::string& json_text);

// ---- Admissibility diagnostics (tail envelope + weak convergence) ----

struct TailFitCandidate {
  double delta = 0.0;    // stretch exponent of the envelope C exp(-chi u^delta)
  double chi = 0.0;
  double log_c = 0.0;    // ln C, lifted so the envelope dominates the tail
  double rms = 0.0;      // log-space RMS residual of the least-squares fit
  bool feasible = false;
};

struct AppendixBPoint {
  double variance_requested = 0.0;
  double variance = 0.0;
  double mean = 0.0;
  int n_max = 0;
  bool zero_tail = false;          // no mass at |n - <n>| >= 1
  std::vector<TailFitCandidate> fits;
  int best_fit = -1;               // index into fits, -1 if none feasible
};

struct AppendixBReport {
  std::vector<AppendixBPoint> points;
  /// Kolmogorov distance between the standardized CDFs of successive
  /// grid points (NaN where a point has zero variance).
  std::vector<double> kolmogorov_steps;
  bool kolmogorov_decreasing = false;
};

struct AppendixBOptions {
  std::vector<double> deltas = {0.5, 1.0, 1.5, 2.0};
  double tail_floor = 1e-13;   // ignore tail masses below this in fits
  /// The stretched-exponential fit must beat a power-law alternative by
  /// this RMS factor to count as light-tailed.
  double rms_advantage = 0.5;
};

/// A named one-parameter family of states, indexed by target photon-number
/// variance (for fock_family the grid value is the photon number itself).
struct StateFamily {
  std::string name;
  std::function<StoredState(double)> at_variance;
};

StateFamily coherent_family();
StateFamily even_cat_family();
StateFamily uniform_family();
StateFamily fock_family();

AppendixBReport appendix_b_report(const StateFamily& family,
                                  std::span<const double> variance_grid,
                                  const AppendixBOptions& options = {});

}  // namespace qmem
