#pragma once

#include <string>

#include "qmem/disorder.hpp"
#include "qmem/pulse.hpp"

namespace qmem {

/// One storage cycle: drive for tau_d (store-in + retrieval), hold for
/// tau_s in between. Factors are derived from the profile under the
/// chosen convention at construction.
struct Protocol {
  double tau_s = 0.0;
  PulseProfile profile;
  PulseFactors factors;
  PulseConvention convention = PulseConvention::definition;

  double tau_d() const { return profile.tau_d; }
  double total_time() const { return tau_s + profile.tau_d; }
  /// The analysis assumes tau_s >> tau_d; reported, never enforced.
  bool storage_dominated(double threshold = 10.0) const {
    return tau_s >= threshold * profile.tau_d;
  }
};

Protocol make_protocol(double tau_s, PulseProfile profile, PulseConvention convention);

/// Homogeneous-ensemble phase data: gamma0 is the n = 1 cycle phase,
/// mu0 the coupling sensitivity, Gamma the collective phase-variance
/// factor entering exp(-(n-n')^2 Gamma / 2N).
struct PhaseModel {
  double gamma0 = 0.0;
  double mu0 = 0.0;
  double Gamma = 0.0;
  long long ensemble_size = 1;
};

PhaseModel build_phase_model(const SystemParams& params, const Protocol& protocol);

std::string phase_model_to_json(const PhaseModel& model);

/// Cycle phase of Fock component n for one disorder realization:
/// -n * (sum_j g_j^2 Delta_j / sum_k g_k^2) * (tau_s + driving integral),
/// with the realization's own sum g_k^2 entering the mixing angle.
double berry_phase_exact(const DisorderRealization& realization, const Protocol& protocol,
                         long long n);

/// First-order expansion n (gamma0 (1 + eps_Delta) + mu0 eps_g);
/// unavailable at Delta = 0.
double berry_phase_linear(const DisorderRealization& realization, const PhaseModel& model,
                          long long n);

/// Integral of sin^2(theta_g) over the driving window as a function of
/// rho = (sum_k g_k^2) / (N g^2), reusable across Monte Carlo samples.
class DrivingIntegral {
 public:
  explicit DrivingIntegral(const PulseProfile& profile);
  double operator()(double rho) const;

 private:
  std::vector<double> weights_;
  std::vector<double> waveform_sq_;
};

}  // namespace qmem
