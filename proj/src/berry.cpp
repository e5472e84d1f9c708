#include "qmem/berry.hpp"

#include <cmath>

#include "json.hpp"
#include "qmem/errors.hpp"

namespace qmem {

Protocol make_protocol(double tau_s, PulseProfile profile, PulseConvention convention) {
  if (!(tau_s >= 0.0)) fail_invalid("tau_s must be >= 0");
  PulseFactors factors = pulse_factors(profile, convention);
  return Protocol{tau_s, std::move(profile), factors, convention};
}

PhaseModel build_phase_model(const SystemParams& params, const Protocol& protocol) {
  params.validate();
  const double base = protocol.tau_s + protocol.factors.kappa_theta * protocol.tau_d();
  PhaseModel model;
  model.gamma0 = -params.Delta * base;
  model.mu0 = -0.5 * params.Delta * protocol.factors.zeta_theta * protocol.tau_d();
  // Unexpanded products keep Gamma finite and continuous at Delta = 0.
  const double det_term = params.delta_Delta * base;
  const double cpl_term =
      (params.delta_g / params.g) * 0.5 * params.Delta * protocol.factors.zeta_theta * protocol.tau_d();
  model.Gamma = det_term * det_term + cpl_term * cpl_term;
  model.ensemble_size = params.N;
  return model;
}

std::string phase_model_to_json(const PhaseModel& model) {
  nlohmann::json doc;
  doc["gamma0"] = model.gamma0;
  doc["mu0"] = model.mu0;
  doc["Gamma"] = model.Gamma;
  doc["ensemble_size"] = model.ensemble_size;
  return doc.dump();
}

DrivingIntegral::DrivingIntegral(const PulseProfile& profile)
    : weights_(quadrature_weights(profile)), waveform_sq_(profile.waveform.size()) {
  for (std::size_t i = 0; i < waveform_sq_.size(); ++i)
    waveform_sq_[i] = profile.waveform[i] * profile.waveform[i];
}

double DrivingIntegral::operator()(double rho) const {
  // sin^2(theta_g) = rho / (rho + r^2) with r the tabulated waveform.
  double s = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i)
    s += weights_[i] * rho / (rho + waveform_sq_[i]);
  return s;
}

double berry_phase_exact(const DisorderRealization& realization, const Protocol& protocol,
                         long long n) {
  if (n < 0) fail_invalid("photon number must be >= 0");
  if (n == 0) return 0.0;
  double sum_g2 = 0.0, sum_g2d = 0.0;
  for (std::size_t j = 0; j < realization.couplings.size(); ++j) {
    const double g2 = realization.couplings[j] * realization.couplings[j];
    sum_g2 += g2;
    sum_g2d += g2 * realization.detunings[j];
  }
  const double weighted_detuning = sum_g2d / sum_g2;
  const SystemParams& p = realization.params;
  const double rho = sum_g2 / (double(p.N) * p.g * p.g);
  const DrivingIntegral integral(protocol.profile);
  return -double(n) * weighted_detuning * (protocol.tau_s + integral(rho));
}

double berry_phase_linear(const DisorderRealization& realization, const PhaseModel& model,
                          long long n) {
  if (n < 0) fail_invalid("photon number must be >= 0");
  if (!std::isfinite(realization.eps_detuning))
    fail_invalid("linearized phase unavailable at Delta = 0");
  return double(n) *
         (model.gamma0 * (1.0 + realization.eps_detuning) + model.mu0 * realization.eps_coupling);
}

}  // namespace qmem
