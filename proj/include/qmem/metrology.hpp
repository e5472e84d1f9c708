#pragma once

#include "qmem/berry.hpp"
#include "qmem/disorder.hpp"

namespace qmem {

/// Detection run used to measure the global detuning through the rotation
/// of the stored state's Wigner function.
struct MeasurementScenario {
  double tau_s_de = 0.0;   // detection-run storage time
  double tau_d_de = 0.0;   // detection-run driving time
  double Delta_true = 0.0;
  double alpha_theta = 0.0;  // kappa_theta - 1/2 of the detection pulse

  void validate() const;
};

/// Mean rotation phase Delta (tau_s + kappa_theta tau_d) accumulated over
/// one cycle (magnitude convention).
double mean_phase(const SystemParams& params, const Protocol& protocol);

enum class DetuningModel {
  naive,  // divides by tau_s + tau_d/2, omitting the pulse factor
  berry,  // divides by tau_s + kappa_theta tau_d
};

double infer_detuning(double measured_phase, double tau_s, double tau_d, double kappa_theta,
                      DetuningModel model);

/// Residual left by the naive inference:
/// alpha_theta tau_d Delta / (tau_s + tau_d/2).
double residual_detuning(const MeasurementScenario& scenario);

/// (tau_s_de / tau_d_de) / (Delta tau_s sqrt(variance)); large values
/// certify that the residual-detuning phase error stays harmless.
double high_fidelity_margin(const MeasurementScenario& scenario, double tau_s, double variance);

/// ln(2 sqrt(max_variance) + 1), in nats.
double capacity_from_variance(double max_variance);

struct TradeoffPoint {
  double capacity = 0.0;        // nats
  double fidelity_floor = 0.0;  // F0
  double tau_s = 0.0;
  double tau_d = 0.0;
  SystemParams params;
  PulseFactors factors;
};

/// 1 - F0 = (dDelta^2 tau_s^2 + Delta^2 dg^2 zeta^2 tau_d^2 / g^2)
///           (e^C - 1)^2 / (4N), evaluated as printed.
double tradeoff_infidelity(const TradeoffPoint& point);

/// Same quantity evaluated through the cycle phase-variance factor Gamma
/// (keeps the kappa_theta tau_d term and the /4 on the coupling term);
/// reported alongside the printed form, which differs by a factor 4 in
/// the coupling contribution.
double tradeoff_infidelity_gamma_form(const TradeoffPoint& point);

enum class TradeoffVariable { capacity, tau_s, tau_d };

/// Inverts the trade-off equation for one variable with the other two
/// fixed (closed form; every variable enters through a single monotone
/// term). Errors when no positive solution exists.
double tradeoff_solve(double target_fidelity, const SystemParams& params,
                      const PulseFactors& factors, TradeoffVariable solve_for, double capacity,
                      double tau_s, double tau_d);

}  // namespace qmem
