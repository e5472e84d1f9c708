#include "qmem/metrology.hpp"

#include <cmath>
#include <limits>

#include "qmem/errors.hpp"

namespace qmem {

void MeasurementScenario::validate() const {
  if (!(tau_s_de > 0.0) || !(tau_d_de > 0.0))
    fail_invalid("detection-run times must be positive");
  if (!std::isfinite(Delta_true) || !std::isfinite(alpha_theta))
    fail_invalid("scenario parameters must be finite");
}

double mean_phase(const SystemParams& params, const Protocol& protocol) {
  params.validate();
  return params.Delta * (protocol.tau_s + protocol.factors.kappa_theta * protocol.tau_d());
}

double infer_detuning(double measured_phase, double tau_s, double tau_d, double kappa_theta,
                      DetuningModel model) {
  const double denom =
      model == DetuningModel::berry ? tau_s + kappa_theta * tau_d : tau_s + 0.5 * tau_d;
  if (!(denom > 0.0)) fail_invalid("detuning inference needs a positive time denominator");
  return measured_phase / denom;
}

double residual_detuning(const MeasurementScenario& scenario) {
  scenario.validate();
  return scenario.alpha_theta * scenario.tau_d_de * scenario.Delta_true /
         (scenario.tau_s_de + 0.5 * scenario.tau_d_de);
}

double high_fidelity_margin(const MeasurementScenario& scenario, double tau_s, double variance) {
  scenario.validate();
  if (!(scenario.Delta_true > 0.0)) fail_invalid("margin needs Delta_true > 0");
  if (!(tau_s > 0.0)) fail_invalid("margin needs tau_s > 0");
  if (!(variance >= 0.0)) fail_invalid("margin needs variance >= 0");
  if (variance == 0.0) return std::numeric_limits<double>::infinity();
  return (scenario.tau_s_de / scenario.tau_d_de) /
         (scenario.Delta_true * tau_s * std::sqrt(variance));
}

double capacity_from_variance(double max_variance) {
  if (!(max_variance >= 0.0)) fail_invalid("capacity needs max_variance >= 0");
  return std::log1p(2.0 * std::sqrt(max_variance));
}

namespace {

double detuning_coefficient(const SystemParams& p) { return p.delta_Delta * p.delta_Delta; }

double coupling_coefficient(const SystemParams& p, double zeta) {
  const double c = p.Delta * p.delta_g * zeta / p.g;
  return c * c;
}

}  // namespace

double tradeoff_infidelity(const TradeoffPoint& point) {
  point.params.validate();
  if (!(point.tau_s >= 0.0) || !(point.tau_d >= 0.0)) fail_invalid("times must be >= 0");
  if (!(point.capacity >= 0.0)) fail_invalid("capacity must be >= 0");
  const double ec = std::expm1(point.capacity);
  const double a = detuning_coefficient(point.params) * point.tau_s * point.tau_s +
                   coupling_coefficient(point.params, point.factors.zeta_theta) * point.tau_d *
                       point.tau_d;
  return a * ec * ec / (4.0 * double(point.params.N));
}

double tradeoff_infidelity_gamma_form(const TradeoffPoint& point) {
  point.params.validate();
  const double base = point.tau_s + point.factors.kappa_theta * point.tau_d;
  const double det = point.params.delta_Delta * base;
  const double cpl = 0.5 * point.params.Delta * (point.params.delta_g / point.params.g) *
                     point.factors.zeta_theta * point.tau_d;
  const double gamma = det * det + cpl * cpl;
  const double ec = std::expm1(point.capacity);
  // Gamma <dn^2>_max / N with <dn^2>_max = (e^C - 1)^2 / 4.
  return gamma * ec * ec / (4.0 * double(point.params.N));
}

double tradeoff_solve(double target_fidelity, const SystemParams& params,
                      const PulseFactors& factors, TradeoffVariable solve_for, double capacity,
                      double tau_s, double tau_d) {
  params.validate();
  if (!(target_fidelity > 0.0 && target_fidelity < 1.0))
    fail_invalid("target fidelity must lie in (0, 1)");
  const double rhs = 4.0 * double(params.N) * (1.0 - target_fidelity);
  const double cd = detuning_coefficient(params);
  const double cg = coupling_coefficient(params, factors.zeta_theta);

  switch (solve_for) {
    case TradeoffVariable::capacity: {
      if (!(tau_s >= 0.0) || !(tau_d >= 0.0)) fail_invalid("times must be >= 0");
      const double a = cd * tau_s * tau_s + cg * tau_d * tau_d;
      if (!(a > 0.0))
        fail_invalid("no finite capacity bound: both disorder terms vanish at these times");
      return std::log1p(std::sqrt(rhs / a));
    }
    case TradeoffVariable::tau_s: {
      if (!(capacity > 0.0)) fail_invalid("capacity must be positive when fixed");
      if (!(tau_d >= 0.0)) fail_invalid("tau_d must be >= 0");
      const double ec = std::expm1(capacity);
      const double b = rhs / (ec * ec) - cg * tau_d * tau_d;
      if (cd == 0.0) fail_invalid("tau_s unconstrained: delta_Delta = 0");
      if (b < 0.0) fail_invalid("infeasible: coupling term alone exceeds the infidelity budget");
      return std::sqrt(b / cd);
    }
    case TradeoffVariable::tau_d: {
      if (!(capacity > 0.0)) fail_invalid("capacity must be positive when fixed");
      if (!(tau_s >= 0.0)) fail_invalid("tau_s must be >= 0");
      const double ec = std::expm1(capacity);
      const double b = rhs / (ec * ec) - cd * tau_s * tau_s;
      if (cg == 0.0) fail_invalid("tau_d unconstrained: Delta delta_g zeta_theta = 0");
      if (b < 0.0) fail_invalid("infeasible: broadening term alone exceeds the infidelity budget");
      return std::sqrt(b / cg);
    }
  }
  fail_invalid("unknown trade-off variable");
}

}  // namespace qmem
