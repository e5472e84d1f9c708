#include "qmem/pulse.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <sstream>

#include "qmem/disorder.hpp"
#include "qmem/errors.hpp"

namespace qmem {

namespace {

void validate_profile(const PulseProfile& p, double symmetry_tolerance) {
  if (p.grid_points() < 5 || (p.grid_points() - 1) % 4 != 0)
    fail_invalid("pulse grid needs an interval count divisible by 4 (for the nested quadrature check)");
  if (!(p.tau_d > 0.0)) fail_invalid("tau_d must be positive");
  for (double w : p.waveform)
    if (!(w > 0.0) || !std::isfinite(w)) fail_invalid("waveform must be positive and finite");
  const int g = p.grid_points();
  for (int i = 0; i < g / 2; ++i) {
    const double a = p.waveform[i], b = p.waveform[g - 1 - i];
    if (std::abs(a - b) > symmetry_tolerance * std::max(a, b))
      fail_invalid("waveform is not mirror symmetric about tau_d/2");
  }
}

/// Simpson sums over the grid with stride `step` (step in {1, 2}).
double simpson(const std::vector<double>& f, double h, int step) {
  const int last = static_cast<int>(f.size()) - 1;
  double s = f[0] + f[last];
  for (int i = step; i < last; i += step)
    s += f[i] * ((i / step) % 2 == 1 ? 4.0 : 2.0);
  return s * (h * step) / 3.0;
}

}  // namespace

double PulseProfile::mixing_angle(int i) const { return std::atan2(1.0, waveform[i]); }

PulseProfile gaussian_pulse(double xi, double tau_d, int grid_points) {
  if (!(xi > 1.0)) fail_invalid("gaussian pulse requires xi > 1 (no adiabatic sweep)");
  if (!(tau_d > 0.0)) fail_invalid("tau_d must be positive");
  if (grid_points < 1000) fail_invalid("gaussian pulse requires grid_points >= 1000");
  while ((grid_points - 1) % 4 != 0) ++grid_points;

  PulseProfile p;
  p.tau_d = tau_d;
  p.waveform.resize(grid_points);
  const double log_xi = std::log(xi);
  for (int i = 0; i <= (grid_points - 1) / 2; ++i) {
    const double u = double(i) / double(grid_points - 1);  // t/tau_d in [0, 1/2]
    const double w = std::exp(log_xi * (1.0 - 8.0 * u * u));
    p.waveform[i] = w;
    p.waveform[grid_points - 1 - i] = w;  // retrieval mirror, exact on the grid
  }
  validate_profile(p, 0.0);
  return p;
}

std::vector<double> quadrature_weights(const PulseProfile& profile) {
  const int g = profile.grid_points();
  const double h = profile.dt();
  std::vector<double> w(g, 0.0);
  w[0] = w[g - 1] = h / 3.0;
  for (int i = 1; i < g - 1; ++i) w[i] = (i % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
  return w;
}

PulseFactors pulse_factors(const PulseProfile& profile, PulseConvention convention) {
  if (convention == PulseConvention::paper_constants)
    return PulseFactors::from_kappa_zeta(3.2, 2.7);

  validate_profile(profile, 1e-6);
  const int g = profile.grid_points();
  std::vector<double> sin2(g), sin2_2(g);
  for (int i = 0; i < g; ++i) {
    const double r2 = profile.waveform[i] * profile.waveform[i];
    sin2[i] = 1.0 / (1.0 + r2);             // sin^2(theta)
    sin2_2[i] = 4.0 * r2 / ((1.0 + r2) * (1.0 + r2));  // sin^2(2 theta)
  }
  const double h = profile.dt();
  const double kappa = simpson(sin2, h, 1) / profile.tau_d;
  const double zeta = simpson(sin2_2, h, 1) / profile.tau_d;
  // Nested coarse rule as a convergence certificate.
  const double kappa_coarse = simpson(sin2, h, 2) / profile.tau_d;
  const double zeta_coarse = simpson(sin2_2, h, 2) / profile.tau_d;
  if (std::abs(kappa - kappa_coarse) > 1e-8 || std::abs(zeta - zeta_coarse) > 1e-8)
    fail_numeric("pulse factor quadrature did not converge on this grid");
  return PulseFactors::from_kappa_zeta(kappa, zeta);
}

PulseProfile load_pulse_csv(std::istream& in, const PulseCsvOptions& options) {
  std::vector<double> ts, ws;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b)) fail_io("pulse CSV row needs two columns");
    char* end = nullptr;
    const double t = std::strtod(a.c_str(), &end);
    if (first && end == a.c_str()) {  // header line
      first = false;
      continue;
    }
    first = false;
    if (end == a.c_str()) fail_io("pulse CSV: unparsable time value '" + a + "'");
    const double w = std::strtod(b.c_str(), &end);
    if (end == b.c_str()) fail_io("pulse CSV: unparsable waveform value '" + b + "'");
    ts.push_back(t);
    ws.push_back(w);
  }
  if (ts.size() < 3) fail_invalid("pulse CSV needs at least 3 samples");
  if (std::abs(ts.front()) > 1e-12 * std::abs(ts.back())) fail_invalid("pulse CSV must start at t = 0");
  PulseProfile p;
  p.tau_d = ts.back();
  p.waveform = std::move(ws);
  if (!(p.tau_d > 0.0)) fail_invalid("pulse CSV must end at t = tau_d > 0");
  const double h = p.dt();
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (std::abs(ts[i] - double(i) * h) > options.grid_tolerance * p.tau_d)
      fail_invalid("pulse CSV time grid is not uniform");
  validate_profile(p, options.symmetry_tolerance);
  return p;
}

PulseProfile load_pulse_csv_file(const std::string& path, const PulseCsvOptions& options) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open pulse CSV: " + path);
  return load_pulse_csv(in, options);
}

double adiabatic_margin(const SystemParams& params, double tau_d, int n_max) {
  if (n_max < 1) fail_invalid("adiabatic margin requires n_max >= 1");
  if (!(tau_d > 0.0)) fail_invalid("adiabatic margin requires tau_d > 0");
  params.validate();
  const double scale = std::sqrt(double(n_max) / (double(params.N) * params.g * params.g));
  const double inv_delta =
      params.Delta == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / std::abs(params.Delta);
  return std::min(tau_d, inv_delta) / scale;
}

}  // namespace qmem
