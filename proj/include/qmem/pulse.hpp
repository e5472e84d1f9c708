#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qmem {

/// Tabulated driving waveform Omega(t)/sqrt(sum_j g_j^2) on a uniform grid
/// over the driving window [0, tau_d]. The store-in half lives on
/// [0, tau_d/2], the retrieval half is its mirror image. The grid point
/// count is kept odd so the composite quadrature nests on the half grid.
struct PulseProfile {
  std::vector<double> waveform;
  double tau_d = 0.0;

  int grid_points() const { return static_cast<int>(waveform.size()); }
  double dt() const { return tau_d / double(grid_points() - 1); }
  /// Mixing angle tan(theta) = 1/waveform at grid index i.
  double mixing_angle(int i) const;
};

enum class PulseConvention {
  definition,       // evaluate the normalized integrals over the window
  paper_constants,  // fixed (3.2, 2.7) used to reproduce published numbers
};

struct PulseFactors {
  double kappa_theta = 0.0;  // integral of sin^2(theta) d(t/tau_d)
  double zeta_theta = 0.0;   // integral of sin^2(2 theta) d(t/tau_d)
  double alpha_theta = 0.0;  // kappa_theta - 1/2, exactly

  static PulseFactors from_kappa_zeta(double kappa, double zeta) {
    return {kappa, zeta, kappa - 0.5};
  }
};

/// Store-in half waveform xi * exp(-2 ln(xi) (t / (tau_d/2))^2), mirrored
/// for retrieval. An even grid_points is bumped to the next odd value.
PulseProfile gaussian_pulse(double xi, double tau_d, int grid_points);

PulseFactors pulse_factors(const PulseProfile& profile, PulseConvention convention);

/// Quadrature weights w_i with sum_i w_i f(t_i) = integral of f over
/// [0, tau_d] (composite Simpson on the uniform grid).
std::vector<double> quadrature_weights(const PulseProfile& profile);

struct PulseCsvOptions {
  double grid_tolerance = 1e-6;      // relative nonuniformity allowed in t
  double symmetry_tolerance = 1e-6;  // relative mirror-asymmetry allowed
};

/// Columns: t, omega_over_sqrt_sum_g2 (optional header line). Requires an
/// odd row count, t starting at 0, uniform spacing and a positive,
/// mirror-symmetric waveform.
PulseProfile load_pulse_csv(std::istream& in, const PulseCsvOptions& options = {});
PulseProfile load_pulse_csv_file(const std::string& path, const PulseCsvOptions& options = {});

struct SystemParams;

/// min(tau_d, 1/|Delta|) / sqrt(n_max / (N g^2)); callers treat >= 10 as
/// satisfying the adiabatic condition. Delta = 0 counts as 1/|Delta| = inf.
double adiabatic_margin(const SystemParams& params, double tau_d, int n_max);

}  // namespace qmem
