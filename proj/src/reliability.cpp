#include "qmem/reliability.hpp"

#include <cmath>
#include <string>

#include "qmem/errors.hpp"
#include "qmem/fidelity.hpp"

namespace qmem {

namespace {

void check_value(double v, const char* what) {
  if (!(v >= -1e-12 && v <= 1.0 + 1e-12))
    fail_numeric(std::string(what) + " outside [0, 1]: " + std::to_string(v));
}

/// Symmetric signed difference distribution as a vector over
/// s = -radius..radius (index s + radius).
struct SignedDist {
  int radius = 0;
  std::vector<double> mass;
};

SignedDist signed_difference(const StoredState& state) {
  const auto q = difference_distribution(state);
  SignedDist d;
  d.radius = static_cast<int>(q.size()) - 1;
  d.mass.assign(2 * d.radius + 1, 0.0);
  for (int s = -d.radius; s <= d.radius; ++s) d.mass[s + d.radius] = q[std::abs(s)];
  return d;
}

SignedDist convolve(const SignedDist& a, const SignedDist& b, std::size_t budget) {
  SignedDist out;
  out.radius = a.radius + b.radius;
  if (static_cast<std::size_t>(2 * out.radius + 1) > budget)
    fail_budget("synchronizer convolution support exceeds budget");
  out.mass.assign(2 * out.radius + 1, 0.0);
  for (std::size_t i = 0; i < a.mass.size(); ++i) {
    if (a.mass[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.mass.size(); ++j) out.mass[i + j] += a.mass[i] * b.mass[j];
  }
  return out;
}

void validate_rho(const std::vector<double>& rho, int k) {
  if (rho.size() != static_cast<std::size_t>(k) * k)
    fail_invalid("rho must be a k x k matrix");
  for (int i = 0; i < k; ++i) {
    if (std::abs(rho[i * k + i] - 1.0) > 1e-12) fail_invalid("rho diagonal must be 1");
    for (int j = 0; j < k; ++j) {
      const double v = rho[i * k + j];
      if (!(v >= 0.0 && v <= 1.0 + 1e-12)) fail_invalid("rho entries must lie in [0, 1]");
      if (std::abs(v - rho[j * k + i]) > 1e-12) fail_invalid("rho must be symmetric");
    }
  }
  // The Gaussian phase model needs a positive semidefinite correlation;
  // LDL^T with a small pivot tolerance admits the rank-deficient all-ones case.
  std::vector<double> a(rho);
  for (int i = 0; i < k; ++i) {
    double pivot = a[i * k + i];
    if (pivot < -1e-9) fail_invalid("rho is not positive semidefinite");
    if (pivot < 1e-12) {
      for (int j = i; j < k; ++j) a[i * k + j] = 0.0;
      continue;
    }
    for (int r = i + 1; r < k; ++r) {
      const double f = a[r * k + i] / pivot;
      for (int c = i; c < k; ++c) a[r * k + c] -= f * a[i * k + c];
    }
  }
}

}  // namespace

double reliability_sync(const std::vector<StoredState>& states, const PhaseModel& model,
                        bool compensated, std::size_t support_budget) {
  if (states.empty()) fail_invalid("reliability_sync needs at least one state");
  if (model.ensemble_size < 1 || !(model.Gamma >= 0.0)) fail_invalid("invalid phase model");
  SignedDist total = signed_difference(states[0]);
  for (std::size_t j = 1; j < states.size(); ++j)
    total = convolve(total, signed_difference(states[j]), support_budget);

  const double damp = model.Gamma / (2.0 * double(model.ensemble_size));
  double value = total.mass[total.radius];  // s = 0
  for (int s = 1; s <= total.radius; ++s) {
    const double w = total.mass[total.radius + s] + total.mass[total.radius - s];
    const double osc = compensated ? 1.0 : std::cos(double(s) * model.gamma0);
    value += w * osc * std::exp(-double(s) * double(s) * damp);
  }
  check_value(value, "synchronizer reliability");
  return value;
}

double reliability_repeater(const StoredState& state, const PhaseModel& model, int k,
                            bool compensated) {
  if (k < 1) fail_invalid("reliability_repeater needs k >= 1");
  const double f = fidelity_analytic(state, model, compensated).value;
  const double value = std::pow(f, double(k));
  check_value(value, "repeater reliability");
  return value;
}

double reliability_general(const std::vector<StoredState>& states, const PhaseModel& model,
                           const CorrelationSpec& spec, bool compensated,
                           std::size_t term_budget) {
  const int k = spec.k;
  if (k < 1) fail_invalid("reliability_general needs k >= 1");
  if (states.size() != static_cast<std::size_t>(k))
    fail_invalid("spec.k must match the number of states");
  if (model.ensemble_size < 1 || !(model.Gamma >= 0.0)) fail_invalid("invalid phase model");

  std::vector<double> rho;
  switch (spec.mode) {
    case CorrelationMode::synchronizer:
      rho.assign(std::size_t(k) * k, 1.0);
      break;
    case CorrelationMode::repeater:
      rho.assign(std::size_t(k) * k, 0.0);
      for (int i = 0; i < k; ++i) rho[i * std::size_t(k) + i] = 1.0;
      break;
    case CorrelationMode::custom:
      rho = spec.rho;
      break;
  }
  validate_rho(rho, k);

  std::vector<SignedDist> dists;
  dists.reserve(k);
  std::size_t terms = 1;
  for (const auto& s : states) {
    dists.push_back(signed_difference(s));
    const std::size_t width = dists.back().mass.size();
    if (terms > term_budget / width)
      fail_budget("nested-sum term count exceeds budget (" + std::to_string(term_budget) + ")");
    terms *= width;
  }

  const double damp = model.Gamma / (2.0 * double(model.ensemble_size));
  std::vector<int> idx(k, 0);
  std::vector<double> d(k, 0.0);
  double value = 0.0;
  for (;;) {
    double weight = 1.0;
    double s_total = 0.0;
    for (int j = 0; j < k; ++j) {
      weight *= dists[j].mass[idx[j]];
      d[j] = double(idx[j] - dists[j].radius);
      s_total += d[j];
    }
    if (weight != 0.0) {
      double quad = 0.0;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) quad += d[i] * rho[i * std::size_t(k) + j] * d[j];
      const double osc = compensated ? 1.0 : std::cos(s_total * model.gamma0);
      value += weight * osc * std::exp(-quad * damp);
    }
    int j = 0;
    while (j < k && ++idx[j] == static_cast<int>(dists[j].mass.size())) idx[j++] = 0;
    if (j == k) break;
  }
  check_value(value, "general reliability");
  return value;
}

}  // namespace qmem
