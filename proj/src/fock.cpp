#include "qmem/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "json.hpp"
#include "qmem/errors.hpp"

namespace qmem {

namespace {

void renormalize(std::vector<std::complex<double>>& amps) {
  double n2 = 0.0;
  for (const auto& a : amps) n2 += std::norm(a);
  if (!(n2 > 0.0) || !std::isfinite(n2)) fail_invalid("state has zero or non-finite norm");
  // Idempotent at machine precision, so serialization round-trips bitwise.
  if (std::abs(n2 - 1.0) <= 4e-16) return;
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& a : amps) a *= inv;
}

/// Smallest m such that the mass beyond m is below eps; tail accumulated
/// from the top so the small terms are summed first.
int truncation_index(const std::vector<double>& weights, double eps) {
  const int count = static_cast<int>(weights.size());
  double total = 0.0;
  for (double w : weights) total += w;
  double tail = 0.0;
  int cut = count - 1;
  for (int m = count - 1; m >= 1; --m) {
    tail += weights[m];
    if (tail / total >= eps) break;
    cut = m - 1;
  }
  return cut;
}

std::vector<std::complex<double>> coherent_amplitudes(std::complex<double> alpha,
                                                      const TruncationPolicy& policy) {
  const double lambda = std::norm(alpha);
  if (!std::isfinite(lambda)) fail_invalid("non-finite coherent amplitude");
  if (lambda > policy.max_mean_photons)
    fail_invalid("amplitude too large for truncation budget (|alpha|^2 > " +
                 std::to_string(policy.max_mean_photons) + ")");
  const int n_cap = static_cast<int>(std::ceil(lambda + 14.0 * std::sqrt(lambda + 1.0) + 40.0));
  std::vector<std::complex<double>> amps(n_cap + 1);
  amps[0] = std::exp(-0.5 * lambda);
  for (int n = 0; n < n_cap; ++n) amps[n + 1] = amps[n] * alpha / std::sqrt(double(n + 1));
  return amps;
}

StoredState truncate_and_normalize(std::vector<std::complex<double>> amps, double eps) {
  std::vector<double> w(amps.size());
  for (std::size_t i = 0; i < amps.size(); ++i) w[i] = std::norm(amps[i]);
  const int cut = truncation_index(w, eps);
  amps.resize(cut + 1);
  renormalize(amps);
  return StoredState{std::move(amps)};
}

}  // namespace

std::vector<double> StoredState::probabilities() const {
  std::vector<double> p(amplitudes.size());
  for (std::size_t i = 0; i < amplitudes.size(); ++i) p[i] = std::norm(amplitudes[i]);
  return p;
}

double StoredState::norm_squared() const {
  double n2 = 0.0;
  for (const auto& a : amplitudes) n2 += std::norm(a);
  return n2;
}

StoredState make_coherent(std::complex<double> alpha, const TruncationPolicy& policy) {
  return truncate_and_normalize(coherent_amplitudes(alpha, policy), policy.eps);
}

StoredState make_cat(std::complex<double> alpha, double eta, double theta,
                     const TruncationPolicy& policy) {
  if (!std::isfinite(eta) || !std::isfinite(theta)) fail_invalid("non-finite cat parameter");
  auto amps = coherent_amplitudes(alpha, policy);
  // Branch factor 1 + (-1)^n e^{eta + i theta}; for eta > 0 the common
  // e^{eta} is dropped (normalization absorbs it) to avoid overflow.
  const std::complex<double> phase(std::cos(theta), std::sin(theta));
  for (std::size_t n = 0; n < amps.size(); ++n) {
    const double parity = (n % 2 == 0) ? 1.0 : -1.0;
    std::complex<double> factor;
    if (eta > 0.0)
      factor = std::exp(-eta) + parity * phase;
    else
      factor = 1.0 + parity * std::exp(eta) * phase;
    amps[n] *= factor;
  }
  return truncate_and_normalize(std::move(amps), policy.eps);
}

StoredState make_uniform(int m_top) {
  if (m_top < 0) fail_invalid("uniform superposition requires M >= 0");
  const double a = 1.0 / std::sqrt(double(m_top) + 1.0);
  return StoredState{std::vector<std::complex<double>>(m_top + 1, a)};
}

StoredState make_fock(int n) {
  if (n < 0) fail_invalid("Fock index must be >= 0");
  std::vector<std::complex<double>> amps(n + 1, 0.0);
  amps[n] = 1.0;
  return StoredState{std::move(amps)};
}

StoredState state_from_amplitudes(std::vector<std::complex<double>> amplitudes) {
  if (amplitudes.empty()) fail_invalid("empty amplitude vector");
  for (const auto& a : amplitudes)
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      fail_invalid("non-finite amplitude");
  renormalize(amplitudes);
  return StoredState{std::move(amplitudes)};
}

StoredState state_from_probabilities(std::span<const double> probs) {
  std::vector<std::complex<double>> amps(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!(probs[i] >= 0.0) || !std::isfinite(probs[i])) fail_invalid("negative or non-finite probability");
    amps[i] = std::sqrt(probs[i]);
  }
  return state_from_amplitudes(std::move(amps));
}

PhotonStats photon_stats(const StoredState& state, int max_order) {
  if (max_order < 2) fail_invalid("photon_stats requires max_order >= 2");
  const double n2 = state.norm_squared();
  if (std::abs(n2 - 1.0) > 1e-10) fail_invalid("state is not normalized");
  const auto p = state.probabilities();
  double mean = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) mean += p[n] * double(n);
  PhotonStats stats;
  stats.mean = mean;
  stats.central_moments.assign(max_order + 1, 0.0);
  for (std::size_t n = 0; n < p.size(); ++n) {
    const double d = double(n) - mean;
    double pw = p[n];
    stats.central_moments[0] += pw;
    for (int j = 1; j <= max_order; ++j) {
      pw *= d;
      stats.central_moments[j] += pw;
    }
  }
  stats.variance = stats.central_moments[2];
  return stats;
}

std::string state_to_json(const StoredState& state) {
  nlohmann::json doc;
  doc["n_max"] = state.n_max();
  auto& arr = doc["amplitudes"] = nlohmann::json::array();
  for (const auto& a : state.amplitudes) arr.push_back({a.real(), a.imag()});
  return doc.dump();
}

StoredState state_from_json(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail_io(std::string("state JSON parse error: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n_max") || !doc.contains("amplitudes"))
    fail_invalid("state JSON must contain n_max and amplitudes");
  for (const auto& [key, _] : doc.items())
    if (key != "n_max" && key != "amplitudes") fail_invalid("unknown key in state JSON: " + key);
  const auto& arr = doc["amplitudes"];
  if (!arr.is_array() || arr.empty()) fail_invalid("state JSON amplitudes must be a non-empty array");
  std::vector<std::complex<double>> amps;
  amps.reserve(arr.size());
  for (const auto& entry : arr) {
    if (!entry.is_array() || entry.size() != 2) fail_invalid("state JSON amplitude entries must be [re, im]");
    amps.emplace_back(entry[0].get<double>(), entry[1].get<double>());
  }
  if (doc["n_max"].get<int>() != static_cast<int>(amps.size()) - 1)
    fail_invalid("state JSON n_max inconsistent with amplitude count");
  return state_from_amplitudes(std::move(amps));
}

// ---- Appendix-B style diagnostics ----

namespace {

/// Two-sided tail mass T(u) = sum_{|n - <n>| >= u} p_n for integer u >= 1,
/// trimmed to masses above the floor.
std::vector<std::pair<double, double>> tail_samples(const std::vector<double>& p, double mean,
                                                    double floor) {
  const int count = static_cast<int>(p.size());
  const int u_top = static_cast<int>(std::floor(std::max(mean, double(count - 1) - mean)));
  std::vector<std::pair<double, double>> out;
  for (int u = 1; u <= u_top; ++u) {
    double t = 0.0;
    for (int n = 0; n < count; ++n)
      if (std::abs(double(n) - mean) >= double(u)) t += p[n];
    if (t > floor) out.emplace_back(double(u), t);
  }
  return out;
}

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double rms = 0.0;
};

/// Least squares of y against a + b * basis(u).
LineFit fit_line(const std::vector<std::pair<double, double>>& pts,
                 const std::function<double(double)>& basis) {
  const double m = double(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [u, t] : pts) {
    const double x = basis(u), y = std::log(t);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double det = m * sxx - sx * sx;
  LineFit f;
  if (std::abs(det) < 1e-300) {
    f.intercept = sy / m;
    f.slope = 0.0;
  } else {
    f.slope = (m * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / m;
  }
  double ss = 0.0;
  for (const auto& [u, t] : pts) {
    const double r = std::log(t) - (f.intercept + f.slope * basis(u));
    ss += r * r;
  }
  f.rms = std::sqrt(ss / m);
  return f;
}

struct CdfAtoms {
  std::vector<double> z;    // standardized jump locations, ascending
  std::vector<double> cum;  // CDF value just after each jump
};

CdfAtoms standardized_cdf(const std::vector<double>& p, double mean, double variance) {
  CdfAtoms c;
  const double inv = 1.0 / std::sqrt(variance);
  double cum = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    cum += p[n];
    c.z.push_back((double(n) - mean) * inv);
    c.cum.push_back(cum);
  }
  return c;
}

double cdf_value(const CdfAtoms& c, double z) {
  auto it = std::upper_bound(c.z.begin(), c.z.end(), z);
  if (it == c.z.begin()) return 0.0;
  return c.cum[std::distance(c.z.begin(), it) - 1];
}

double kolmogorov_distance(const CdfAtoms& a, const CdfAtoms& b) {
  std::vector<double> pts;
  pts.reserve(a.z.size() + b.z.size());
  pts.insert(pts.end(), a.z.begin(), a.z.end());
  pts.insert(pts.end(), b.z.begin(), b.z.end());
  std::sort(pts.begin(), pts.end());
  double d = 0.0;
  for (double z : pts) {
    d = std::max(d, std::abs(cdf_value(a, z) - cdf_value(b, z)));
    const double zl = z - 1e-12 * (1.0 + std::abs(z));
    d = std::max(d, std::abs(cdf_value(a, zl) - cdf_value(b, zl)));
  }
  return d;
}

}  // namespace

StateFamily coherent_family() {
  return {"coherent", [](double v) {
            if (v < 0) fail_invalid("coherent family needs variance >= 0");
            return make_coherent(std::sqrt(v));
          }};
}

StateFamily even_cat_family() {
  return {"even_cat", [](double v) {
            if (v < 0) fail_invalid("even cat family needs variance >= 0");
            if (v == 0) return make_fock(0);
            // variance(lambda) = lambda tanh(lambda) + lambda^2 sech^2(lambda),
            // monotone; invert by bisection.
            double lo = 0.0, hi = v + 2.0;
            for (int it = 0; it < 200; ++it) {
              const double mid = 0.5 * (lo + hi);
              const double th = std::tanh(mid);
              const double sech2 = 1.0 - th * th;
              const double vm = mid * th + mid * mid * sech2;
              (vm < v ? lo : hi) = mid;
            }
            const double lambda = 0.5 * (lo + hi);
            return make_cat(std::sqrt(lambda), 0.0, 0.0);
          }};
}

StateFamily uniform_family() {
  return {"uniform", [](double v) {
            if (v < 0) fail_invalid("uniform family needs variance >= 0");
            const int m = static_cast<int>(std::lround(std::sqrt(12.0 * v + 1.0) - 1.0));
            return make_uniform(std::max(m, 0));
          }};
}

StateFamily fock_family() {
  // Grid values index the photon number; every member has zero variance.
  return {"fock", [](double v) {
            return make_fock(static_cast<int>(std::lround(std::max(v, 0.0))));
          }};
}

AppendixBReport appendix_b_report(const StateFamily& family,
                                  std::span<const double> variance_grid,
                                  const AppendixBOptions& options) {
  if (variance_grid.empty()) fail_invalid("appendix_b_report needs a non-empty grid");
  for (std::size_t i = 1; i < variance_grid.size(); ++i)
    if (!(variance_grid[i] > variance_grid[i - 1]))
      fail_invalid("variance grid must be strictly increasing");

  AppendixBReport report;
  std::vector<CdfAtoms> cdfs;
  for (double v : variance_grid) {
    const StoredState state = family.at_variance(v);
    const auto p = state.probabilities();
    const PhotonStats stats = photon_stats(state);
    AppendixBPoint point;
    point.variance_requested = v;
    point.variance = stats.variance;
    point.mean = stats.mean;
    point.n_max = state.n_max();

    const auto tails = tail_samples(p, stats.mean, options.tail_floor);
    if (tails.size() < 3) {
      point.zero_tail = tails.empty();
      // Too few tail points for a meaningful fit; zero tail satisfies the
      // envelope condition trivially.
    } else {
      const LineFit power = fit_line(tails, [](double u) { return std::log(u); });
      double best_rms = std::numeric_limits<double>::infinity();
      for (double delta : options.deltas) {
        const LineFit f = fit_line(tails, [delta](double u) { return std::pow(u, delta); });
        TailFitCandidate cand;
        cand.delta = delta;
        cand.chi = -f.slope;
        cand.rms = f.rms;
        // Lift ln C so the envelope dominates every sampled tail mass.
        double lift = -std::numeric_limits<double>::infinity();
        for (const auto& [u, t] : tails)
          lift = std::max(lift, std::log(t) + cand.chi * std::pow(u, delta));
        cand.log_c = lift;
        cand.feasible = cand.chi > 0.0 && f.rms <= options.rms_advantage * power.rms;
        if (cand.feasible && f.rms < best_rms) {
          best_rms = f.rms;
          point.best_fit = static_cast<int>(point.fits.size());
        }
        point.fits.push_back(cand);
      }
    }

    if (stats.variance > 0.0)
      cdfs.push_back(standardized_cdf(p, stats.mean, stats.variance));
    else
      cdfs.push_back(CdfAtoms{});
    report.points.push_back(std::move(point));
  }

  for (std::size_t i = 1; i < cdfs.size(); ++i) {
    if (cdfs[i - 1].z.empty() || cdfs[i].z.empty())
      report.kolmogorov_steps.push_back(std::numeric_limits<double>::quiet_NaN());
    else
      report.kolmogorov_steps.push_back(kolmogorov_distance(cdfs[i - 1], cdfs[i]));
  }
  report.kolmogorov_decreasing = report.kolmogorov_steps.size() >= 2;
  for (std::size_t i = 1; i < report.kolmogorov_steps.size(); ++i)
    if (!(report.kolmogorov_steps[i] < report.kolmogorov_steps[i - 1]))
      report.kolmogorov_decreasing = false;
  return report;
}

}  // namespace qmem
