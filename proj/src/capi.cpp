#define QMEM_API __attribute__((visibility("default")))

#include "qmem.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "qmem/errors.hpp"
#include "qmem/fidelity.hpp"
#include "qmem/fock.hpp"
#include "qmem/pulse.hpp"
#include "qmem/runner.hpp"

struct qmem_state {
  qmem::StoredState value;
};
struct qmem_pulse {
  qmem::PulseProfile value;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_error(char** errmsg, const std::string& what) {
  if (errmsg) *errmsg = dup_string(what);
}

qmem_status status_of(const qmem::Error& e) {
  switch (e.code()) {
    case qmem::ErrorCode::invalid_argument: return QMEM_ERR_INVALID_ARGUMENT;
    case qmem::ErrorCode::numeric_failure: return QMEM_ERR_NUMERIC;
    case qmem::ErrorCode::budget_exceeded: return QMEM_ERR_BUDGET;
    case qmem::ErrorCode::io_error: return QMEM_ERR_IO;
  }
  return QMEM_ERR_INTERNAL;
}

template <typename Fn>
qmem_status guarded(char** errmsg, Fn&& fn) {
  try {
    fn();
    return QMEM_OK;
  } catch (const qmem::Error& e) {
    set_error(errmsg, e.what());
    return status_of(e);
  } catch (const std::exception& e) {
    set_error(errmsg, e.what());
    return QMEM_ERR_INTERNAL;
  } catch (...) {
    set_error(errmsg, "unknown error");
    return QMEM_ERR_INTERNAL;
  }
}

qmem::PhaseModel to_model(const qmem_phase_model* m) {
  if (!m) qmem::fail_invalid("phase model pointer is null");
  return {m->gamma0, m->mu0, m->Gamma, m->ensemble_size};
}

}  // namespace

extern "C" {

const char* qmem_version(void) { return "1.0.0"; }

void qmem_string_free(char* s) { std::free(s); }

qmem_status qmem_state_coherent(double alpha_re, double alpha_im, qmem_state** out,
                                char** errmsg) {
  return guarded(errmsg, [&] {
    if (!out) qmem::fail_invalid("output pointer is null");
    *out = new qmem_state{qmem::make_coherent({alpha_re, alpha_im})};
  });
}

qmem_status qmem_state_cat(double alpha_re, double alpha_im, double eta, double theta,
                           qmem_state** out, char** errmsg) {
  return guarded(errmsg, [&] {
    if (!out) qmem::fail_invalid("output pointer is null");
    *out = new qmem_state{qmem::make_cat({alpha_re, alpha_im}, eta, theta)};
  });
}

qmem_status qmem_state_uniform(int m_top, qmem_state** out, char** errmsg) {
  return guarded(errmsg, [&] {
    if (!out) qmem::fail_invalid("output pointer is null");
    *out = new qmem_state{qmem::make_uniform(m_top)};
  });
}

qmem_status qmem_state_fock(int n, qmem_state** out, char** errmsg) {
  return guarded(errmsg, [&] {
    if (!out) qmem::fail_invalid("output pointer is null");
    *out = new qmem_state{qmem::make_fock(n)};
  });
}

qmem_status qmem_state_from_json(const char* json_text, qmem_state** out, char** errmsg) {
  return guarded(errmsg, [&] {
    if (!out || !json_text) qmem::fail_invalid("null pointer argument");
    *out = new qmem_state{qmem::state_from_json(json_text)};
  });
}

qmem_status qmem_state_to_json(const qmem_state* state, char** json_out, char** errmsg) {
  return guarded(errmsg, [&] {
    if (!state || !json_out) qmem::fail_invalid("null pointer argument");
    *json_out = dup_string(qmem::state_to_json(state->value));
  });
}

qmem_status qmem_state_stats(const qmem_state* state, double* mean, double* variance,
                             char** errmsg) {
  return guarded(errmsg, [&] {
    if (!state) qmem::fail_invalid("state pointer is null");
    const qmem::PhotonStats s = qmem::photon_stats(state->value);
    if (mean) *mean = s.mean;
    if (variance) *variance = s.variance;
  });
}

int qmem_state_n_max(const qmem_state* state) { return state ? state->value.n_max() : -1; }

void qmem_state_free(qmem_state* state) { delete state; }

qmem_status qmem_pulse_gaussian(double xi, double tau_d, int grid_points, qmem_pulse** out,
                                char** errmsg) {
  return guarded(errmsg, [&] {
    if (!out) qmem::fail_invalid("output pointer is null");
    *out = new qmem_pulse{qmem::gaussian_pulse(xi, tau_d, grid_points)};
  });
}

qmem_status qmem_pulse_from_csv(const char* path, qmem_pulse** out, char** errmsg) {
  return guarded(errmsg, [&] {
    if (!out || !path) qmem::fail_invalid("null pointer argument");
    *out = new qmem_pulse{qmem::load_pulse_csv_file(path)};
  });
}

qmem_status qmem_pulse_factors(const qmem_pulse* pulse, int use_paper_constants,
                               double* kappa_theta, double* zeta_theta, double* alpha_theta,
                               char** errmsg) {
  return guarded(errmsg, [&] {
    if (!pulse) qmem::fail_invalid("pulse pointer is null");
    const qmem::PulseFactors f = qmem::pulse_factors(
        pulse->value, use_paper_constants ? qmem::PulseConvention::paper_constants
                                          : qmem::PulseConvention::definition);
    if (kappa_theta) *kappa_theta = f.kappa_theta;
    if (zeta_theta) *zeta_theta = f.zeta_theta;
    if (alpha_theta) *alpha_theta = f.alpha_theta;
  });
}

void qmem_pulse_free(qmem_pulse* pulse) { delete pulse; }

qmem_status qmem_fidelity_analytic(const qmem_state* state, const qmem_phase_model* model,
                                   int compensated, double* out, char** errmsg) {
  return guarded(errmsg, [&] {
    if (!state || !out) qmem::fail_invalid("null pointer argument");
    *out = qmem::fidelity_analytic(state->value, to_model(model), compensated != 0).value;
  });
}

qmem_status qmem_fidelity_lower_bound(double x, double* out, char** errmsg) {
  return guarded(errmsg, [&] {
    if (!out) qmem::fail_invalid("output pointer is null");
    *out = qmem::fidelity_lower_bound(x).value;
  });
}

qmem_status qmem_fidelity_coherent_closed(double alpha_abs, double phase_error, double* out,
                                          char** errmsg) {
  return guarded(errmsg, [&] {
    if (!out) qmem::fail_invalid("output pointer is null");
    *out = qmem::fidelity_coherent_closed(alpha_abs, phase_error).value;
  });
}

qmem_status qmem_run_json(const char* config_json, char** csv_out, char** errmsg) {
  return guarded(errmsg, [&] {
    if (!config_json || !csv_out) qmem::fail_invalid("null pointer argument");
    const qmem::RunConfig cfg = qmem::validate_config(config_json);
    *csv_out = dup_string(qmem::run(cfg));
  });
}

qmem_status qmem_explain_json(const char* config_json, char** json_out, char** errmsg) {
  return guarded(errmsg, [&] {
    if (!config_json || !json_out) qmem::fail_invalid("null pointer argument");
    const qmem::RunConfig cfg = qmem::validate_config(config_json);
    *json_out = dup_string(qmem::explain_json(cfg));
  });
}

}  // extern "C"
