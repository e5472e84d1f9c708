// qmem CLI: composes a run-config JSON document from flags (optionally on
// top of a --config file) and drives the shared library through its C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qmem.h"

namespace {

using nlohmann::json;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string output;
  std::string dump_realizations;
  bool explain = false;

  // system parameters
  std::optional<long long> N;
  std::optional<double> Delta, delta_Delta, g, delta_g;
  // protocol
  std::optional<double> tau_s, tau_d, xi;
  std::optional<int> grid_points;
  std::string pulse_convention;
  std::string pulse_csv;
  // state
  std::string state_type;
  std::optional<double> alpha, alpha_im, eta, theta;
  std::optional<int> m_top, fock_n;
  std::string state_file;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "run-config JSON file to start from");
  cmd->add_option("--seed", f.seed, "RNG seed (runs are deterministic in config + seed)");
  cmd->add_option("--workers", f.workers, "worker threads (results are worker-count independent)");
  cmd->add_option("--output", f.output, "CSV output path (default: stdout)");
  cmd->add_option("--dump-realizations", f.dump_realizations,
                  "write one sampled disorder realization (columns j, Delta_j, g_j)");
  cmd->add_flag("--explain", f.explain, "print the phase model and conventions to stderr");

  cmd->add_option("--N", f.N, "atom count");
  cmd->add_option("--Delta", f.Delta, "global detuning [MHz]");
  cmd->add_option("--delta-Delta", f.delta_Delta, "detuning broadening [MHz]");
  cmd->add_option("--g", f.g, "mean coupling [MHz]");
  cmd->add_option("--delta-g", f.delta_g, "coupling spread [MHz]");

  cmd->add_option("--tau-s", f.tau_s, "storage time [us]");
  cmd->add_option("--tau-d", f.tau_d, "total driving time [us]");
  cmd->add_option("--xi", f.xi, "Gaussian pulse edge ratio");
  cmd->add_option("--grid-points", f.grid_points, "pulse tabulation points");
  cmd->add_option("--pulse-convention", f.pulse_convention, "definition | paper")
      ->check(CLI::IsMember({"definition", "paper"}));
  cmd->add_option("--pulse-csv", f.pulse_csv, "load the waveform from CSV (t, omega)");

  cmd->add_option("--state", f.state_type, "coherent | cat | uniform | fock | file")
      ->check(CLI::IsMember({"coherent", "cat", "uniform", "fock", "file"}));
  cmd->add_option("--alpha", f.alpha, "coherent/cat amplitude (real part)");
  cmd->add_option("--alpha-im", f.alpha_im, "imaginary part of alpha");
  cmd->add_option("--eta", f.eta, "cat branch weight exponent");
  cmd->add_option("--theta", f.theta, "cat branch phase");
  cmd->add_option("--M", f.m_top, "uniform superposition top level");
  cmd->add_option("--fock-n", f.fock_n, "Fock state photon number");
  cmd->add_option("--state-file", f.state_file, "state JSON file");
}

json load_base_config(const CommonFlags& f, const std::string& subcommand) {
  json doc;
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path);
    if (!in) {
      std::cerr << "error: cannot open config file " << f.config_path << "\n";
      std::exit(2);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    doc = json::parse(buf.str(), nullptr, false);
    if (doc.is_discarded()) {
      std::cerr << "error: config file is not valid JSON\n";
      std::exit(2);
    }
  }
  doc["subcommand"] = subcommand;
  return doc;
}

void apply_common(json& doc, const CommonFlags& f) {
  if (f.seed) doc["seed"] = *f.seed;
  if (f.workers) doc["workers"] = *f.workers;
  if (!f.output.empty()) doc["output"] = f.output;
  if (!f.dump_realizations.empty()) doc["dump_realizations"] = f.dump_realizations;
  if (f.N) doc["params"]["N"] = *f.N;
  if (f.Delta) doc["params"]["Delta"] = *f.Delta;
  if (f.delta_Delta) doc["params"]["delta_Delta"] = *f.delta_Delta;
  if (f.g) doc["params"]["g"] = *f.g;
  if (f.delta_g) doc["params"]["delta_g"] = *f.delta_g;
  if (f.tau_s) doc["protocol"]["tau_s"] = *f.tau_s;
  if (f.tau_d) doc["protocol"]["tau_d"] = *f.tau_d;
  if (f.xi) doc["protocol"]["pulse"]["xi"] = *f.xi;
  if (f.grid_points) doc["protocol"]["pulse"]["grid_points"] = *f.grid_points;
  if (!f.pulse_csv.empty()) {
    doc["protocol"]["pulse"]["type"] = "csv";
    doc["protocol"]["pulse"]["path"] = f.pulse_csv;
  }
  if (!f.pulse_convention.empty()) doc["protocol"]["convention"] = f.pulse_convention;
  if (!f.state_type.empty()) doc["state"]["type"] = f.state_type;
  if (f.alpha && f.alpha_im)
    doc["state"]["alpha"] = {*f.alpha, *f.alpha_im};
  else if (f.alpha)
    doc["state"]["alpha"] = *f.alpha;
  if (f.eta) doc["state"]["eta"] = *f.eta;
  if (f.theta) doc["state"]["theta"] = *f.theta;
  if (f.m_top) doc["state"]["M"] = *f.m_top;
  if (f.fock_n) doc["state"]["n"] = *f.fock_n;
  if (!f.state_file.empty()) doc["state"]["path"] = f.state_file;
}

int exit_code(qmem_status status) {
  switch (status) {
    case QMEM_OK: return 0;
    case QMEM_ERR_INVALID_ARGUMENT:
    case QMEM_ERR_IO: return 2;
    case QMEM_ERR_NUMERIC:
    case QMEM_ERR_BUDGET: return 3;
    default: return 1;
  }
}

int execute(const json& doc, const CommonFlags& flags) {
  const std::string text = doc.dump();
  char* errmsg = nullptr;

  if (flags.explain) {
    char* explain = nullptr;
    const qmem_status st = qmem_explain_json(text.c_str(), &explain, &errmsg);
    if (st != QMEM_OK) {
      std::cerr << "error: " << (errmsg ? errmsg : "unknown") << "\n";
      qmem_string_free(errmsg);
      return exit_code(st);
    }
    std::cerr << explain << "\n";
    qmem_string_free(explain);
  }

  char* csv = nullptr;
  const qmem_status st = qmem_run_json(text.c_str(), &csv, &errmsg);
  if (st != QMEM_OK) {
    std::cerr << "error: " << (errmsg ? errmsg : "unknown") << "\n";
    qmem_string_free(errmsg);
    return exit_code(st);
  }
  if (doc.contains("output")) {
    std::ofstream out(doc["output"].get<std::string>(), std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot open output file\n";
      qmem_string_free(csv);
      return 2;
    }
    out << csv;
  } else {
    std::fputs(csv, stdout);
  }
  qmem_string_free(csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("qmem ") + qmem_version() +
               " - disordered EIT quantum-memory storage analysis"};
  app.require_subcommand(1);

  struct Sub {
    CLI::App* cmd;
    CommonFlags flags;
    std::function<void(json&)> extra;
  };
  std::vector<Sub> subs;

  auto make = [&](const char* name, const char* help) -> Sub& {
    subs.push_back(Sub{app.add_subcommand(name, help), {}, nullptr});
    add_common(subs.back().cmd, subs.back().flags);
    return subs.back();
  };

  make("pulse-factors", "adiabatic pulse factors kappa/zeta/alpha");
  {
    auto& s = make("fidelity", "single-cycle storage fidelity");
    auto method = std::make_shared<std::string>();
    auto phase_mode = std::make_shared<std::string>();
    auto samples = std::make_shared<long long>(-1);
    auto compensated = std::make_shared<int>(-1);
    auto xs = std::make_shared<std::vector<double>>();
    auto terms = std::make_shared<int>(-1);
    s.cmd->add_option("--method", *method, "analytic | mc | series | bound | all")
        ->check(CLI::IsMember({"analytic", "mc", "series", "bound", "all"}));
    s.cmd->add_option("--phase-mode", *phase_mode, "exact | linear")
        ->check(CLI::IsMember({"exact", "linear"}));
    s.cmd->add_option("--samples", *samples, "Monte Carlo samples");
    s.cmd->add_flag("--compensated,!--uncompensated", *compensated,
                    "apply the mean-phase compensation");
    s.cmd->add_option("--x", *xs, "x values for series/bound rows");
    s.cmd->add_option("--series-terms", *terms, "series term count");
    s.extra = [=](json& doc) {
      if (!method->empty()) doc["fidelity"]["method"] = *method;
      if (!phase_mode->empty()) doc["fidelity"]["phase_mode"] = *phase_mode;
      if (*samples >= 0) doc["fidelity"]["samples"] = *samples;
      if (*compensated >= 0) doc["fidelity"]["compensated"] = (*compensated != 0);
      if (!xs->empty()) doc["fidelity"]["x"] = *xs;
      if (*terms >= 0) doc["fidelity"]["series_terms"] = *terms;
    };
  }
  {
    auto& s = make("reliability", "multi-cycle memory reliability");
    auto mode = std::make_shared<std::string>();
    auto k = std::make_shared<int>(-1);
    auto rho = std::make_shared<std::string>();
    auto compensated = std::make_shared<int>(-1);
    s.cmd->add_option("--mode", *mode, "sync | repeater | custom")
        ->check(CLI::IsMember({"sync", "repeater", "custom"}));
    s.cmd->add_option("--k", *k, "cycle count");
    s.cmd->add_option("--rho-file", *rho, "k x k correlation matrix CSV (custom mode)");
    s.cmd->add_flag("--compensated,!--uncompensated", *compensated,
                    "apply the mean-phase compensation");
    s.extra = [=](json& doc) {
      if (!mode->empty()) doc["reliability"]["mode"] = *mode;
      if (*k >= 0) doc["reliability"]["k"] = *k;
      if (!rho->empty()) doc["reliability"]["rho_path"] = *rho;
      if (*compensated >= 0) doc["reliability"]["compensated"] = (*compensated != 0);
    };
  }
  {
    auto& s = make("figure2", "fidelity vs |alpha| and Delta*tau_s under naive calibration");
    auto ratio = std::make_shared<double>(-1.0);
    auto alpha_theta = std::make_shared<double>(-1e300);
    s.cmd->add_option("--ratio", *ratio, "detection-run tau_s / tau_d");
    s.cmd->add_option("--alpha-theta", *alpha_theta, "pulse factor alpha_theta");
    s.extra = [=](json& doc) {
      if (*ratio > 0) doc["figure2"]["ratio"] = *ratio;
      if (*alpha_theta > -1e299) doc["figure2"]["alpha_theta"] = *alpha_theta;
    };
  }
  make("figure3a", "fidelity contours over Gamma/N and |alpha| (cat family)");
  {
    auto& s = make("figure3b", "exact / series / bound fidelity vs x");
    auto variance = std::make_shared<double>(-1.0);
    s.cmd->add_option("--variance", *variance, "photon-number variance of the test states");
    s.extra = [=](json& doc) {
      if (*variance > 0) doc["figure3b"]["variance"] = *variance;
    };
  }
  {
    auto& s = make("tradeoff", "capacity / storage-time / driving-time trade-off solver");
    auto target = std::make_shared<double>(-1.0);
    auto solve_for = std::make_shared<std::string>();
    auto capacity = std::make_shared<double>(-1.0);
    auto ts = std::make_shared<double>(-1.0);
    auto td = std::make_shared<double>(-1.0);
    s.cmd->add_option("--target-fidelity", *target, "fidelity floor F0");
    s.cmd->add_option("--solve-for", *solve_for, "tau_s | tau_d | capacity")
        ->check(CLI::IsMember({"tau_s", "tau_d", "capacity"}));
    s.cmd->add_option("--capacity", *capacity, "capacity [nats] when fixed");
    s.cmd->add_option("--fixed-tau-s", *ts, "tau_s [us] when fixed");
    s.cmd->add_option("--fixed-tau-d", *td, "tau_d [us] when fixed");
    s.extra = [=](json& doc) {
      if (*target > 0) doc["tradeoff"]["target_fidelity"] = *target;
      if (!solve_for->empty()) doc["tradeoff"]["solve_for"] = *solve_for;
      if (*capacity > 0) doc["tradeoff"]["capacity"] = *capacity;
      if (*ts >= 0) doc["tradeoff"]["tau_s"] = *ts;
      if (*td >= 0) doc["tradeoff"]["tau_d"] = *td;
    };
  }
  {
    auto& s = make("detuning", "global-detuning inference from the cycle phase");
    auto mode = std::make_shared<std::string>();
    auto delta_true = std::make_shared<double>(-1e300);
    auto ts = std::make_shared<double>(-1.0);
    auto td = std::make_shared<double>(-1.0);
    auto kappa = std::make_shared<double>(-1e300);
    s.cmd->add_option("--mode", *mode, "naive | berry")->check(CLI::IsMember({"naive", "berry"}));
    s.cmd->add_option("--delta-true", *delta_true, "true detuning [MHz]");
    s.cmd->add_option("--tau-s-de", *ts, "detection-run storage time [us]");
    s.cmd->add_option("--tau-d-de", *td, "detection-run driving time [us]");
    s.cmd->add_option("--kappa-theta", *kappa, "pulse factor kappa_theta");
    s.extra = [=](json& doc) {
      if (!mode->empty()) doc["detuning"]["mode"] = *mode;
      if (*delta_true > -1e299) doc["detuning"]["Delta_true"] = *delta_true;
      if (*ts > 0) doc["detuning"]["tau_s_de"] = *ts;
      if (*td > 0) doc["detuning"]["tau_d_de"] = *td;
      if (*kappa > -1e299) doc["detuning"]["kappa_theta"] = *kappa;
    };
  }
  {
    auto& s = make("appendix-b", "tail-envelope and weak-convergence diagnostics");
    auto family = std::make_shared<std::string>();
    auto variances = std::make_shared<std::vector<double>>();
    s.cmd->add_option("--family", *family, "coherent | even_cat | uniform | fock")
        ->check(CLI::IsMember({"coherent", "even_cat", "uniform", "fock"}));
    s.cmd->add_option("--variances", *variances, "increasing variance grid");
    s.extra = [=](json& doc) {
      if (!family->empty()) doc["appendix_b"]["family"] = *family;
      if (!variances->empty()) doc["appendix_b"]["variances"] = *variances;
    };
  }

  CLI11_PARSE(app, argc, argv);

  for (auto& s : subs) {
    if (!s.cmd->parsed()) continue;
    json doc = load_base_config(s.flags, s.cmd->get_name());
    apply_common(doc, s.flags);
    if (s.extra) s.extra(doc);
    return execute(doc, s.flags);
  }
  return 1;
}
