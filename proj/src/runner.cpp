#include "qmem/runner.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qmem/berry.hpp"
#include "qmem/errors.hpp"
#include "qmem/fidelity.hpp"
#include "qmem/fock.hpp"
#include "qmem/metrology.hpp"
#include "qmem/pulse.hpp"
#include "qmem/reliability.hpp"

namespace qmem {

namespace {

using nlohmann::json;

const char* kSubcommands[] = {"pulse-factors", "fidelity", "reliability", "figure2",
                              "figure3a",      "figure3b", "tradeoff",    "detuning",
                              "appendix-b"};

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = lo + (hi - lo) * double(i) / double(count - 1);
  return v;
}

std::vector<double> logspace(double lo, double hi, int count) {
  std::vector<double> v = linspace(std::log10(lo), std::log10(hi), count);
  for (double& x : v) x = std::pow(10.0, x);
  return v;
}

// ---- strict JSON parsing helpers ----

struct Parser {
  std::vector<std::string> errors;

  void check_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> allowed) {
    for (const auto& [key, _] : obj.items()) {
      bool ok = false;
      for (const char* a : allowed)
        if (key == a) ok = true;
      if (!ok) errors.push_back("unknown key '" + where + key + "'");
    }
  }

  template <typename T>
  void get(const json& obj, const std::string& where, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
      out = obj.at(key).get<T>();
    } catch (const json::exception&) {
      errors.push_back("field '" + where + key + "' has the wrong type");
    }
  }
};

PulseConvention parse_convention(const std::string& name, Parser& p) {
  if (name == "definition") return PulseConvention::definition;
  if (name == "paper") return PulseConvention::paper_constants;
  p.errors.push_back("protocol.convention must be 'definition' or 'paper'");
  return PulseConvention::definition;
}

PulseProfile build_profile(const ProtocolConfig& cfg) {
  if (cfg.pulse.type == "gaussian") return gaussian_pulse(cfg.pulse.xi, cfg.tau_d, cfg.pulse.grid_points);
  if (cfg.pulse.type == "csv") {
    PulseProfile p = load_pulse_csv_file(cfg.pulse.path);
    if (cfg.tau_d > 0.0 && std::abs(p.tau_d - cfg.tau_d) > 1e-9 * p.tau_d)
      fail_invalid("protocol.tau_d disagrees with the pulse CSV window");
    return p;
  }
  fail_invalid("pulse.type must be 'gaussian' or 'csv'");
}

Protocol build_protocol(const ProtocolConfig& cfg) {
  Parser p;
  const PulseConvention convention = parse_convention(cfg.convention, p);
  if (!p.errors.empty()) fail_invalid(p.errors.front());
  return make_protocol(cfg.tau_s, build_profile(cfg), convention);
}

StoredState build_state(const StateConfig& cfg) {
  if (cfg.type == "coherent") return make_coherent({cfg.alpha_re, cfg.alpha_im});
  if (cfg.type == "cat") return make_cat({cfg.alpha_re, cfg.alpha_im}, cfg.eta, cfg.theta);
  if (cfg.type == "uniform") return make_uniform(cfg.m_top);
  if (cfg.type == "fock") return make_fock(cfg.n);
  if (cfg.type == "file") {
    std::ifstream in(cfg.path);
    if (!in) fail_io("cannot open state file: " + cfg.path);
    std::stringstream buf;
    buf << in.rdbuf();
    return state_from_json(buf.str());
  }
  fail_invalid("state.type must be coherent | cat | uniform | fock | file");
}

StateFamily build_family(const std::string& name) {
  if (name == "coherent") return coherent_family();
  if (name == "even_cat") return even_cat_family();
  if (name == "uniform") return uniform_family();
  if (name == "fock") return fock_family();
  fail_invalid("appendix_b.family must be coherent | even_cat | uniform | fock");
}

const char* method_name(FidelityMethod m) {
  switch (m) {
    case FidelityMethod::analytic: return "analytic";
    case FidelityMethod::monte_carlo_exact_phase: return "monte_carlo_exact_phase";
    case FidelityMethod::monte_carlo_linear_phase: return "monte_carlo_linear_phase";
    case FidelityMethod::series: return "series";
    case FidelityMethod::lower_bound: return "lower_bound";
    case FidelityMethod::coherent_closed_form: return "coherent_closed_form";
  }
  return "unknown";
}

// ---- subcommand implementations ----

std::string run_pulse_factors(const RunConfig& cfg) {
  const Protocol protocol = build_protocol(cfg.protocol);
  std::string out = "kappa_theta,zeta_theta,alpha_theta\n";
  out += fmt(protocol.factors.kappa_theta) + "," + fmt(protocol.factors.zeta_theta) + "," +
         fmt(protocol.factors.alpha_theta) + "\n";
  return out;
}

std::string run_fidelity(const RunConfig& cfg) {
  const StoredState state = build_state(cfg.state);
  const Protocol protocol = build_protocol(cfg.protocol);
  const PhaseModel model = build_phase_model(cfg.params, protocol);
  const PhotonStats stats = photon_stats(state);
  const double x0 = model.Gamma * stats.variance / double(model.ensemble_size);
  const auto& section = cfg.fidelity;
  const std::vector<double> xs = section.x.empty() ? std::vector<double>{x0} : section.x;

  std::string out = "method,x,value,std_error\n";
  auto row = [&](const char* name, double x, double value, double se) {
    out += std::string(name) + "," + fmt(x) + "," + fmt(value) + "," + fmt(se) + "\n";
  };
  const bool all = section.method == "all";
  if (all || section.method == "analytic") {
    const FidelityResult r = fidelity_analytic(state, model, section.compensated);
    row(method_name(r.method), x0, r.value, 0.0);
  }
  if (all || section.method == "mc") {
    const PhaseMode mode = section.phase_mode == "exact" ? PhaseMode::exact : PhaseMode::linear;
    const FidelityResult r = fidelity_monte_carlo(state, cfg.params, protocol, mode,
                                                  section.samples, cfg.seed,
                                                  section.compensated, cfg.workers);
    row(method_name(r.method), x0, r.value, r.std_error);
  }
  if (all || section.method == "series") {
    for (double x : xs) {
      const FidelityResult r = fidelity_series(state, x, section.series_terms - 1);
      row(method_name(r.method), x, r.series_valid ? r.value : std::nan(""), 0.0);
    }
  }
  if (all || section.method == "bound") {
    for (double x : xs) row("lower_bound", x, fidelity_lower_bound(x).value, 0.0);
  }
  if (!all && section.method != "analytic" && section.method != "mc" &&
      section.method != "series" && section.method != "bound")
    fail_invalid("fidelity.method must be analytic | mc | series | bound | all");
  return out;
}

std::vector<double> load_rho_csv(const std::string& path, int k) {
  std::ifstream in(path);
  if (!in) fail_io("cannot open rho matrix CSV: " + path);
  std::vector<double> rho;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) rho.push_back(std::strtod(cell.c_str(), nullptr));
  }
  if (rho.size() != std::size_t(k) * k) fail_invalid("rho CSV must hold a k x k matrix");
  return rho;
}

std::string run_reliability(const RunConfig& cfg) {
  const StoredState state = build_state(cfg.state);
  const Protocol protocol = build_protocol(cfg.protocol);
  const PhaseModel model = build_phase_model(cfg.params, protocol);
  const auto& section = cfg.reliability;
  if (section.k < 1) fail_invalid("reliability.k must be >= 1");
  const std::vector<StoredState> states(section.k, state);

  double value = 0.0;
  if (section.mode == "sync") {
    value = reliability_sync(states, model, section.compensated);
  } else if (section.mode == "repeater") {
    value = reliability_repeater(state, model, section.k, section.compensated);
  } else if (section.mode == "custom") {
    const auto rho = load_rho_csv(section.rho_path, section.k);
    value = reliability_general(states, model, CorrelationSpec::custom(section.k, rho),
                                section.compensated);
  } else {
    fail_invalid("reliability.mode must be sync | repeater | custom");
  }
  std::string out = "k,mode,value\n";
  out += std::to_string(section.k) + "," + section.mode + "," + fmt(value) + "\n";
  return out;
}

std::string run_figure2(const RunConfig& cfg) {
  const auto& section = cfg.figure2;
  const std::vector<double> alphas =
      section.alphas.empty() ? linspace(0.5, 8.0, 16) : section.alphas;
  const std::vector<double> dts =
      section.delta_tau_s.empty() ? linspace(0.0, 200.0, 101) : section.delta_tau_s;
  // Residual-detuning phase per unit Delta tau_s for the detection run.
  const double residual_scale = section.alpha_theta / (section.ratio + 0.5);
  std::string out = "alpha_abs,Delta_tau_s,fidelity\n";
  for (double a : alphas)
    for (double u : dts) {
      const double f = fidelity_coherent_closed(a, u * residual_scale).value;
      out += fmt(a) + "," + fmt(u) + "," + fmt(f) + "\n";
    }
  return out;
}

std::string run_figure3a(const RunConfig& cfg) {
  const auto& section = cfg.figure3a;
  const std::vector<double> alphas =
      section.alphas.empty() ? linspace(1.0, 12.0, 23) : section.alphas;
  const std::vector<double> gammas =
      section.gamma_over_n.empty() ? logspace(1e-5, 1.0, 51) : section.gamma_over_n;
  std::string out = "alpha_abs,variance,Gamma_over_N,fidelity\n";
  for (double a : alphas) {
    const StoredState state = make_cat(a, section.eta, section.theta);
    const PhotonStats stats = photon_stats(state);
    for (double gn : gammas) {
      PhaseModel model{0.0, 0.0, gn, 1};
      const double f = fidelity_analytic(state, model, true).value;
      out += fmt(a) + "," + fmt(stats.variance) + "," + fmt(gn) + "," + fmt(f) + "\n";
    }
  }
  return out;
}

std::string run_figure3b(const RunConfig& cfg) {
  const auto& section = cfg.figure3b;
  const std::vector<double> xs = section.x.empty() ? logspace(1e-2, 1e2, 41) : section.x;
  struct Entry {
    const char* name;
    StoredState state;
  };
  const std::vector<Entry> entries = {
      {"even_cat", even_cat_family().at_variance(section.variance)},
      {"uniform", uniform_family().at_variance(section.variance)},
  };
  std::string out = "state,x,exact,series,bound\n";
  for (const auto& entry : entries) {
    const PhotonStats stats = photon_stats(entry.state);
    for (double x : xs) {
      PhaseModel model{0.0, 0.0, x / stats.variance, 1};
      const double exact = fidelity_analytic(entry.state, model, true).value;
      const FidelityResult series = fidelity_series(entry.state, x, section.series_terms - 1);
      const double bound = fidelity_lower_bound(x).value;
      out += std::string(entry.name) + "," + fmt(x) + "," + fmt(exact) + "," +
             fmt(series.series_valid ? series.value : std::nan("")) + "," + fmt(bound) + "\n";
    }
  }
  return out;
}

std::string run_tradeoff(const RunConfig& cfg) {
  const auto& section = cfg.tradeoff;
  const Protocol protocol = build_protocol(cfg.protocol);
  const PulseFactors factors = protocol.factors;

  TradeoffVariable var;
  if (section.solve_for == "tau_s") var = TradeoffVariable::tau_s;
  else if (section.solve_for == "tau_d") var = TradeoffVariable::tau_d;
  else if (section.solve_for == "capacity") var = TradeoffVariable::capacity;
  else fail_invalid("tradeoff.solve_for must be tau_s | tau_d | capacity");

  const double solved = tradeoff_solve(section.target_fidelity, cfg.params, factors, var,
                                       section.capacity, section.tau_s, section.tau_d);
  TradeoffPoint point;
  point.capacity = var == TradeoffVariable::capacity ? solved : section.capacity;
  point.tau_s = var == TradeoffVariable::tau_s ? solved : section.tau_s;
  point.tau_d = var == TradeoffVariable::tau_d ? solved : section.tau_d;
  point.fidelity_floor = section.target_fidelity;
  point.params = cfg.params;
  point.factors = factors;

  const double ec = std::expm1(point.capacity);
  std::string out =
      "solve_for,target_fidelity,N,Delta_MHz,delta_Delta_MHz,g_MHz,delta_g_MHz,"
      "kappa_theta,zeta_theta,capacity_nats,tau_s_us,tau_d_us,infidelity,"
      "infidelity_gamma_form,tau_s_expc_product_us,Delta_tau_d_expc_product\n";
  out += section.solve_for + "," + fmt(section.target_fidelity) + "," +
         std::to_string(cfg.params.N) + "," + fmt(cfg.params.Delta) + "," +
         fmt(cfg.params.delta_Delta) + "," + fmt(cfg.params.g) + "," + fmt(cfg.params.delta_g) +
         "," + fmt(factors.kappa_theta) + "," + fmt(factors.zeta_theta) + "," +
         fmt(point.capacity) + "," + fmt(point.tau_s) + "," + fmt(point.tau_d) + "," +
         fmt(tradeoff_infidelity(point)) + "," + fmt(tradeoff_infidelity_gamma_form(point)) +
         "," + fmt(point.tau_s * ec) + "," + fmt(cfg.params.Delta * point.tau_d * ec) + "\n";
  return out;
}

std::string run_detuning(const RunConfig& cfg) {
  const auto& section = cfg.detuning;
  if (section.mode != "berry" && section.mode != "naive")
    fail_invalid("detuning.mode must be berry | naive");
  MeasurementScenario scenario{section.tau_s_de, section.tau_d_de, section.Delta_true,
                               section.kappa_theta - 0.5};
  scenario.validate();
  const double phase =
      section.Delta_true * (section.tau_s_de + section.kappa_theta * section.tau_d_de);
  const DetuningModel model =
      section.mode == "berry" ? DetuningModel::berry : DetuningModel::naive;
  const double inferred =
      infer_detuning(phase, section.tau_s_de, section.tau_d_de, section.kappa_theta, model);
  std::string out =
      "mode,Delta_true_MHz,tau_s_de_us,tau_d_de_us,kappa_theta,alpha_theta,"
      "mean_phase_rad,Delta_inferred_MHz,residual_MHz\n";
  out += section.mode + "," + fmt(section.Delta_true) + "," + fmt(section.tau_s_de) + "," +
         fmt(section.tau_d_de) + "," + fmt(section.kappa_theta) + "," +
         fmt(scenario.alpha_theta) + "," + fmt(phase) + "," + fmt(inferred) + "," +
         fmt(inferred - section.Delta_true) + "\n";
  return out;
}

std::string run_appendix_b(const RunConfig& cfg) {
  const auto& section = cfg.appendix_b;
  const std::vector<double> variances =
      section.variances.empty() ? std::vector<double>{4.0, 25.0, 100.0} : section.variances;
  const StateFamily family = build_family(section.family);
  const AppendixBReport report = appendix_b_report(family, variances);

  std::string out =
      "family,variance,n_max,mean,zero_tail,best_delta,best_chi,best_log_c,best_rms,"
      "feasible,kolmogorov_to_prev\n";
  for (std::size_t i = 0; i < report.points.size(); ++i) {
    const auto& pt = report.points[i];
    const bool has_fit = pt.best_fit >= 0;
    const TailFitCandidate fit = has_fit ? pt.fits[pt.best_fit] : TailFitCandidate{};
    const double nan = std::nan("");
    out += family.name + "," + fmt(pt.variance) + "," + std::to_string(pt.n_max) + "," +
           fmt(pt.mean) + "," + (pt.zero_tail ? "1" : "0") + "," +
           fmt(has_fit ? fit.delta : nan) + "," + fmt(has_fit ? fit.chi : nan) + "," +
           fmt(has_fit ? fit.log_c : nan) + "," + fmt(has_fit ? fit.rms : nan) + "," +
           ((has_fit || pt.zero_tail) ? "1" : "0") + "," +
           fmt(i == 0 ? nan : report.kolmogorov_steps[i - 1]) + "\n";
  }
  return out;
}

}  // namespace

std::string run(const RunConfig& config) {
  if (config.dump_realizations) {
    const DisorderRealization r = sample_realization(config.params, config.seed);
    std::ofstream out(*config.dump_realizations);
    if (!out) fail_io("cannot open realization dump: " + *config.dump_realizations);
    out << "j,Delta_j_MHz,g_j_MHz\n";
    for (std::size_t j = 0; j < r.detunings.size(); ++j)
      out << j << "," << fmt(r.detunings[j]) << "," << fmt(r.couplings[j]) << "\n";
  }
  if (config.subcommand == "pulse-factors") return run_pulse_factors(config);
  if (config.subcommand == "fidelity") return run_fidelity(config);
  if (config.subcommand == "reliability") return run_reliability(config);
  if (config.subcommand == "figure2") return run_figure2(config);
  if (config.subcommand == "figure3a") return run_figure3a(config);
  if (config.subcommand == "figure3b") return run_figure3b(config);
  if (config.subcommand == "tradeoff") return run_tradeoff(config);
  if (config.subcommand == "detuning") return run_detuning(config);
  if (config.subcommand == "appendix-b") return run_appendix_b(config);
  fail_invalid("unknown subcommand '" + config.subcommand + "'");
}

std::string explain_json(const RunConfig& config) {
  const Protocol protocol = build_protocol(config.protocol);
  const PhaseModel model = build_phase_model(config.params, protocol);
  json doc;
  doc["subcommand"] = config.subcommand;
  doc["convention"] = config.protocol.convention;
  doc["pulse_factors"] = {{"kappa_theta", protocol.factors.kappa_theta},
                          {"zeta_theta", protocol.factors.zeta_theta},
                          {"alpha_theta", protocol.factors.alpha_theta}};
  doc["phase_model"] = json::parse(phase_model_to_json(model));
  doc["protocol"] = {{"tau_s_us", protocol.tau_s},
                     {"tau_d_us", protocol.tau_d()},
                     {"storage_dominated", protocol.storage_dominated()}};
  return doc.dump(2);
}

// ---- config parsing / serialization ----

RunConfig validate_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    fail_invalid(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail_invalid("config must be a JSON object");

  Parser p;
  RunConfig cfg;
  p.check_keys(doc, "", {"subcommand", "seed", "workers", "output", "dump_realizations", "units",
                         "params", "protocol", "state", "fidelity", "reliability", "figure2",
                         "figure3a", "figure3b", "tradeoff", "detuning", "appendix_b"});

  if (!doc.contains("subcommand")) {
    p.errors.push_back(
        "missing required field 'subcommand' (one of: pulse-factors, fidelity, reliability, "
        "figure2, figure3a, figure3b, tradeoff, detuning, appendix-b)");
  } else {
    p.get(doc, "", "subcommand", cfg.subcommand);
    bool known = false;
    for (const char* s : kSubcommands)
      if (cfg.subcommand == s) known = true;
    if (!known) p.errors.push_back("unknown subcommand '" + cfg.subcommand + "'");
  }
  p.get(doc, "", "seed", cfg.seed);
  p.get(doc, "", "workers", cfg.workers);
  if (cfg.workers < 1) p.errors.push_back("workers must be >= 1");
  if (doc.contains("output")) {
    std::string path;
    p.get(doc, "", "output", path);
    cfg.output = path;
  }
  if (doc.contains("dump_realizations")) {
    std::string path;
    p.get(doc, "", "dump_realizations", path);
    cfg.dump_realizations = path;
  }
  if (doc.contains("units")) {
    const json& units = doc["units"];
    p.check_keys(units, "units.", {"frequency", "time"});
    std::string freq = "MHz", time = "us";
    p.get(units, "units.", "frequency", freq);
    p.get(units, "units.", "time", time);
    if (freq != "MHz") p.errors.push_back("units.frequency must be 'MHz'");
    if (time != "us") p.errors.push_back("units.time must be 'us'");
  }
  if (doc.contains("params")) {
    const json& o = doc["params"];
    p.check_keys(o, "params.", {"N", "Delta", "delta_Delta", "g", "delta_g"});
    p.get(o, "params.", "N", cfg.params.N);
    p.get(o, "params.", "Delta", cfg.params.Delta);
    p.get(o, "params.", "delta_Delta", cfg.params.delta_Delta);
    p.get(o, "params.", "g", cfg.params.g);
    p.get(o, "params.", "delta_g", cfg.params.delta_g);
    try {
      cfg.params.validate();
    } catch (const Error& e) {
      p.errors.push_back(std::string("params: ") + e.what());
    }
  }
  if (doc.contains("protocol")) {
    const json& o = doc["protocol"];
    p.check_keys(o, "protocol.", {"tau_s", "tau_d", "pulse", "convention"});
    p.get(o, "protocol.", "tau_s", cfg.protocol.tau_s);
    p.get(o, "protocol.", "tau_d", cfg.protocol.tau_d);
    p.get(o, "protocol.", "convention", cfg.protocol.convention);
    if (cfg.protocol.convention != "definition" && cfg.protocol.convention != "paper")
      p.errors.push_back("protocol.convention must be 'definition' or 'paper'");
    if (o.contains("pulse")) {
      const json& q = o["pulse"];
      p.check_keys(q, "protocol.pulse.", {"type", "xi", "grid_points", "path"});
      p.get(q, "protocol.pulse.", "type", cfg.protocol.pulse.type);
      p.get(q, "protocol.pulse.", "xi", cfg.protocol.pulse.xi);
      p.get(q, "protocol.pulse.", "grid_points", cfg.protocol.pulse.grid_points);
      p.get(q, "protocol.pulse.", "path", cfg.protocol.pulse.path);
    }
  }
  if (doc.contains("state")) {
    const json& o = doc["state"];
    p.check_keys(o, "state.", {"type", "alpha", "eta", "theta", "M", "n", "path"});
    p.get(o, "state.", "type", cfg.state.type);
    if (o.contains("alpha")) {
      const json& a = o["alpha"];
      if (a.is_number()) {
        cfg.state.alpha_re = a.get<double>();
        cfg.state.alpha_im = 0.0;
      } else if (a.is_array() && a.size() == 2) {
        cfg.state.alpha_re = a[0].get<double>();
        cfg.state.alpha_im = a[1].get<double>();
      } else {
        p.errors.push_back("state.alpha must be a number or [re, im]");
      }
    }
    p.get(o, "state.", "eta", cfg.state.eta);
    p.get(o, "state.", "theta", cfg.state.theta);
    p.get(o, "state.", "M", cfg.state.m_top);
    p.get(o, "state.", "n", cfg.state.n);
    p.get(o, "state.", "path", cfg.state.path);
  }
  if (doc.contains("fidelity")) {
    const json& o = doc["fidelity"];
    p.check_keys(o, "fidelity.",
                 {"method", "phase_mode", "samples", "compensated", "series_terms", "x"});
    p.get(o, "fidelity.", "method", cfg.fidelity.method);
    p.get(o, "fidelity.", "phase_mode", cfg.fidelity.phase_mode);
    p.get(o, "fidelity.", "samples", cfg.fidelity.samples);
    p.get(o, "fidelity.", "compensated", cfg.fidelity.compensated);
    p.get(o, "fidelity.", "series_terms", cfg.fidelity.series_terms);
    p.get(o, "fidelity.", "x", cfg.fidelity.x);
    if (cfg.fidelity.phase_mode != "linear" && cfg.fidelity.phase_mode != "exact")
      p.errors.push_back("fidelity.phase_mode must be 'linear' or 'exact'");
  }
  if (doc.contains("reliability")) {
    const json& o = doc["reliability"];
    p.check_keys(o, "reliability.", {"mode", "k", "rho_path", "compensated"});
    p.get(o, "reliability.", "mode", cfg.reliability.mode);
    p.get(o, "reliability.", "k", cfg.reliability.k);
    p.get(o, "reliability.", "rho_path", cfg.reliability.rho_path);
    p.get(o, "reliability.", "compensated", cfg.reliability.compensated);
  }
  if (doc.contains("figure2")) {
    const json& o = doc["figure2"];
    p.check_keys(o, "figure2.", {"ratio", "alpha_theta", "alphas", "delta_tau_s"});
    p.get(o, "figure2.", "ratio", cfg.figure2.ratio);
    p.get(o, "figure2.", "alpha_theta", cfg.figure2.alpha_theta);
    p.get(o, "figure2.", "alphas", cfg.figure2.alphas);
    p.get(o, "figure2.", "delta_tau_s", cfg.figure2.delta_tau_s);
  }
  if (doc.contains("figure3a")) {
    const json& o = doc["figure3a"];
    p.check_keys(o, "figure3a.", {"eta", "theta", "alphas", "gamma_over_n"});
    p.get(o, "figure3a.", "eta", cfg.figure3a.eta);
    p.get(o, "figure3a.", "theta", cfg.figure3a.theta);
    p.get(o, "figure3a.", "alphas", cfg.figure3a.alphas);
    p.get(o, "figure3a.", "gamma_over_n", cfg.figure3a.gamma_over_n);
  }
  if (doc.contains("figure3b")) {
    const json& o = doc["figure3b"];
    p.check_keys(o, "figure3b.", {"variance", "x", "series_terms"});
    p.get(o, "figure3b.", "variance", cfg.figure3b.variance);
    p.get(o, "figure3b.", "x", cfg.figure3b.x);
    p.get(o, "figure3b.", "series_terms", cfg.figure3b.series_terms);
  }
  if (doc.contains("tradeoff")) {
    const json& o = doc["tradeoff"];
    p.check_keys(o, "tradeoff.", {"target_fidelity", "solve_for", "capacity", "tau_s", "tau_d"});
    p.get(o, "tradeoff.", "target_fidelity", cfg.tradeoff.target_fidelity);
    p.get(o, "tradeoff.", "solve_for", cfg.tradeoff.solve_for);
    p.get(o, "tradeoff.", "capacity", cfg.tradeoff.capacity);
    p.get(o, "tradeoff.", "tau_s", cfg.tradeoff.tau_s);
    p.get(o, "tradeoff.", "tau_d", cfg.tradeoff.tau_d);
  }
  if (doc.contains("detuning")) {
    const json& o = doc["detuning"];
    p.check_keys(o, "detuning.", {"mode", "Delta_true", "tau_s_de", "tau_d_de", "kappa_theta"});
    p.get(o, "detuning.", "mode", cfg.detuning.mode);
    p.get(o, "detuning.", "Delta_true", cfg.detuning.Delta_true);
    p.get(o, "detuning.", "tau_s_de", cfg.detuning.tau_s_de);
    p.get(o, "detuning.", "tau_d_de", cfg.detuning.tau_d_de);
    p.get(o, "detuning.", "kappa_theta", cfg.detuning.kappa_theta);
  }
  if (doc.contains("appendix_b")) {
    const json& o = doc["appendix_b"];
    p.check_keys(o, "appendix_b.", {"family", "variances"});
    p.get(o, "appendix_b.", "family", cfg.appendix_b.family);
    p.get(o, "appendix_b.", "variances", cfg.appendix_b.variances);
  }

  if (!p.errors.empty()) {
    std::string msg = "invalid config:";
    for (const auto& e : p.errors) msg += "\n  - " + e;
    fail_invalid(msg);
  }
  return cfg;
}

std::string serialize_config(const RunConfig& c) {
  json doc;
  doc["subcommand"] = c.subcommand;
  doc["seed"] = c.seed;
  doc["workers"] = c.workers;
  if (c.output) doc["output"] = *c.output;
  if (c.dump_realizations) doc["dump_realizations"] = *c.dump_realizations;
  doc["units"] = {{"frequency", "MHz"}, {"time", "us"}};
  doc["params"] = {{"N", c.params.N},
                   {"Delta", c.params.Delta},
                   {"delta_Delta", c.params.delta_Delta},
                   {"g", c.params.g},
                   {"delta_g", c.params.delta_g}};
  doc["protocol"] = {{"tau_s", c.protocol.tau_s},
                     {"tau_d", c.protocol.tau_d},
                     {"convention", c.protocol.convention},
                     {"pulse",
                      {{"type", c.protocol.pulse.type},
                       {"xi", c.protocol.pulse.xi},
                       {"grid_points", c.protocol.pulse.grid_points},
                       {"path", c.protocol.pulse.path}}}};
  doc["state"] = {{"type", c.state.type},
                  {"alpha", {c.state.alpha_re, c.state.alpha_im}},
                  {"eta", c.state.eta},
                  {"theta", c.state.theta},
                  {"M", c.state.m_top},
                  {"n", c.state.n},
                  {"path", c.state.path}};
  doc["fidelity"] = {{"method", c.fidelity.method},
                     {"phase_mode", c.fidelity.phase_mode},
                     {"samples", c.fidelity.samples},
                     {"compensated", c.fidelity.compensated},
                     {"series_terms", c.fidelity.series_terms},
                     {"x", c.fidelity.x}};
  doc["reliability"] = {{"mode", c.reliability.mode},
                        {"k", c.reliability.k},
                        {"rho_path", c.reliability.rho_path},
                        {"compensated", c.reliability.compensated}};
  doc["figure2"] = {{"ratio", c.figure2.ratio},
                    {"alpha_theta", c.figure2.alpha_theta},
                    {"alphas", c.figure2.alphas},
                    {"delta_tau_s", c.figure2.delta_tau_s}};
  doc["figure3a"] = {{"eta", c.figure3a.eta},
                     {"theta", c.figure3a.theta},
                     {"alphas", c.figure3a.alphas},
                     {"gamma_over_n", c.figure3a.gamma_over_n}};
  doc["figure3b"] = {{"variance", c.figure3b.variance},
                     {"x", c.figure3b.x},
                     {"series_terms", c.figure3b.series_terms}};
  doc["tradeoff"] = {{"target_fidelity", c.tradeoff.target_fidelity},
                     {"solve_for", c.tradeoff.solve_for},
                     {"capacity", c.tradeoff.capacity},
                     {"tau_s", c.tradeoff.tau_s},
                     {"tau_d", c.tradeoff.tau_d}};
  doc["detuning"] = {{"mode", c.detuning.mode},
                     {"Delta_true", c.detuning.Delta_true},
                     {"tau_s_de", c.detuning.tau_s_de},
                     {"tau_d_de", c.detuning.tau_d_de},
                     {"kappa_theta", c.detuning.kappa_theta}};
  doc["appendix_b"] = {{"family", c.appendix_b.family}, {"variances", c.appendix_b.variances}};
  return doc.dump(2);
}

}  // namespace qmem
