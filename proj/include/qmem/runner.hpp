#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmem/disorder.hpp"

namespace qmem {

// Run configuration: a single JSON document fully determines every run
// (identical config + seed => byte-identical CSV). Unknown keys are
// rejected; units, when tagged, must be the MHz/us pair the library uses.

struct PulseConfig {
  std::string type = "gaussian";  // gaussian | csv
  double xi = 1000.0;
  int grid_points = 4001;
  std::string path;  // csv type
};

struct ProtocolConfig {
  double tau_s = 100.0;
  double tau_d = 1.0;
  PulseConfig pulse;
  std::string convention = "definition";  // definition | paper
};

struct StateConfig {
  std::string type = "coherent";  // coherent | cat | uniform | fock | file
  double alpha_re = 2.0;
  double alpha_im = 0.0;
  double eta = 0.0;
  double theta = 0.0;
  int m_top = 10;  // uniform
  int n = 0;       // fock
  std::string path;
};

struct FidelitySection {
  std::string method = "all";  // analytic | mc | series | bound | all
  std::string phase_mode = "linear";
  long long samples = 10000;
  bool compensated = true;
  int series_terms = 5;
  std::vector<double> x;  // optional sweep for series/bound rows
};

struct ReliabilitySection {
  std::string mode = "sync";  // sync | repeater | custom
  int k = 2;
  std::string rho_path;
  bool compensated = true;
};

struct Figure2Section {
  double ratio = 1000.0;       // tau_s_de / tau_d_de
  double alpha_theta = 2.7;
  std::vector<double> alphas;
  std::vector<double> delta_tau_s;
};

struct Figure3aSection {
  double eta = 1.0;
  double theta = 3.14159265358979323846;
  std::vector<double> alphas;
  std::vector<double> gamma_over_n;
};

struct Figure3bSection {
  double variance = 10.0;
  std::vector<double> x;
  int series_terms = 5;
};

struct TradeoffSection {
  double target_fidelity = 0.9;
  std::string solve_for = "tau_s";  // tau_s | tau_d | capacity
  double capacity = 3.0445224377234229;  // ln(21), variance 100
  double tau_s = 1000.0;
  double tau_d = 1.0;
};

struct DetuningSection {
  std::string mode = "berry";  // berry | naive
  double Delta_true = 0.01;
  double tau_s_de = 1000.0;
  double tau_d_de = 1.0;
  double kappa_theta = 3.2;
};

struct AppendixBSection {
  std::string family = "coherent";  // coherent | even_cat | uniform | fock
  std::vector<double> variances;
};

struct RunConfig {
  std::string subcommand;
  std::uint64_t seed = 1;
  int workers = 1;
  std::optional<std::string> output;
  std::optional<std::string> dump_realizations;
  SystemParams params{1000, 0.1, 0.0, 0.1, 0.0};
  ProtocolConfig protocol;
  StateConfig state;
  FidelitySection fidelity;
  ReliabilitySection reliability;
  Figure2Section figure2;
  Figure3aSection figure3a;
  Figure3bSection figure3b;
  TradeoffSection tradeoff;
  DetuningSection detuning;
  AppendixBSection appendix_b;
};

/// Parses and validates a config document; error messages name every
/// offending field. Unknown keys are rejected.
RunConfig validate_config(const std::string& json_text);

/// Canonical serialization; validate_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// Executes the configured subcommand and returns the CSV text. Also
/// writes the optional realization dump. Errors propagate as qmem::Error.
std::string run(const RunConfig& config);

/// Phase model and convention summary for --explain output.
std::string explain_json(const RunConfig& config);

}  // namespace qmem
