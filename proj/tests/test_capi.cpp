#include <cmath>
#include <cstring>
#include <string>

#include "doctest.h"
#include "qmem.h"

TEST_SUITE("capi") {

TEST_CASE("version string is present") {
  CHECK(qmem_version() != nullptr);
  CHECK(std::strlen(qmem_version()) > 0);
}

TEST_CASE("state lifecycle, stats and JSON round trip") {
  qmem_state* state = nullptr;
  char* err = nullptr;
  REQUIRE(qmem_state_coherent(2.0, 0.0, &state, &err) == QMEM_OK);
  REQUIRE(state != nullptr);
  double mean = 0.0, variance = 0.0;
  CHECK(qmem_state_stats(state, &mean, &variance, &err) == QMEM_OK);
  CHECK(mean == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(variance == doctest::Approx(4.0).epsilon(1e-10));
  CHECK(qmem_state_n_max(state) > 10);

  char* json = nullptr;
  REQUIRE(qmem_state_to_json(state, &json, &err) == QMEM_OK);
  qmem_state* copy = nullptr;
  REQUIRE(qmem_state_from_json(json, &copy, &err) == QMEM_OK);
  CHECK(qmem_state_n_max(copy) == qmem_state_n_max(state));
  qmem_string_free(json);
  qmem_state_free(copy);
  qmem_state_free(state);
}

TEST_CASE("invalid arguments surface as status codes with messages") {
  qmem_state* state = nullptr;
  char* err = nullptr;
  CHECK(qmem_state_coherent(25.0, 0.0, &state, &err) == QMEM_ERR_INVALID_ARGUMENT);
  REQUIRE(err != nullptr);
  CHECK(std::string(err).find("truncation budget") != std::string::npos);
  qmem_string_free(err);
  err = nullptr;

  CHECK(qmem_state_uniform(-2, &state, &err) == QMEM_ERR_INVALID_ARGUMENT);
  qmem_string_free(err);
  err = nullptr;

  qmem_pulse* pulse = nullptr;
  CHECK(qmem_pulse_gaussian(0.5, 1.0, 2001, &pulse, &err) == QMEM_ERR_INVALID_ARGUMENT);
  qmem_string_free(err);
  err = nullptr;

  CHECK(qmem_state_from_json("{not json", &state, &err) == QMEM_ERR_IO);
  qmem_string_free(err);
}

TEST_CASE("pulse factors through the C surface") {
  qmem_pulse* pulse = nullptr;
  char* err = nullptr;
  REQUIRE(qmem_pulse_gaussian(1000.0, 1.0, 2001, &pulse, &err) == QMEM_OK);
  double kappa = 0.0, zeta = 0.0, alpha = 0.0;
  CHECK(qmem_pulse_factors(pulse, 1, &kappa, &zeta, &alpha, &err) == QMEM_OK);
  CHECK(kappa == 3.2);
  CHECK(zeta == 2.7);
  CHECK(qmem_pulse_factors(pulse, 0, &kappa, &zeta, &alpha, &err) == QMEM_OK);
  CHECK(kappa == doctest::Approx(0.29445505327287115).epsilon(1e-9));
  qmem_pulse_free(pulse);
}

TEST_CASE("analytic fidelity and the closed forms") {
  qmem_state* state = nullptr;
  char* err = nullptr;
  REQUIRE(qmem_state_fock(3, &state, &err) == QMEM_OK);
  qmem_phase_model model{1.0, 0.0, 5.0, 100};
  double value = 0.0;
  CHECK(qmem_fidelity_analytic(state, &model, 0, &value, &err) == QMEM_OK);
  CHECK(value == doctest::Approx(1.0).epsilon(1e-14));
  qmem_state_free(state);

  CHECK(qmem_fidelity_lower_bound(1.0, &value, &err) == QMEM_OK);
  CHECK(value == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(qmem_fidelity_lower_bound(-1.0, &value, &err) == QMEM_ERR_INVALID_ARGUMENT);
  qmem_string_free(err);
  err = nullptr;

  CHECK(qmem_fidelity_coherent_closed(1.0, 3.14159265358979323846, &value, &err) == QMEM_OK);
  CHECK(value == doctest::Approx(std::exp(-4.0)).epsilon(1e-12));
}

TEST_CASE("config-driven runs through the C surface") {
  const char* config =
      R"({"subcommand": "pulse-factors",
          "protocol": {"convention": "paper", "pulse": {"xi": 1000}}})";
  char* csv = nullptr;
  char* err = nullptr;
  REQUIRE(qmem_run_json(config, &csv, &err) == QMEM_OK);
  CHECK(std::string(csv).find("kappa_theta,zeta_theta,alpha_theta") == 0);
  CHECK(std::string(csv).find("3.2") != std::string::npos);
  qmem_string_free(csv);

  CHECK(qmem_run_json("{}", &csv, &err) == QMEM_ERR_INVALID_ARGUMENT);
  REQUIRE(err != nullptr);
  CHECK(std::string(err).find("subcommand") != std::string::npos);
  qmem_string_free(err);
  err = nullptr;

  char* explain = nullptr;
  REQUIRE(qmem_explain_json(config, &explain, &err) == QMEM_OK);
  CHECK(std::string(explain).find("pulse_factors") != std::string::npos);
  qmem_string_free(explain);
}

}  // TEST_SUITE
