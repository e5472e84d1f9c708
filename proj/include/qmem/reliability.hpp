#pragma once

#include <cstddef>
#include <vector>

#include "qmem/berry.hpp"
#include "qmem/fock.hpp"

namespace qmem {

enum class CorrelationMode { synchronizer, repeater, custom };

/// Cycle-to-cycle correlation structure of the collective phase errors.
/// The effective covariance is Gamma * rho with rho the all-ones matrix
/// (synchronizer: one memory reused), the identity (repeater chain:
/// independent memories), or a user-supplied correlation matrix.
struct CorrelationSpec {
  int k = 1;
  CorrelationMode mode = CorrelationMode::repeater;
  std::vector<double> rho;  // row-major k x k, custom mode only

  static CorrelationSpec synchronizer(int k) { return {k, CorrelationMode::synchronizer, {}}; }
  static CorrelationSpec repeater(int k) { return {k, CorrelationMode::repeater, {}}; }
  static CorrelationSpec custom(int k, std::vector<double> rho) {
    return {k, CorrelationMode::custom, std::move(rho)};
  }
};

/// Joint reliability of one memory storing the sequence of states in
/// consecutive cycles (all-ones correlation). Evaluated exactly through
/// the distribution of s = sum_j (n_j - n_j'), i.e. a k-fold convolution
/// of the per-state difference distributions.
double reliability_sync(const std::vector<StoredState>& states, const PhaseModel& model,
                        bool compensated, std::size_t support_budget = 1 << 21);

/// k independent memories: factorizes exactly into fidelity^k.
double reliability_repeater(const StoredState& state, const PhaseModel& model, int k,
                            bool compensated);

/// Direct nested sum with quadratic form Gamma * rho; term count is
/// capped by the budget.
double reliability_general(const std::vector<StoredState>& states, const PhaseModel& model,
                           const CorrelationSpec& spec, bool compensated,
                           std::size_t term_budget = 1000000);

}  // namespace qmem
