#pragma once

#include <vector>

#include "nlszp/decomposition.hpp"
#include "nlszp/evolution.hpp"

namespace nlszp {

struct LedgerEntry {
  int step_index = 0;
  double t_start = 0.0;
  double delta = 0.0;
  double E_phi_before = 0.0;
  double E_phi_after = 0.0;
  double increment = 0.0;
  double w_l2 = 0.0;
  double w_h1 = 0.0;
  double psi_h1 = 0.0;
  double psi_h32 = 0.0;
  double psi_h52 = 0.0;
  /// increment / epsilon^{beta - 3 theta}
  double increment_ratio = 0.0;
  /// ||u(delta) - (Phi + psi_evolved)||_{L^2} / ||u(delta)||_{L^2}
  double recombination_error = 0.0;
  /// |E(v(delta)) - E(v(0))| / max(|E(v(0))|, tiny)
  double v_energy_drift = 0.0;
  int picard_iterations = 0;
};

struct EnergyLedger {
  std::vector<LedgerEntry> steps;
  double epsilon = 0.0;
  double theta = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  double budget = 0.0;
  double safety_factor = 10.0;
  /// Time actually reached by the loop.
  double final_time = 0.0;

  double total_increment() const;
  double mean_increment() const;
};

struct GlobalizationConfig {
  double p = 4.25;
  double epsilon = 0.1;
  double eta_slack = 0.05;
  double T_target = 1.0;
  PicardConfig solver;
  Grid grid{3, 48, 16.0};
  /// Use the indicator of |xi| <= epsilon instead of the smooth cutoff.
  bool sharp_cutoff = false;
  double safety_factor = 10.0;

  /// Throws unless p is globalizable and the truncation parameters are valid.
  TruncationParams validate() const;
};

class BudgetExceeded : public Error {
 public:
  explicit BudgetExceeded(EnergyLedger ledger);
  const EnergyLedger& ledger() const { return ledger_; }

 private:
  EnergyLedger ledger_;
};

struct StepResult {
  Field Phi;
  Field psi_evolved;
  LedgerEntry entry;
};

/// One window of the truncation iteration: v solves NLS from phi, u from
/// phi + psi, psi moves linearly, w = u - v - e^{i delta Laplacian} psi and
/// Phi = v + w. The two nonlinear solves run concurrently.
StepResult truncation_step(const Field& phi, const Field& psi, const TruncationParams& params, const NlsParams& nls,
                           const PicardConfig& cfg);

struct GlobalizationResult {
  Trajectory trajectory;
  EnergyLedger ledger;
};

/// Splits u0 at epsilon and iterates ceil(T_target/delta) windows. The
/// trajectory holds u at the step boundaries. Throws BudgetExceeded when
/// E(phi) leaves the budget 10 E(phi_0) (C0 eps^{-4 theta} with
/// C0 = safety * E(phi_0) eps^{4 theta}).
GlobalizationResult globalize(const Field& u0, const GlobalizationConfig& cfg);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double target = 0.0;  ///< beta - 3 theta
  bool pass = false;    ///< slope >= target - 0.25
  std::vector<double> epsilons;
  std::vector<double> mean_increments;
};

/// Least-squares fit of log |mean per-step increment| against log epsilon
/// with a 95% Student-t interval. Requires at least three distinct epsilons
/// and a common theta.
ScalingFit increment_scaling_report(const std::vector<EnergyLedger>& ledgers);

}  // namespace nlszp
