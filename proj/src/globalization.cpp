#include "nlszp/globalization.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>
#include <set>

#include <boost/math/distributions/students_t.hpp>

#include "nlszp/norms.hpp"

namespace nlszp {

namespace {

double relative_l2_gap(const Field& a, const Field& b) {
  long double diff = 0.0L, ref = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += std::norm(a[i] - b[i]);
    ref += std::norm(a[i]);
  }
  if (ref == 0.0L) return std::sqrt(static_cast<double>(diff));
  return std::sqrt(static_cast<double>(diff / ref));
}

Trajectory final_only(const Field& u0, const NlsParams& nls, double T, const PicardConfig& cfg) {
  RecordOptions rec;
  rec.snap_every = 0;
  rec.keep_states = false;
  rec.diagnostics = false;
  return picard_solve(u0, nls, T, cfg, rec);
}

}  // namespace

double EnergyLedger::total_increment() const {
  double sum = 0.0;
  for (const auto& e : steps) sum += e.increment;
  return sum;
}

double EnergyLedger::mean_increment() const {
  if (steps.empty()) throw Error("empty ledger");
  return total_increment() / static_cast<double>(steps.size());
}

TruncationParams GlobalizationConfig::validate() const {
  const TruncationParams params = make_truncation_params(p, epsilon, eta_slack);
  if (!params.globalizable) {
    throw Error("p = " + std::to_string(p) + " is not globalizable (requires 4 < p < 9/2)");
  }
  if (!(T_target > 0.0) || !std::isfinite(T_target)) throw Error("T_target must be positive");
  if (!(safety_factor >= 1.0)) throw Error("safety factor must be at least 1");
  solver.validate();
  return params;
}

BudgetExceeded::BudgetExceeded(EnergyLedger ledger)
    : Error("energy budget blown at t = " + std::to_string(ledger.final_time)), ledger_(std::move(ledger)) {}

StepResult truncation_step(const Field& phi, const Field& psi, const TruncationParams& params, const NlsParams& nls,
                           const PicardConfig& cfg) {
  require_same_grid(phi.grid(), psi.grid(), "truncation step");
  if (nls.sigma != 2.0 || nls.lambda != -1 || nls.linear_only) {
    throw Error("truncation step is defined for the defocusing cubic equation");
  }
  const double delta = params.delta;
  const Field u_start = phi + psi;

  auto v_job = std::async(std::launch::async, [&] { return final_only(phi, nls, delta, cfg); });
  Trajectory u_traj(phi.grid());
  try {
    u_traj = final_only(u_start, nls, delta, cfg);
  } catch (...) {
    try {
      v_job.get();
    } catch (...) {
    }
    throw;
  }
  const Trajectory v_traj = v_job.get();
  const Field& v = v_traj.final_state;
  const Field& u = u_traj.final_state;

  Field psi_evolved = schrodinger_group(psi, delta);
  Field w = u - v - psi_evolved;
  Field Phi = v + w;

  LedgerEntry e;
  e.delta = delta;
  e.E_phi_before = energy(phi, nls);
  e.E_phi_after = energy(Phi, nls);
  e.increment = e.E_phi_after - e.E_phi_before;
  e.w_l2 = lp_norm(w, 2.0);
  e.w_h1 = inhom_sobolev_norm(w, 1.0);
  e.psi_h1 = hom_sobolev_norm(psi, 1.0);
  e.psi_h32 = hom_sobolev_norm(psi, 1.5);
  e.psi_h52 = hom_sobolev_norm(psi, 2.5);
  e.increment_ratio = e.increment / std::pow(params.epsilon, params.beta - 3.0 * params.theta);
  e.recombination_error = relative_l2_gap(u, Phi + psi_evolved);
  const double ev = energy(v, nls);
  e.v_energy_drift = std::abs(ev - e.E_phi_before) / std::max(std::abs(e.E_phi_before), 1e-300);
  e.picard_iterations = std::max(u_traj.max_picard_iterations, v_traj.max_picard_iterations);
  return {std::move(Phi), std::move(psi_evolved), e};
}

GlobalizationResult globalize(const Field& u0, const GlobalizationConfig& cfg) {
  const TruncationParams params = cfg.validate();
  if (!(u0.grid() == cfg.grid)) throw Error("initial datum is not on the configured grid");
  const NlsParams nls{2.0, -1, u0.grid().dim()};

  DecompositionResult split = frequency_split(u0, params, cfg.sharp_cutoff);
  Field phi = std::move(split.rough);
  Field psi = std::move(split.regular);

  EnergyLedger ledger;
  ledger.epsilon = params.epsilon;
  ledger.theta = params.theta;
  ledger.beta = params.beta;
  ledger.delta = params.delta;
  ledger.safety_factor = cfg.safety_factor;
  // A vanishing rough part would give a zero budget; floor it relative to E(u0).
  const double e0 = std::max(energy(phi, nls), 1e-10 * std::max(energy(u0, nls), 1e-300));
  const double c0 = e0 * std::pow(params.epsilon, 4.0 * params.theta) * cfg.safety_factor;
  ledger.budget = c0 * std::pow(params.epsilon, -4.0 * params.theta);

  const int nsteps = std::max(1, static_cast<int>(std::ceil(cfg.T_target / params.delta - 1e-9)));
  GlobalizationResult out{Trajectory(u0.grid()), {}};
  Trajectory& traj = out.trajectory;
  traj.times.push_back(0.0);
  traj.states.push_back(u0);

  for (int k = 0; k < nsteps; ++k) {
    const double t = k * params.delta;
    ledger.final_time = t;
    const double current = energy(phi, nls);
    if (current > ledger.budget) {
      throw BudgetExceeded(std::move(ledger));
    }
    std::optional<StepResult> step;
    try {
      step = truncation_step(phi, psi, params, nls, cfg.solver);
    } catch (const PicardDiverged& ex) {
      throw PicardDiverged(ex.residual(), t + ex.time());
    } catch (const Error& ex) {
      throw Error(std::string(ex.what()) + " (window " + std::to_string(k) + ")");
    }
    StepResult& r = *step;
    r.entry.step_index = k;
    r.entry.t_start = t;
    // Keep the chain telescoping exactly.
    if (k > 0) {
      r.entry.E_phi_before = ledger.steps.back().E_phi_after;
      r.entry.increment = r.entry.E_phi_after - r.entry.E_phi_before;
    }
    ledger.steps.push_back(r.entry);
    phi = std::move(r.Phi);
    psi = std::move(r.psi_evolved);
    traj.times.push_back(t + params.delta);
    traj.states.push_back(phi + psi);
    traj.max_picard_iterations = std::max(traj.max_picard_iterations, r.entry.picard_iterations);
    ++traj.steps;
  }
  ledger.final_time = nsteps * params.delta;
  if (energy(phi, nls) > ledger.budget || ledger.total_increment() > ledger.budget) {
    throw BudgetExceeded(std::move(ledger));
  }
  traj.final_state = traj.states.back();
  out.ledger = std::move(ledger);
  return out;
}

ScalingFit increment_scaling_report(const std::vector<EnergyLedger>& ledgers) {
  std::set<double> distinct;
  for (const auto& l : ledgers) distinct.insert(l.epsilon);
  if (ledgers.size() < 3 || distinct.size() < 3) throw Error("scaling fit needs at least three distinct epsilons");
  ScalingFit fit;
  const double theta = ledgers.front().theta;
  for (const auto& l : ledgers) {
    if (std::abs(l.theta - theta) > 1e-12) throw Error("ledgers disagree on theta");
    const double m = std::abs(l.mean_increment());
    if (!(m > 0.0)) throw Error("zero mean increment cannot enter a log-log fit");
    fit.epsilons.push_back(l.epsilon);
    fit.mean_increments.push_back(m);
  }
  const std::size_t n = fit.epsilons.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::log(fit.epsilons[i]);
    y[i] = std::log(fit.mean_increments[i]);
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    sse += r * r;
  }
  const double dof = static_cast<double>(n - 2);
  const double se = std::sqrt(sse / dof / sxx);
  const double tq = boost::math::quantile(boost::math::complement(boost::math::students_t(dof), 0.025));
  fit.ci_low = fit.slope - tq * se;
  fit.ci_high = fit.slope + tq * se;
  fit.target = ledgers.front().beta - 3.0 * theta;
  fit.pass = fit.slope >= fit.target - 0.25;
  return fit;
}

}  // namespace nlszp
