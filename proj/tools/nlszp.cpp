// nlszp: command-line front end for the Z^s_p toolkit.
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlszp/data_family.hpp"
#include "nlszp/decomposition.hpp"
#include "nlszp/evolution.hpp"
#include "nlszp/experiment.hpp"
#include "nlszp/exponents.hpp"
#include "nlszp/globalization.hpp"
#include "nlszp/norms.hpp"
#include "nlszp/snapshot.hpp"

using namespace nlszp;
using json = nlohmann::ordered_json;

namespace {

// Accepts exact forms such as 17/4 or inf wherever a real is expected.
const CLI::Validator& exact_number() {
  static const CLI::Validator t(
      [](std::string& in) {
        try {
          in = format_number(ExtRational::parse(in).to_double());
        } catch (const std::exception&) {
          return std::string("not a number: ") + in;
        }
        return std::string();
      },
      "NUMBER");
  return t;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(format_number(v)); }

json rational(const ExtRational& r) { return r.to_string(); }

json optional_rational(const std::optional<ExtRational>& r) { return r ? rational(*r) : json(nullptr); }

json optional_bool(const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); }

json report_json(const std::map<std::string, double>& report) {
  json j = json::object();
  for (const auto& [k, v] : report) j[k] = number(v);
  return j;
}

json norm_params(const NormKind& k) {
  return std::visit(
      [](const auto& v) -> json {
        using K = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<K, norm_kind::Lp>) return {{"p", number(v.p)}};
        if constexpr (std::is_same_v<K, norm_kind::HomSobolev>) return {{"s", v.s}};
        if constexpr (std::is_same_v<K, norm_kind::HomSobolevLr> || std::is_same_v<K, norm_kind::InhomSobolev>) {
          return {{"s", v.s}, {"r", number(v.r)}};
        }
        if constexpr (std::is_same_v<K, norm_kind::HomBesov> || std::is_same_v<K, norm_kind::InhomBesov>) {
          return {{"s", v.s}, {"q", number(v.q)}, {"p", number(v.p)}};
        }
        if constexpr (std::is_same_v<K, norm_kind::Zhidkov>) return {{"s", v.s}, {"p", number(v.p)}};
        if constexpr (std::is_same_v<K, norm_kind::ZhidkovBand>) {
          return {{"s", v.s}, {"band", v.band}, {"p", number(v.p)}};
        }
        if constexpr (std::is_same_v<K, norm_kind::Energy>) return {{"sigma", v.sigma}, {"lambda", v.lambda}};
        return json::object();
      },
      k);
}

struct SynthArgs {
  std::string family = "gaussian";
  int dim = 1;
  int n = 256;
  double L = 32.0;
  double width = 1.0;
  double amplitude = 1.0;
  std::vector<int> k{1};
  double gamma = 1.2;
  double core_width = 1.0;
  double p = 4.25;
  std::string out;
};

int synth(const SynthArgs& a) {
  const Grid grid(a.dim, a.n, a.L);
  DataFamily f;
  if (a.family == "gaussian") {
    f = family::Gaussian{a.width, a.amplitude};
  } else if (a.family == "pure_mode") {
    family::PureMode m;
    if (a.k.empty() || a.k.size() > 3) throw Error("--k takes one to three integers");
    for (std::size_t i = 0; i < a.k.size(); ++i) m.k[i] = a.k[i];
    m.amplitude = a.amplitude;
    f = m;
  } else if (a.family == "power_tail") {
    f = family::PowerTail{a.gamma, a.core_width, a.amplitude, a.p};
  } else {
    throw Error("unknown family '" + a.family + "'");
  }
  save_snapshot(a.out, synthesize(f, grid));
  return 0;
}

struct NormArgs {
  std::string in;
  std::string kind = "lp";
  double p = 2.0, s = 1.0, q = 2.0, r = 2.0, band = 1.0, sigma = 2.0;
  int lambda = -1;
  bool homogeneous = false;
};

int norm(const NormArgs& a) {
  NormKind k;
  if (a.kind == "lp") k = norm_kind::Lp{a.p};
  else if (a.kind == "hs") k = norm_kind::HomSobolev{a.s};
  else if (a.kind == "hs_lr") k = norm_kind::HomSobolevLr{a.s, a.r};
  else if (a.kind == "inhom_sobolev") k = norm_kind::InhomSobolev{a.s, a.r};
  else if (a.kind == "besov" && a.homogeneous) k = norm_kind::HomBesov{a.s, a.q, a.p};
  else if (a.kind == "besov") k = norm_kind::InhomBesov{a.s, a.q, a.p};
  else if (a.kind == "besov_hom") k = norm_kind::HomBesov{a.s, a.q, a.p};
  else if (a.kind == "besov_inhom") k = norm_kind::InhomBesov{a.s, a.q, a.p};
  else if (a.kind == "zhidkov") k = norm_kind::Zhidkov{a.s, a.p};
  else if (a.kind == "zhidkov_band") k = norm_kind::ZhidkovBand{a.s, a.band, a.p};
  else if (a.kind == "energy") k = norm_kind::Energy{a.sigma, a.lambda};
  else if (a.kind == "mass") k = norm_kind::Mass{};
  else throw Error("unknown norm kind '" + a.kind + "'");
  const Field f = load_snapshot(a.in);
  json j;
  j["kind"] = name_of(k);
  j["params"] = norm_params(k);
  j["value"] = number(evaluate(f, k));
  std::cout << j.dump(2) << '\n';
  return 0;
}

int exponents(const std::string& s, const std::string& p, const std::string& sigma, int dim,
              const std::string& slack) {
  const auto e = derive_lwp_exponents(ExtRational::parse(s), ExtRational::parse(p), ExtRational::parse(sigma), dim,
                                      ExtRational::parse(slack));
  const auto w = check_window(ExtRational::parse(s), ExtRational::parse(p), dim);
  json j;
  j["regime"] = to_string(e.regime);
  j["branch"] = e.branch;
  j["r1"] = rational(e.r1);
  j["q1"] = rational(e.q1);
  j["r2"] = optional_rational(e.r2);
  j["q2"] = optional_rational(e.q2);
  j["r3"] = optional_rational(e.r3);
  j["q3"] = optional_rational(e.q3);
  j["a"] = rational(e.a);
  j["theta_interp"] = optional_rational(e.theta_interp);
  j["rho"] = optional_rational(e.rho);
  j["rho_star"] = optional_rational(e.rho_star);
  const auto& c = e.conditions;
  j["conditions"] = {{"in_window", c.in_window},
                     {"pairs_admissible", c.pairs_admissible},
                     {"integrability", optional_bool(c.integrability)},
                     {"time_integrability", optional_bool(c.time_integrability)},
                     {"two_p_exceeds_d_sigma", optional_bool(c.two_p_exceeds_d_sigma)},
                     {"theta_in_unit_interval", optional_bool(c.theta_in_unit_interval)},
                     {"a_between_p_and_rho_star", optional_bool(c.a_between_p_and_rho_star)},
                     {"dual_exponent_valid", optional_bool(c.dual_exponent_valid)}};
  j["conditions_ok"] = e.conditions_ok();
  j["window"] = {{"in_window", w.in_window}, {"two_star", rational(w.two_star)}, {"reason", w.reason}};
  std::cout << j.dump(2) << '\n';
  return 0;
}

int admissible(const std::string& q, const std::string& r, int dim) {
  const bool ok = check_admissible(ExtRational::parse(q), ExtRational::parse(r), dim);
  json j;
  j["q"] = q;
  j["r"] = r;
  j["dim"] = dim;
  j["admissible"] = ok;
  std::cout << j.dump(2) << '\n';
  return ok ? 0 : 1;
}

struct SplitArgs {
  std::string in;
  double p = 4.25, epsilon = 0.1, eta = 0.05;
  bool sharp = false;
  std::string out_low, out_high, report;
};

int split(const SplitArgs& a) {
  const Field u0 = load_snapshot(a.in);
  const auto params = make_truncation_params(a.p, a.epsilon, a.eta);
  const auto r = frequency_split(u0, params, a.sharp);
  if (!a.out_low.empty()) save_snapshot(a.out_low, r.regular);
  if (!a.out_high.empty()) save_snapshot(a.out_high, r.rough);
  json j;
  j["epsilon"] = params.epsilon;
  j["theta"] = params.theta;
  j["beta"] = params.beta;
  j["delta"] = params.delta;
  j["globalizable"] = params.globalizable;
  j["report"] = report_json(r.report);
  if (!a.report.empty()) {
    std::ofstream f(a.report);
    if (!f) throw Error("cannot write " + a.report);
    f << j.dump(2) << '\n';
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

struct EvolveArgs {
  std::string in;
  double T = 1.0, dt = 1e-3, sigma = 2.0, tol = 1e-10, dealias = 2.0 / 3.0, zsp_s = 1.0, zsp_p = 4.0;
  int lambda = -1, max_iter = 50, snap_every = 10;
  bool linear = false;
  std::string method = "picard", quadrature = "midpoint", out, diag;
};

int evolve(const EvolveArgs& a) {
  const Field u0 = load_snapshot(a.in);
  NlsParams nls{a.sigma, a.lambda, u0.grid().dim(), a.linear};
  RecordOptions rec;
  rec.snap_every = a.snap_every;
  rec.keep_states = !a.out.empty();
  rec.zsp_s = a.zsp_s;
  rec.zsp_p = a.zsp_p;
  Trajectory traj(u0.grid());
  if (a.method == "picard") {
    PicardConfig cfg;
    cfg.dt = a.dt;
    cfg.max_iter = a.max_iter;
    cfg.tol = a.tol;
    cfg.dealias_fraction = a.dealias;
    if (a.quadrature == "simpson") cfg.quadrature = Quadrature::Simpson;
    else if (a.quadrature != "midpoint") throw Error("quadrature must be midpoint or simpson");
    traj = picard_solve(u0, nls, a.T, cfg, rec);
  } else if (a.method == "splitstep") {
    traj = split_step_solve(u0, nls, a.T, a.dt, rec);
  } else {
    throw Error("method must be picard or splitstep");
  }
  if (!a.out.empty()) {
    const std::filesystem::path dir(a.out);
    std::filesystem::create_directories(dir);
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
      save_snapshot((dir / ("u_" + std::to_string(i) + ".zfld")).string(), traj.states[i]);
    }
    save_snapshot((dir / "final.zfld").string(), traj.final_state);
  }
  if (!a.diag.empty()) write_diagnostics_csv(a.diag, traj);
  const auto& first = traj.diagnostics.front();
  const auto& last = traj.diagnostics.back();
  json j;
  j["steps"] = traj.steps;
  j["max_picard_iterations"] = traj.max_picard_iterations;
  j["max_contraction"] = traj.max_contraction;
  j["mass"] = {number(first.mass), number(last.mass)};
  j["energy"] = {number(first.energy), number(last.energy)};
  j["duhamel_l2"] = number(last.duhamel_l2);
  std::cout << j.dump(2) << '\n';
  return 0;
}

struct GlobalizeArgs {
  std::string in, out, ledger;
  double p = 4.25, epsilon = 0.1, eta = 0.05, T = 1.0, dt = 1e-2, safety = 10.0;
  bool sharp = false;
};

int globalize_cmd(const GlobalizeArgs& a) {
  const Field u0 = load_snapshot(a.in);
  GlobalizationConfig cfg;
  cfg.p = a.p;
  cfg.epsilon = a.epsilon;
  cfg.eta_slack = a.eta;
  cfg.T_target = a.T;
  cfg.solver.dt = a.dt;
  cfg.grid = u0.grid();
  cfg.sharp_cutoff = a.sharp;
  cfg.safety_factor = a.safety;
  auto emit_ledger = [&](const EnergyLedger& l) {
    if (!a.ledger.empty()) write_ledger_csv(a.ledger, l);
  };
  GlobalizationResult r = [&] {
    try {
      return globalize(u0, cfg);
    } catch (const BudgetExceeded& ex) {
      emit_ledger(ex.ledger());
      throw;
    }
  }();
  emit_ledger(r.ledger);
  if (!a.out.empty()) {
    std::filesystem::create_directories(a.out);
    for (std::size_t i = 0; i < r.trajectory.states.size(); ++i) {
      save_snapshot((std::filesystem::path(a.out) / ("u_" + std::to_string(i) + ".zfld")).string(),
                    r.trajectory.states[i]);
    }
  }
  double worst = 0.0;
  for (const auto& e : r.ledger.steps) worst = std::max(worst, e.recombination_error);
  json j;
  j["steps"] = r.ledger.steps.size();
  j["delta"] = r.ledger.delta;
  j["final_time"] = r.ledger.final_time;
  j["total_increment"] = number(r.ledger.total_increment());
  j["budget"] = number(r.ledger.budget);
  j["max_recombination_error"] = number(worst);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int sweep_epsilon(const std::string& config, const std::string& out) {
  const ExperimentConfig cfg = load_experiment(config);
  const probe::SweepEpsilon* sweep = nullptr;
  for (const auto& p : cfg.probes) {
    if ((sweep = std::get_if<probe::SweepEpsilon>(&p.spec))) break;
  }
  if (!sweep) throw Error("config has no sweep_epsilon probe");
  const Field u0 = synthesize(cfg.data, cfg.grid);
  const ScalingFit fit = increment_scaling_report(epsilon_sweep(u0, cfg, *sweep));
  const std::string text = fit_json(fit);
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) throw Error("cannot write " + out);
    f << text << '\n';
  }
  std::cout << text << '\n';
  return fit.pass ? 0 : 1;
}

int run(const std::string& config) {
  const ExperimentReport report = run_experiment(load_experiment(config));
  for (const auto& o : report.outcomes) {
    std::cout << (o.pass ? "PASS " : "FAIL ") << o.name << " (" << o.kind << ")";
    if (!o.error.empty()) std::cout << ": " << o.error;
    std::cout << '\n';
  }
  std::cout << "manifest: " << report.manifest_path << '\n';
  return report.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral toolkit for NLS with infinite-mass data"};
  app.require_subcommand(1);
  int status = 0;

  SynthArgs sa;
  auto* c_synth = app.add_subcommand("synth", "Sample an initial-data family to a .zfld snapshot");
  c_synth->add_option("--family", sa.family, "gaussian | pure_mode | power_tail")->capture_default_str();
  c_synth->add_option("--dim", sa.dim)->capture_default_str();
  c_synth->add_option("--n", sa.n)->capture_default_str();
  c_synth->add_option("--L", sa.L)->capture_default_str();
  c_synth->add_option("--width", sa.width)->capture_default_str();
  c_synth->add_option("--amplitude", sa.amplitude)->capture_default_str();
  c_synth->add_option("--k", sa.k, "mode index (pure_mode)");
  c_synth->add_option("--gamma", sa.gamma)->transform(exact_number())->capture_default_str();
  c_synth->add_option("--core-width", sa.core_width)->capture_default_str();
  c_synth->add_option("--p", sa.p, "integrability exponent checked by power_tail")->transform(exact_number())->capture_default_str();
  c_synth->add_option("--out", sa.out)->required();
  c_synth->callback([&] { status = synth(sa); });

  NormArgs na;
  auto* c_norm = app.add_subcommand("norm", "Evaluate one norm of a snapshot");
  c_norm->add_option("--in", na.in)->required();
  c_norm->add_option("--kind", na.kind,
                     "lp | hs | hs_lr | inhom_sobolev | besov | besov_hom | besov_inhom | zhidkov | zhidkov_band | "
                     "energy | mass")
      ->capture_default_str();
  c_norm->add_option("--p", na.p)->transform(exact_number())->capture_default_str();
  c_norm->add_option("--s", na.s)->transform(exact_number())->capture_default_str();
  c_norm->add_option("--q", na.q)->transform(exact_number())->capture_default_str();
  c_norm->add_option("--r", na.r)->transform(exact_number())->capture_default_str();
  c_norm->add_option("--band", na.band)->transform(exact_number())->capture_default_str();
  c_norm->add_option("--sigma", na.sigma)->transform(exact_number())->capture_default_str();
  c_norm->add_option("--lambda", na.lambda)->capture_default_str();
  c_norm->add_flag("--homogeneous", na.homogeneous, "homogeneous Besov norm (with --kind besov)");
  c_norm->callback([&] { status = norm(na); });

  std::string es = "1", ep = "4", esigma = "2", eslack = "1/20";
  int edim = 3;
  auto* c_exp = app.add_subcommand("exponents", "Local well-posedness exponents (exact rationals)");
  c_exp->add_option("--s", es)->capture_default_str();
  c_exp->add_option("--p", ep)->capture_default_str();
  c_exp->add_option("--sigma", esigma)->capture_default_str();
  c_exp->add_option("--dim", edim)->capture_default_str();
  c_exp->add_option("--slack", eslack)->capture_default_str();
  c_exp->callback([&] { status = exponents(es, ep, esigma, edim, eslack); });

  std::string aq, ar;
  int adim = 3;
  auto* c_adm = app.add_subcommand("admissible", "Check a Strichartz pair; exit 0 iff admissible");
  c_adm->add_option("--q", aq)->required();
  c_adm->add_option("--r", ar)->required();
  c_adm->add_option("--dim", adim)->capture_default_str();
  c_adm->callback([&] { status = admissible(aq, ar, adim); });

  SplitArgs spa;
  auto* c_split = app.add_subcommand("split", "Frequency split at epsilon");
  c_split->add_option("--in", spa.in)->required();
  c_split->add_option("--p", spa.p)->transform(exact_number())->capture_default_str();
  c_split->add_option("--epsilon", spa.epsilon)->transform(exact_number())->capture_default_str();
  c_split->add_option("--eta", spa.eta)->capture_default_str();
  c_split->add_flag("--sharp", spa.sharp, "indicator cutoff instead of the smooth one");
  c_split->add_option("--out-low", spa.out_low, "low-frequency part psi");
  c_split->add_option("--out-high", spa.out_high, "high-frequency part phi");
  c_split->add_option("--report", spa.report, "report JSON path");
  c_split->callback([&] { status = split(spa); });

  EvolveArgs ea;
  auto* c_evolve = app.add_subcommand("evolve", "Solve NLS from a snapshot");
  c_evolve->add_option("--in", ea.in)->required();
  c_evolve->add_option("--T", ea.T)->capture_default_str();
  c_evolve->add_option("--dt", ea.dt)->capture_default_str();
  c_evolve->add_option("--sigma", ea.sigma)->transform(exact_number())->capture_default_str();
  c_evolve->add_option("--lambda", ea.lambda)->capture_default_str();
  c_evolve->add_flag("--linear", ea.linear, "switch the nonlinearity off");
  c_evolve->add_option("--method", ea.method, "picard | splitstep")->capture_default_str();
  c_evolve->add_option("--quadrature", ea.quadrature, "midpoint | simpson")->capture_default_str();
  c_evolve->add_option("--max-iter", ea.max_iter)->capture_default_str();
  c_evolve->add_option("--tol", ea.tol)->capture_default_str();
  c_evolve->add_option("--dealias", ea.dealias)->capture_default_str();
  c_evolve->add_option("--snap-every", ea.snap_every)->capture_default_str();
  c_evolve->add_option("--zsp-s", ea.zsp_s)->transform(exact_number())->capture_default_str();
  c_evolve->add_option("--zsp-p", ea.zsp_p)->transform(exact_number())->capture_default_str();
  c_evolve->add_option("--out", ea.out, "directory for recorded snapshots and final.zfld");
  c_evolve->add_option("--diag", ea.diag, "diagnostics CSV");
  c_evolve->callback([&] { status = evolve(ea); });

  GlobalizeArgs ga;
  auto* c_glob = app.add_subcommand("globalize", "Fourier-truncation iteration with energy ledger");
  c_glob->add_option("--in", ga.in)->required();
  c_glob->add_option("--p", ga.p)->transform(exact_number())->capture_default_str();
  c_glob->add_option("--epsilon", ga.epsilon)->transform(exact_number())->capture_default_str();
  c_glob->add_option("--eta", ga.eta)->capture_default_str();
  c_glob->add_option("--T", ga.T)->capture_default_str();
  c_glob->add_option("--dt", ga.dt)->capture_default_str();
  c_glob->add_option("--safety", ga.safety)->capture_default_str();
  c_glob->add_flag("--sharp", ga.sharp);
  c_glob->add_option("--out", ga.out, "directory for step-boundary snapshots");
  c_glob->add_option("--ledger", ga.ledger, "ledger CSV");
  c_glob->callback([&] { status = globalize_cmd(ga); });

  std::string sw_config, sw_out;
  auto* c_sweep = app.add_subcommand("sweep-epsilon", "Increment scaling fit over an epsilon sweep");
  c_sweep->add_option("--config", sw_config)->required();
  c_sweep->add_option("--out", sw_out, "fit JSON path");
  c_sweep->callback([&] { status = sweep_epsilon(sw_config, sw_out); });

  std::string run_config;
  auto* c_run = app.add_subcommand("run", "Run a full experiment config");
  c_run->add_option("--config", run_config)->required();
  c_run->callback([&] { status = run(run_config); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "nlszp: " << e.what() << '\n';
    return 2;
  }
  return status;
}
