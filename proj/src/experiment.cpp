#include "nlszp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "nlszp/exponents.hpp"

namespace nlszp {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// ---- YAML access with unknown-key detection ----

class Section {
 public:
  Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
    if (!node_.IsMap()) throw Error(path_ + ": expected a mapping");
  }

  bool has(const std::string& key) {
    used_.insert(key);
    return static_cast<bool>(node_[key]);
  }

  YAML::Node node(const std::string& key) {
    used_.insert(key);
    YAML::Node n = node_[key];
    if (!n) throw Error(path_ + ": missing key '" + key + "'");
    return n;
  }

  double real(const std::string& key) { return to_real(node(key), where(key)); }
  double real(const std::string& key, double fallback) { return has(key) ? real(key) : fallback; }
  std::optional<double> maybe_real(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return real(key);
  }
  int integer(const std::string& key, int fallback) { return has(key) ? to_int(node(key), where(key)) : fallback; }
  int integer(const std::string& key) { return to_int(node(key), where(key)); }
  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    try {
      return node(key).as<bool>();
    } catch (const YAML::Exception&) {
      throw Error(where(key) + ": expected true or false");
    }
  }
  std::string text(const std::string& key) {
    YAML::Node n = node(key);
    if (!n.IsScalar()) throw Error(where(key) + ": expected a scalar");
    return n.as<std::string>();
  }
  std::string text(const std::string& key, const std::string& fallback) { return has(key) ? text(key) : fallback; }
  std::vector<double> reals(const std::string& key) {
    YAML::Node n = node(key);
    if (!n.IsSequence()) throw Error(where(key) + ": expected a list");
    std::vector<double> out;
    for (std::size_t i = 0; i < n.size(); ++i) out.push_back(to_real(n[i], where(key)));
    return out;
  }

  void finish() const {
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!used_.count(key)) throw Error(path_ + ": unknown key '" + key + "'");
    }
  }

  std::string where(const std::string& key) const { return path_ + "." + key; }

  static double to_real(const YAML::Node& n, const std::string& where) {
    if (!n.IsScalar()) throw Error(where + ": expected a number");
    try {
      return ExtRational::parse(n.as<std::string>()).to_double();
    } catch (const std::exception&) {
      throw Error(where + ": '" + n.as<std::string>() + "' is not a number");
    }
  }

  static int to_int(const YAML::Node& n, const std::string& where) {
    const double v = to_real(n, where);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw Error(where + ": expected an integer");
    return static_cast<int>(v);
  }

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> used_;
};

Grid parse_grid(Section s) {
  const int dim = s.integer("dim");
  const int n = s.integer("n");
  const double L = s.real("L");
  s.finish();
  return Grid(dim, n, L);
}

DataFamily parse_data(Section s) {
  const std::string kind = s.text("family");
  DataFamily out;
  if (kind == "gaussian") {
    out = family::Gaussian{s.real("width", 1.0), s.real("amplitude", 1.0)};
  } else if (kind == "pure_mode") {
    family::PureMode m;
    const auto k = s.reals("k");
    if (k.empty() || k.size() > 3) throw Error("data.k: expected one to three integers");
    for (std::size_t a = 0; a < k.size(); ++a) {
      if (k[a] != std::floor(k[a])) throw Error("data.k: expected integers");
      m.k[a] = static_cast<int>(k[a]);
    }
    m.amplitude = s.real("amplitude", 1.0);
    out = m;
  } else if (kind == "power_tail") {
    out = family::PowerTail{s.real("gamma"), s.real("core_width", 1.0), s.real("amplitude", 1.0), s.real("p")};
  } else if (kind == "custom") {
    out = family::Custom{s.text("path")};
  } else {
    throw Error("data.family: unknown family '" + kind + "'");
  }
  s.finish();
  return out;
}

NlsParams parse_nls(Section s, int dim) {
  NlsParams p;
  p.sigma = s.real("sigma", 2.0);
  p.lambda = s.integer("lambda", -1);
  p.linear_only = s.boolean("linear_only", false);
  p.dim = dim;
  s.finish();
  p.validate();
  return p;
}

PicardConfig parse_solver(Section s) {
  PicardConfig c;
  c.dt = s.real("dt", c.dt);
  c.max_iter = s.integer("max_iter", c.max_iter);
  c.tol = s.real("tol", c.tol);
  const std::string q = s.text("quadrature", "midpoint");
  if (q == "midpoint") {
    c.quadrature = Quadrature::Midpoint;
  } else if (q == "simpson") {
    c.quadrature = Quadrature::Simpson;
  } else {
    throw Error("solver.quadrature: expected midpoint or simpson");
  }
  c.dealias_fraction = s.real("dealias_fraction", c.dealias_fraction);
  s.finish();
  c.validate();
  return c;
}

NormKind parse_norm(Section s) {
  const std::string kind = s.text("kind");
  NormKind out;
  if (kind == "lp") {
    out = norm_kind::Lp{s.real("p")};
  } else if (kind == "hs") {
    out = norm_kind::HomSobolev{s.real("s")};
  } else if (kind == "hs_lr") {
    out = norm_kind::HomSobolevLr{s.real("s"), s.real("r")};
  } else if (kind == "inhom_sobolev") {
    out = norm_kind::InhomSobolev{s.real("s"), s.real("r", 2.0)};
  } else if (kind == "besov_hom") {
    out = norm_kind::HomBesov{s.real("s"), s.real("q"), s.real("p")};
  } else if (kind == "besov_inhom") {
    out = norm_kind::InhomBesov{s.real("s"), s.real("q"), s.real("p")};
  } else if (kind == "zhidkov") {
    out = norm_kind::Zhidkov{s.real("s"), s.real("p")};
  } else if (kind == "zhidkov_band") {
    out = norm_kind::ZhidkovBand{s.real("s"), s.real("band"), s.real("p")};
  } else if (kind == "energy") {
    out = norm_kind::Energy{s.real("sigma", 2.0), s.integer("lambda", -1)};
  } else if (kind == "mass") {
    out = norm_kind::Mass{};
  } else {
    throw Error("norm kind '" + kind + "' is not known");
  }
  s.finish();
  validate(out);
  return out;
}

NamedProbe parse_probe(Section s, std::size_t index) {
  const std::string kind = s.text("kind");
  NamedProbe out{s.text("name", kind + "_" + std::to_string(index)), probe::Norms{}};
  if (kind == "norms") {
    probe::Norms p;
    YAML::Node list = s.node("norms");
    if (!list.IsSequence()) throw Error(s.where("norms") + ": expected a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      p.norms.push_back(parse_norm(Section(list[i], s.where("norms") + "[" + std::to_string(i) + "]")));
    }
    out.spec = p;
  } else if (kind == "growth") {
    probe::Growth p;
    p.s = s.real("s", p.s);
    p.p = s.real("p", p.p);
    p.t_max = s.real("t_max", p.t_max);
    p.samples = s.integer("samples", p.samples);
    p.max_ratio = s.maybe_real("max_ratio");
    out.spec = p;
  } else if (kind == "evolve") {
    probe::Evolve p;
    p.T = s.real("T", p.T);
    const std::string method = s.text("method", "picard");
    if (method != "picard" && method != "splitstep") throw Error(s.where("method") + ": expected picard or splitstep");
    p.split_step = method == "splitstep";
    p.snap_every = s.integer("snap_every", p.snap_every);
    p.max_mass_drift = s.maybe_real("max_mass_drift");
    p.max_energy_drift = s.maybe_real("max_energy_drift");
    out.spec = p;
  } else if (kind == "gain") {
    probe::Gain p;
    p.T = s.real("T", p.T);
    p.L_values = s.reals("L_values");
    p.slope_tolerance = s.real("slope_tolerance", p.slope_tolerance);
    p.max_variation = s.real("max_variation", p.max_variation);
    out.spec = p;
  } else if (kind == "sweep_box") {
    probe::SweepBox p;
    p.L_values = s.reals("L_values");
    p.s = s.real("s", p.s);
    p.p = s.real("p", p.p);
    p.t_max = s.real("t_max", p.t_max);
    p.samples = s.integer("samples", p.samples);
    p.max_spread = s.real("max_spread", p.max_spread);
    out.spec = p;
  } else if (kind == "globalize") {
    probe::Globalize p;
    p.p = s.real("p");
    p.epsilon = s.real("epsilon");
    p.eta = s.real("eta", p.eta);
    p.T = s.real("T", p.T);
    p.safety_factor = s.real("safety_factor", p.safety_factor);
    p.sharp_cutoff = s.boolean("sharp_cutoff", false);
    out.spec = p;
  } else if (kind == "sweep_epsilon") {
    probe::SweepEpsilon p;
    p.p = s.real("p");
    p.epsilons = s.reals("epsilons");
    p.eta = s.real("eta", p.eta);
    p.T = s.real("T", p.T);
    p.safety_factor = s.real("safety_factor", p.safety_factor);
    p.sharp_cutoff = s.boolean("sharp_cutoff", false);
    out.spec = p;
  } else {
    throw Error("probe kind '" + kind + "' is not known");
  }
  s.finish();
  return out;
}

void require_globalizable(double p, double epsilon, double eta, const NlsParams& nls) {
  const TruncationParams tp = make_truncation_params(p, epsilon, eta);
  if (!tp.globalizable) throw Error("p = " + format_number(p) + " is not globalizable (requires 4 < p < 9/2)");
  if (nls.sigma != 2.0 || nls.lambda != -1 || nls.linear_only) {
    throw Error("globalization needs the defocusing cubic equation (sigma = 2, lambda = -1)");
  }
}

void check_box_sweep(const Grid& grid, const std::vector<double>& Ls) {
  if (Ls.size() < 2) throw Error("box sweep needs at least two box lengths");
  for (double L : Ls) rescaled_grid(grid, L);
}

// ---- output helpers ----

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::string tag_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double slope_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  return sxy / sxx;
}

double relative_spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return (*hi - *lo) / *lo;
}

std::string param_string(const NormKind& k) {
  return std::visit(
      [](const auto& v) -> std::string {
        using K = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<K, norm_kind::Lp>) return "p=" + format_number(v.p);
        if constexpr (std::is_same_v<K, norm_kind::HomSobolev>) return "s=" + format_number(v.s);
        if constexpr (std::is_same_v<K, norm_kind::HomSobolevLr> || std::is_same_v<K, norm_kind::InhomSobolev>) {
          return "s=" + format_number(v.s) + ";r=" + format_number(v.r);
        }
        if constexpr (std::is_same_v<K, norm_kind::HomBesov> || std::is_same_v<K, norm_kind::InhomBesov>) {
          return "s=" + format_number(v.s) + ";q=" + format_number(v.q) + ";p=" + format_number(v.p);
        }
        if constexpr (std::is_same_v<K, norm_kind::Zhidkov>) {
          return "s=" + format_number(v.s) + ";p=" + format_number(v.p);
        }
        if constexpr (std::is_same_v<K, norm_kind::ZhidkovBand>) {
          return "s=" + format_number(v.s) + ";band=" + format_number(v.band) + ";p=" + format_number(v.p);
        }
        if constexpr (std::is_same_v<K, norm_kind::Energy>) {
          return "sigma=" + format_number(v.sigma) + ";lambda=" + std::to_string(v.lambda);
        }
        return "";
      },
      k);
}

std::vector<double> sample_times(double t_max, int samples) {
  if (samples < 2) throw Error("growth probe needs at least two samples");
  std::vector<double> t(samples);
  for (int i = 0; i < samples; ++i) t[i] = t_max * i / (samples - 1);
  return t;
}

GlobalizationConfig globalization_config(const ExperimentConfig& cfg, double p, double epsilon, double eta, double T,
                                         double safety, bool sharp) {
  GlobalizationConfig g;
  g.p = p;
  g.epsilon = epsilon;
  g.eta_slack = eta;
  g.T_target = T;
  g.solver = cfg.solver;
  g.grid = cfg.grid;
  g.safety_factor = safety;
  g.sharp_cutoff = sharp;
  return g;
}

// ---- probes ----

class ProbeRunner {
 public:
  ProbeRunner(const ExperimentConfig& cfg, const Field& u0, ProbeOutcome& out)
      : cfg_(cfg), u0_(u0), out_(out), dir_(cfg.output_dir) {}

  void operator()(const probe::Norms& p) {
    const auto path = file(out_.name + ".csv");
    auto csv = open_out(path);
    csv << "probe,norm,params,value\n";
    for (const auto& k : p.norms) {
      const double v = evaluate(u0_, k);
      csv << out_.name << ',' << name_of(k) << ',' << param_string(k) << ',' << format_number(v) << '\n';
      out_.metrics[name_of(k) + "[" + param_string(k) + "]"] = v;
    }
    out_.files.push_back(path.string());
    out_.pass = true;
  }

  void operator()(const probe::Growth& p) {
    const auto times = sample_times(p.t_max, p.samples);
    const GrowthProbe g = linear_zsp_growth_probe(u0_, p.s, p.p, times);
    write_growth(out_.name, g);
    out_.metrics["max_ratio"] = g.max_ratio;
    out_.pass = std::isfinite(g.max_ratio) && (!p.max_ratio || g.max_ratio <= *p.max_ratio);
  }

  void operator()(const probe::Evolve& p) {
    RecordOptions rec;
    rec.snap_every = p.snap_every;
    rec.keep_states = false;
    const Trajectory traj = p.split_step ? split_step_solve(u0_, cfg_.nls, p.T, cfg_.solver.dt, rec)
                                         : picard_solve(u0_, cfg_.nls, p.T, cfg_.solver, rec);
    const auto csv = file(out_.name + ".csv");
    write_diagnostics_csv(csv.string(), traj);
    const auto dat = file(out_.name + ".dat");
    write_diagnostics_dat(dat, traj);
    // Largest relative drift over every recorded state.
    const auto& first = traj.diagnostics.front();
    const auto& last = traj.diagnostics.back();
    double dm = 0.0, de = 0.0;
    for (const auto& d : traj.diagnostics) {
      dm = std::max(dm, std::abs(d.mass - first.mass) / std::max(std::abs(first.mass), 1e-300));
      de = std::max(de, std::abs(d.energy - first.energy) / std::max(std::abs(first.energy), 1e-300));
    }
    out_.metrics["mass_drift"] = dm;
    out_.metrics["energy_drift"] = de;
    out_.metrics["duhamel_l2_final"] = last.duhamel_l2;
    out_.metrics["max_picard_iterations"] = traj.max_picard_iterations;
    out_.pass = (!p.max_mass_drift || dm <= *p.max_mass_drift) && (!p.max_energy_drift || de <= *p.max_energy_drift);
  }

  void operator()(const probe::Gain& p) {
    const std::size_t n = p.L_values.size();
    std::vector<double> mass_norm(n), duhamel(n);
    parallel_for(n, worker_count(cfg_.workers), [&](std::size_t i) {
      const Grid g = rescaled_grid(cfg_.grid, p.L_values[i]);
      const Field u0 = synthesize(cfg_.data, g);
      RecordOptions rec;
      rec.snap_every = 0;
      rec.keep_states = false;
      rec.diagnostics = false;
      const Trajectory traj = picard_solve(u0, cfg_.nls, p.T, cfg_.solver, rec);
      mass_norm[i] = lp_norm(u0, 2.0);
      duhamel[i] = lp_norm(traj.final_state - schrodinger_group(u0, p.T), 2.0);
    });
    auto csv = open_out(file(out_.name + ".csv"));
    csv << "probe,L,n,T,u0_l2,duhamel_l2\n";
    for (std::size_t i = 0; i < n; ++i) {
      csv << out_.name << ',' << format_number(p.L_values[i]) << ',' << rescaled_grid(cfg_.grid, p.L_values[i]).n()
          << ',' << format_number(p.T) << ',' << format_number(mass_norm[i]) << ',' << format_number(duhamel[i])
          << '\n';
    }
    out_.files.push_back(file(out_.name + ".csv").string());
    const double slope = slope_loglog(p.L_values, mass_norm);
    const double variation = relative_spread(duhamel);
    out_.metrics["u0_l2_slope"] = slope;
    out_.metrics["duhamel_variation"] = variation;
    bool ok = variation < p.max_variation;
    if (const auto* tail = std::get_if<family::PowerTail>(&cfg_.data)) {
      const double expected = cfg_.grid.dim() / 2.0 - tail->gamma;
      out_.metrics["expected_slope"] = expected;
      ok = ok && std::abs(slope - expected) <= p.slope_tolerance;
    }
    out_.pass = ok;
  }

  void operator()(const probe::SweepBox& p) {
    const std::size_t n = p.L_values.size();
    const auto times = sample_times(p.t_max, p.samples);
    std::vector<GrowthProbe> probes(n);
    parallel_for(n, worker_count(cfg_.workers), [&](std::size_t i) {
      const Field u0 = synthesize(cfg_.data, rescaled_grid(cfg_.grid, p.L_values[i]));
      probes[i] = linear_zsp_growth_probe(u0, p.s, p.p, times);
    });
    auto csv = open_out(file(out_.name + ".csv"));
    csv << "probe,L,t,ratio\n";
    std::vector<double> maxima;
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& smp : probes[i].samples) {
        csv << out_.name << ',' << format_number(p.L_values[i]) << ',' << format_number(smp.t) << ','
            << format_number(smp.ratio) << '\n';
      }
      maxima.push_back(probes[i].max_ratio);
      out_.metrics["max_ratio[L=" + tag_number(p.L_values[i]) + "]"] = probes[i].max_ratio;
      out_.metrics["final_ratio[L=" + tag_number(p.L_values[i]) + "]"] = probes[i].samples.back().ratio;
    }
    out_.files.push_back(file(out_.name + ".csv").string());
    const double spread = relative_spread(maxima);
    out_.metrics["max_ratio_spread"] = spread;
    out_.pass = std::all_of(maxima.begin(), maxima.end(), [](double v) { return std::isfinite(v); }) &&
                spread <= p.max_spread;
  }

  void operator()(const probe::Globalize& p) {
    const auto g = globalization_config(cfg_, p.p, p.epsilon, p.eta, p.T, p.safety_factor, p.sharp_cutoff);
    try {
      const GlobalizationResult r = globalize(u0_, g);
      write_ledger_csv(file(out_.name + ".csv").string(), r.ledger);
      out_.files.push_back(file(out_.name + ".csv").string());
      summarize(r.ledger, "");
      out_.pass = r.ledger.final_time >= p.T - 1e-12 && out_.metrics["max_recombination_error"] <= 1e-12;
    } catch (const BudgetExceeded& ex) {
      write_ledger_csv(file(out_.name + ".csv").string(), ex.ledger());
      out_.files.push_back(file(out_.name + ".csv").string());
      throw;
    }
  }

  void operator()(const probe::SweepEpsilon& p) {
    const auto ledgers = epsilon_sweep(u0_, cfg_, p);
    for (std::size_t i = 0; i < ledgers.size(); ++i) {
      const auto path = file(out_.name + "_eps" + std::to_string(i) + ".csv");
      write_ledger_csv(path.string(), ledgers[i]);
      out_.files.push_back(path.string());
      summarize(ledgers[i], "[eps=" + tag_number(ledgers[i].epsilon) + "]");
    }
    const ScalingFit fit = increment_scaling_report(ledgers);
    auto out = open_out(file(out_.name + "_fit.json"));
    out << fit_json(fit) << '\n';
    out_.files.push_back(file(out_.name + "_fit.json").string());
    out_.metrics["slope"] = fit.slope;
    out_.metrics["ci_low"] = fit.ci_low;
    out_.metrics["ci_high"] = fit.ci_high;
    out_.metrics["target_beta_minus_3theta"] = fit.target;
    bool reached = true;
    for (const auto& l : ledgers) {
      reached = reached && l.final_time >= p.T - 1e-12;
      for (const auto& e : l.steps) reached = reached && e.recombination_error <= 1e-12;
    }
    out_.pass = fit.pass && reached;
  }

 private:
  fs::path file(const std::string& leaf) const { return dir_ / leaf; }

  void summarize(const EnergyLedger& l, const std::string& tag) {
    double worst = 0.0, drift = 0.0;
    for (const auto& e : l.steps) {
      worst = std::max(worst, e.recombination_error);
      drift = std::max(drift, e.v_energy_drift);
    }
    out_.metrics["steps" + tag] = static_cast<double>(l.steps.size());
    out_.metrics["delta" + tag] = l.delta;
    out_.metrics["mean_increment" + tag] = l.steps.empty() ? 0.0 : l.mean_increment();
    out_.metrics["total_increment" + tag] = l.total_increment();
    out_.metrics["budget" + tag] = l.budget;
    out_.metrics["final_time" + tag] = l.final_time;
    out_.metrics["max_recombination_error" + tag] = worst;
    out_.metrics["max_v_energy_drift" + tag] = drift;
  }

  void write_growth(const std::string& stem, const GrowthProbe& g) {
    auto csv = open_out(file(stem + ".csv"));
    csv << "probe,t,ratio\n";
    for (const auto& s : g.samples) csv << stem << ',' << format_number(s.t) << ',' << format_number(s.ratio) << '\n';
    auto dat = open_out(file(stem + ".dat"));
    dat << "# t ratio\n";
    for (const auto& s : g.samples) dat << format_number(s.t) << ' ' << format_number(s.ratio) << '\n';
    out_.files.push_back(file(stem + ".csv").string());
    out_.files.push_back(file(stem + ".dat").string());
  }

  void write_diagnostics_dat(const fs::path& path, const Trajectory& traj) {
    auto dat = open_out(path);
    dat << "# t mass energy zsp_norm duhamel_l2\n";
    for (std::size_t i = 0; i < traj.diagnostics.size(); ++i) {
      const auto& d = traj.diagnostics[i];
      dat << format_number(traj.times[i]) << ' ' << format_number(d.mass) << ' ' << format_number(d.energy) << ' '
          << format_number(d.zsp_norm) << ' ' << format_number(d.duhamel_l2) << '\n';
    }
    out_.files.push_back(fs::path(dir_ / (out_.name + ".csv")).string());
    out_.files.push_back(path.string());
  }

  const ExperimentConfig& cfg_;
  const Field& u0_;
  ProbeOutcome& out_;
  fs::path dir_;
};

const char* kind_name(const ProbeSpec& spec) {
  static const char* names[] = {"norms", "growth", "evolve", "gain", "sweep_box", "globalize", "sweep_epsilon"};
  return names[spec.index()];
}

json manifest(const ExperimentConfig& cfg, const ExperimentReport& report) {
  json m;
  m["name"] = cfg.name;
  m["grid"] = {{"dim", cfg.grid.dim()}, {"n", cfg.grid.n()}, {"L", cfg.grid.box_length()}};
  m["data"] = name_of(cfg.data);
  m["nls"] = {{"sigma", cfg.nls.sigma}, {"lambda", cfg.nls.lambda}, {"linear_only", cfg.nls.linear_only}};
  m["solver"] = {{"dt", cfg.solver.dt},
                 {"max_iter", cfg.solver.max_iter},
                 {"tol", cfg.solver.tol},
                 {"quadrature", cfg.solver.quadrature == Quadrature::Simpson ? "simpson" : "midpoint"},
                 {"dealias_fraction", cfg.solver.dealias_fraction}};
  json probes = json::array();
  for (const auto& o : report.outcomes) {
    json p;
    p["name"] = o.name;
    p["kind"] = o.kind;
    p["pass"] = o.pass;
    if (!o.error.empty()) p["error"] = o.error;
    json metrics = json::object();
    for (const auto& [k, v] : o.metrics) metrics[k] = std::isfinite(v) ? json(v) : json(format_number(v));
    p["metrics"] = metrics;
    p["files"] = o.files;
    probes.push_back(p);
  }
  m["probes"] = probes;
  m["pass"] = report.pass;
  return m;
}

}  // namespace

// ---- public ----

void ExperimentConfig::validate() const {
  nlszp::validate(data, grid);
  if (nls.dim != grid.dim()) throw Error("nls dimension does not match the grid");
  nls.validate();
  solver.validate();
  if (window) {
    const auto w = check_window(ExtRational::from_double(window->first), ExtRational::from_double(window->second),
                                grid.dim());
    if (!w.in_window) throw Error("window: " + w.reason);
  }
  std::set<std::string> names;
  for (const auto& p : probes) {
    if (!names.insert(p.name).second) throw Error("duplicate probe name '" + p.name + "'");
    std::visit(
        [&](const auto& spec) {
          using K = std::decay_t<decltype(spec)>;
          if constexpr (std::is_same_v<K, probe::Growth>) {
            if (!(spec.t_max > 0.0)) throw Error(p.name + ": t_max must be positive");
            sample_times(spec.t_max, spec.samples);
          } else if constexpr (std::is_same_v<K, probe::Evolve>) {
            if (!(spec.T > 0.0)) throw Error(p.name + ": T must be positive");
            if (spec.snap_every < 0) throw Error(p.name + ": snap_every must be non-negative");
          } else if constexpr (std::is_same_v<K, probe::Gain>) {
            if (!(spec.T > 0.0)) throw Error(p.name + ": T must be positive");
            check_box_sweep(grid, spec.L_values);
            for (double L : spec.L_values) nlszp::validate(data, rescaled_grid(grid, L));
          } else if constexpr (std::is_same_v<K, probe::SweepBox>) {
            check_box_sweep(grid, spec.L_values);
            sample_times(spec.t_max, spec.samples);
          } else if constexpr (std::is_same_v<K, probe::Globalize>) {
            require_globalizable(spec.p, spec.epsilon, spec.eta, nls);
          } else if constexpr (std::is_same_v<K, probe::SweepEpsilon>) {
            std::set<double> distinct(spec.epsilons.begin(), spec.epsilons.end());
            if (distinct.size() < 3) throw Error(p.name + ": need at least three distinct epsilons");
            for (double e : spec.epsilons) require_globalizable(spec.p, e, spec.eta, nls);
          }
        },
        p.spec);
  }
}

ExperimentConfig parse_experiment(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& ex) {
    throw Error(std::string("config: ") + ex.what());
  }
  Section top(root, "config");
  ExperimentConfig cfg;
  cfg.name = top.text("name", cfg.name);
  cfg.output_dir = top.text("output_dir", cfg.output_dir);
  cfg.workers = top.integer("workers", 0);
  if (cfg.workers < 0) throw Error("config.workers must be non-negative");
  cfg.grid = parse_grid(Section(top.node("grid"), "grid"));
  cfg.data = parse_data(Section(top.node("data"), "data"));
  cfg.nls = top.has("nls") ? parse_nls(Section(top.node("nls"), "nls"), cfg.grid.dim())
                           : NlsParams{2.0, -1, cfg.grid.dim()};
  if (top.has("solver")) cfg.solver = parse_solver(Section(top.node("solver"), "solver"));
  if (top.has("window")) {
    Section w(top.node("window"), "window");
    cfg.window = std::pair{w.real("s"), w.real("p")};
    w.finish();
  }
  if (top.has("probes")) {
    YAML::Node list = top.node("probes");
    if (!list.IsSequence() && !list.IsNull()) throw Error("config.probes: expected a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      cfg.probes.push_back(parse_probe(Section(list[i], "probes[" + std::to_string(i) + "]"), i));
    }
  }
  top.finish();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment(buffer.str());
}

int worker_count(int configured) {
  int n = configured > 0 ? configured : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("NLSZP_WORKERS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || cap < 1) throw Error("NLSZP_WORKERS must be a positive integer");
    n = std::min<long>(n, cap);
  }
  return n;
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min<std::size_t>(std::max(1, workers), count);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(drain);
  drain();
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Grid rescaled_grid(const Grid& base, double L) {
  const double cells = L / base.spacing();
  const int n = static_cast<int>(std::lround(cells));
  if (std::abs(cells - n) > 1e-9 * cells) {
    throw Error("box length " + format_number(L) + " is not a multiple of the grid spacing");
  }
  return Grid(base.dim(), n, L);
}

std::vector<EnergyLedger> epsilon_sweep(const Field& u0, const ExperimentConfig& cfg,
                                        const probe::SweepEpsilon& sweep) {
  std::vector<std::optional<EnergyLedger>> out(sweep.epsilons.size());
  parallel_for(out.size(), worker_count(cfg.workers), [&](std::size_t i) {
    const auto g = globalization_config(cfg, sweep.p, sweep.epsilons[i], sweep.eta, sweep.T, sweep.safety_factor,
                                        sweep.sharp_cutoff);
    out[i] = globalize(u0, g).ledger;
  });
  std::vector<EnergyLedger> ledgers;
  for (auto& l : out) ledgers.push_back(std::move(*l));
  return ledgers;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  fs::create_directories(cfg.output_dir);
  ExperimentReport report;
  std::optional<Field> u0;
  for (const auto& p : cfg.probes) {
    ProbeOutcome outcome;
    outcome.name = p.name;
    outcome.kind = kind_name(p.spec);
    try {
      if (!u0) u0 = synthesize(cfg.data, cfg.grid);
      ProbeRunner runner(cfg, *u0, outcome);
      std::visit(runner, p.spec);
    } catch (const std::exception& ex) {
      outcome.pass = false;
      outcome.error = ex.what();
    }
    report.pass = report.pass && outcome.pass;
    report.outcomes.push_back(std::move(outcome));
  }
  report.manifest_path = (fs::path(cfg.output_dir) / "manifest.json").string();
  auto out = open_out(report.manifest_path);
  out << manifest(cfg, report).dump(2) << '\n';
  return report;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_diagnostics_csv(const std::string& path, const Trajectory& traj) {
  if (traj.diagnostics.size() != traj.times.size()) throw Error("trajectory has no diagnostics");
  auto out = open_out(path);
  out << "t,mass,energy,zsp_norm,duhamel_l2\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const auto& d = traj.diagnostics[i];
    out << format_number(traj.times[i]) << ',' << format_number(d.mass) << ',' << format_number(d.energy) << ','
        << format_number(d.zsp_norm) << ',' << format_number(d.duhamel_l2) << '\n';
  }
}

void write_ledger_csv(const std::string& path, const EnergyLedger& ledger) {
  auto out = open_out(path);
  out << "step,t_start,delta,E_before,E_after,increment,w_l2,w_h1,psi_h1,psi_h32,psi_h52\n";
  for (const auto& e : ledger.steps) {
    out << e.step_index << ',' << format_number(e.t_start) << ',' << format_number(e.delta) << ','
        << format_number(e.E_phi_before) << ',' << format_number(e.E_phi_after) << ',' << format_number(e.increment)
        << ',' << format_number(e.w_l2) << ',' << format_number(e.w_h1) << ',' << format_number(e.psi_h1) << ','
        << format_number(e.psi_h32) << ',' << format_number(e.psi_h52) << '\n';
  }
}

std::string fit_json(const ScalingFit& fit) {
  json j;
  j["slope"] = fit.slope;
  j["ci"] = {fit.ci_low, fit.ci_high};
  j["target_beta_minus_3theta"] = fit.target;
  j["pass"] = fit.pass;
  j["epsilons"] = fit.epsilons;
  j["mean_increments"] = fit.mean_increments;
  return j.dump(2);
}

}  // namespace nlszp
