#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nlszp/data_family.hpp"
#include "nlszp/evolution.hpp"
#include "nlszp/globalization.hpp"
#include "nlszp/norms.hpp"

namespace nlszp {

namespace probe {

struct Norms {
  std::vector<NormKind> norms;
};

/// Linear Z^s_p growth ratio on [0, t_max].
struct Growth {
  double s = 1.0;
  double p = 4.0;
  double t_max = 10.0;
  int samples = 41;
  std::optional<double> max_ratio;
};

struct Evolve {
  double T = 1.0;
  bool split_step = false;
  int snap_every = 10;
  std::optional<double> max_mass_drift;
  std::optional<double> max_energy_drift;
};

/// Box-size sweep at fixed spacing: ||u0||_{L^2} slope in log L and the
/// spread of ||u(T) - e^{iT Laplacian} u0||_{L^2}.
struct Gain {
  double T = 0.5;
  std::vector<double> L_values;
  double slope_tolerance = 0.1;
  double max_variation = 0.2;
};

/// Box-size sweep of the linear growth probe at fixed spacing.
struct SweepBox {
  std::vector<double> L_values;
  double s = 1.0;
  double p = 4.0;
  double t_max = 10.0;
  int samples = 41;
  double max_spread = 0.15;
};

struct Globalize {
  double p = 4.25;
  double epsilon = 0.1;
  double eta = 0.05;
  double T = 1.0;
  double safety_factor = 10.0;
  bool sharp_cutoff = false;
};

struct SweepEpsilon {
  double p = 4.25;
  std::vector<double> epsilons;
  double eta = 0.05;
  double T = 1.0;
  double safety_factor = 10.0;
  bool sharp_cutoff = false;
};

}  // namespace probe

using ProbeSpec = std::variant<probe::Norms, probe::Growth, probe::Evolve, probe::Gain, probe::SweepBox,
                               probe::Globalize, probe::SweepEpsilon>;

struct NamedProbe {
  std::string name;
  ProbeSpec spec;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::string output_dir = "out";
  int workers = 0;  ///< 0: hardware concurrency
  Grid grid{1, 256, 32.0};
  DataFamily data = family::Gaussian{};
  NlsParams nls{2.0, -1, 1};
  PicardConfig solver;
  /// Optional (s, p) pair that must satisfy the Z^s_p window.
  std::optional<std::pair<double, double>> window;
  std::vector<NamedProbe> probes;

  /// Checks every parameter window referenced by the probes.
  void validate() const;
};

/// Parses YAML text. Unknown keys are errors; the result is validated.
ExperimentConfig parse_experiment(const std::string& yaml_text);
ExperimentConfig load_experiment(const std::string& path);

struct ProbeOutcome {
  std::string name;
  std::string kind;
  bool pass = false;
  std::string error;
  std::map<std::string, double> metrics;
  std::vector<std::string> files;
};

struct ExperimentReport {
  std::vector<ProbeOutcome> outcomes;
  bool pass = true;
  std::string manifest_path;
};

/// Runs the probes in order, writes CSV/.dat files and manifest.json into
/// cfg.output_dir. A failing probe is recorded and the rest still run.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Worker count: configured (or hardware concurrency), capped by NLSZP_WORKERS.
int worker_count(int configured);

/// Runs body(i) for i in [0, count) on up to `workers` threads; rethrows the
/// first failure by index once all jobs finished.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

/// Grid with the same spacing as `base` and box length L.
Grid rescaled_grid(const Grid& base, double L);

/// Ledgers of globalize() over several epsilons, concurrently.
std::vector<EnergyLedger> epsilon_sweep(const Field& u0, const ExperimentConfig& cfg, const probe::SweepEpsilon& sweep);

// Report writers.
void write_diagnostics_csv(const std::string& path, const Trajectory& traj);
void write_ledger_csv(const std::string& path, const EnergyLedger& ledger);
std::string fit_json(const ScalingFit& fit);
std::string format_number(double v);

}  // namespace nlszp
