#pragma once

#include <span>
#include <vector>

#include "nlszp/grid.hpp"

namespace nlszp {

/// i u_t + Laplacian u + lambda |u|^sigma u = 0. lambda = -1 is defocusing.
/// linear_only switches the nonlinearity off (lambda effectively 0).
struct NlsParams {
  double sigma = 2.0;
  int lambda = -1;
  int dim = 3;
  bool linear_only = false;

  void validate() const;
};

enum class Quadrature { Midpoint, Simpson };

/// Discretization of the Duhamel formula.
///
/// Midpoint: u1 = L(h) u0 + i lambda h L(h/2) N(m), m = (L(h/2) u0 + L(-h/2) u1)/2.
/// Simpson: three-node collocation at tau = 0, h/2, h with Simpson weights
/// for the end value (fourth order in the nonlinear coupling).
/// The nonlinearity N is evaluated pointwise and then dealiased.
struct PicardConfig {
  double dt = 1e-3;
  int max_iter = 50;
  double tol = 1e-10;
  Quadrature quadrature = Quadrature::Midpoint;
  double dealias_fraction = 2.0 / 3.0;

  void validate() const;
};

/// What a solver stores while stepping.
struct RecordOptions {
  /// Record every k-th step (t = 0 and the final time are always recorded).
  /// 0 records only the endpoints.
  int snap_every = 1;
  bool keep_states = true;
  bool diagnostics = true;
  /// Exponents for the Z^s_p norm column.
  double zsp_s = 1.0;
  double zsp_p = 4.0;
};

struct Diagnostics {
  double mass = 0.0;
  double energy = 0.0;
  double zsp_norm = 0.0;
  /// ||u(t) - e^{it Laplacian} u0||_{L^2}
  double duhamel_l2 = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Field> states;  ///< empty when keep_states was false
  std::vector<Diagnostics> diagnostics;
  Field final_state;
  int steps = 0;
  int max_picard_iterations = 0;
  /// Largest observed ratio of successive Picard residuals.
  double max_contraction = 0.0;

  explicit Trajectory(Grid grid) : final_state(grid) {}
};

class PicardDiverged : public Error {
 public:
  PicardDiverged(double residual, double time);
  double residual() const { return residual_; }
  double time() const { return time_; }

 private:
  double residual_;
  double time_;
};

/// e^{it Laplacian} f, i.e. multiplier e^{-it|xi|^2}.
Field schrodinger_group(const Field& f, double t);

double mass(const Field& f);
/// (1/2) int |grad u|^2 - lambda/(sigma+2) int |u|^{sigma+2}; spectral gradient.
double energy(const Field& f, const NlsParams& params);

struct GrowthSample {
  double t;
  double ratio;
};
struct GrowthProbe {
  std::vector<GrowthSample> samples;
  double max_ratio = 0.0;
};

/// ratio(t) = ||e^{it Laplacian} u0||_{Z^s_p} / ((1+|t|) ||u0||_{Z^s_p}).
GrowthProbe linear_zsp_growth_probe(const Field& u0, double s, double p, std::span<const double> times);

/// Throws PicardDiverged if a step does not converge within cfg.max_iter.
Trajectory picard_solve(const Field& u0, const NlsParams& params, double T, const PicardConfig& cfg,
                        const RecordOptions& record = {});

/// Strang splitting: half linear step, exact phase rotation
/// u -> u exp(i lambda h |u|^sigma), half linear step.
Trajectory split_step_solve(const Field& u0, const NlsParams& params, double T, double dt,
                            const RecordOptions& record = {});

struct GainSample {
  double t;
  double duhamel_l2;
};
/// ||u(t) - e^{it Laplacian} u0||_{L^2} at every stored state.
std::vector<GainSample> gain_of_integrability_probe(const Trajectory& traj, const Field& u0);

}  // namespace nlszp
