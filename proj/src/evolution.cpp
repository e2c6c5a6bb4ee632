#include "nlszp/evolution.hpp"

#include <cmath>
#include <string>

#include "nlszp/fft.hpp"
#include "nlszp/norms.hpp"

namespace nlszp {

namespace {

constexpr cplx kI{0.0, 1.0};

std::vector<cplx> phase_table(const std::vector<double>& k2, double t) {
  std::vector<cplx> out(k2.size());
  for (std::size_t i = 0; i < k2.size(); ++i) out[i] = std::polar(1.0, -t * k2[i]);
  return out;
}

std::vector<char> dealias_mask(const Grid& g, double fraction) {
  const double cut = fraction * (g.n() / 2);
  std::vector<char> keep(g.size(), 1);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const WaveIndex k = g.wave_index(i);
    for (int a = 0; a < g.dim(); ++a)
      if (std::abs(k[a]) > cut) keep[i] = 0;
  }
  return keep;
}

// |u|^sigma u with |0|^sigma 0 = 0.
void nonlinearity(std::span<const cplx> u, double sigma, std::span<cplx> out) {
  if (sigma == 2.0) {
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::norm(u[i]) * u[i];
  } else {
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double r = std::abs(u[i]);
      out[i] = r == 0.0 ? cplx{} : std::pow(r, sigma) * u[i];
    }
  }
}

double squared_sum(std::span<const cplx> v) {
  long double acc = 0.0L;
  for (const auto& c : v) acc += std::norm(c);
  return static_cast<double>(acc);
}

double relative_change(std::span<const cplx> next, std::span<const cplx> prev) {
  long double diff = 0.0L, ref = 0.0L;
  for (std::size_t i = 0; i < next.size(); ++i) {
    diff += std::norm(next[i] - prev[i]);
    ref += std::norm(next[i]);
  }
  if (ref == 0.0L) return diff == 0.0L ? 0.0 : HUGE_VAL;
  return std::sqrt(static_cast<double>(diff / ref));
}

void require_finite(const std::vector<cplx>& v, double t) {
  for (const auto& c : v) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw Error("non-finite state at t = " + std::to_string(t));
    }
  }
}

int step_count(double T, double dt) {
  if (!(T > 0.0) || !std::isfinite(T)) throw Error("final time T must be positive");
  if (!(dt > 0.0)) throw Error("time step must be positive");
  return std::max(1, static_cast<int>(std::ceil(T / dt - 1e-9)));
}

bool should_record(int step, int total, int snap_every) {
  if (step == total) return true;
  return snap_every > 0 && step % snap_every == 0;
}

// Stores states and diagnostics for a trajectory.
class Recorder {
 public:
  Recorder(const Field& u0, const NlsParams& params, const RecordOptions& opts, Trajectory& traj)
      : params_(params), opts_(opts), traj_(traj), u0_hat_(to_spectrum(u0)), k2_(squared_frequencies(u0.grid())) {}

  void record(double t, const Field& u) {
    traj_.times.push_back(t);
    if (opts_.keep_states) traj_.states.push_back(u);
    if (!opts_.diagnostics) return;
    Diagnostics d;
    d.mass = mass(u);
    d.energy = energy(u, params_);
    d.zsp_norm = zhidkov_norm(u, opts_.zsp_s, opts_.zsp_p);
    Spectrum free(u0_hat_.grid(), u0_hat_.coeffs());
    const auto phase = phase_table(k2_, t);
    for (std::size_t i = 0; i < free.size(); ++i) free.coeffs()[i] *= phase[i];
    const Field linear = to_field(free);
    long double acc = 0.0L;
    for (std::size_t i = 0; i < u.size(); ++i) acc += std::norm(u[i] - linear[i]);
    d.duhamel_l2 = std::sqrt(static_cast<double>(acc) * u.grid().cell_volume());
    traj_.diagnostics.push_back(d);
  }

 private:
  NlsParams params_;
  RecordOptions opts_;
  Trajectory& traj_;
  Spectrum u0_hat_;
  std::vector<double> k2_;
};

struct ContractionTracker {
  double previous = -1.0;
  double worst = 0.0;
  void observe(double residual) {
    if (previous > 0.0 && residual > 0.0) worst = std::max(worst, residual / previous);
    previous = residual;
  }
};

}  // namespace

void NlsParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw Error("sigma must be positive");
  if (lambda != 1 && lambda != -1) throw Error("lambda must be +1 or -1");
  if (dim < 1 || dim > 3) throw Error("dimension must be 1, 2 or 3");
}

void PicardConfig::validate() const {
  if (!(dt > 0.0)) throw Error("dt must be positive");
  if (!(tol > 0.0)) throw Error("Picard tolerance must be positive");
  if (max_iter < 2) throw Error("max_iter must be at least 2");
  if (!(dealias_fraction > 0.0 && dealias_fraction <= 1.0)) throw Error("dealias fraction must lie in (0, 1]");
}

PicardDiverged::PicardDiverged(double residual, double time)
    : Error("Picard diverged at t = " + std::to_string(time) + " (last residual " + std::to_string(residual) + ")"),
      residual_(residual),
      time_(time) {}

Field schrodinger_group(const Field& f, double t) {
  Spectrum s = to_spectrum(f);
  const auto phase = phase_table(squared_frequencies(f.grid()), t);
  for (std::size_t i = 0; i < s.size(); ++i) s.coeffs()[i] *= phase[i];
  return to_field(s);
}

double mass(const Field& f) { return squared_sum(f.values()) * f.grid().cell_volume(); }

double energy(const Field& f, const NlsParams& params) {
  const Spectrum s = to_spectrum(f);
  const auto k2 = squared_frequencies(f.grid());
  long double kinetic = 0.0L;
  for (std::size_t i = 0; i < s.size(); ++i) kinetic += k2[i] * std::norm(s.coeffs()[i]);
  long double potential = 0.0L;
  const double exponent = params.sigma + 2.0;
  for (const auto& v : f.values()) potential += std::pow(std::abs(v), exponent);
  const double lambda = params.linear_only ? 0.0 : params.lambda;
  return 0.5 * static_cast<double>(kinetic) * f.grid().volume() -
         lambda / exponent * static_cast<double>(potential) * f.grid().cell_volume();
}

GrowthProbe linear_zsp_growth_probe(const Field& u0, double s, double p, std::span<const double> times) {
  const double base = zhidkov_norm(u0, s, p);
  if (!(base > 0.0)) throw Error("growth probe needs a nonzero initial Z^s_p norm");
  const Spectrum u0_hat = to_spectrum(u0);
  const auto k2 = squared_frequencies(u0.grid());
  GrowthProbe probe;
  for (double t : times) {
    Spectrum evolved(u0.grid(), u0_hat.coeffs());
    const auto phase = phase_table(k2, t);
    for (std::size_t i = 0; i < evolved.size(); ++i) evolved.coeffs()[i] *= phase[i];
    const double ratio = zhidkov_norm(to_field(evolved), s, p) / ((1.0 + std::abs(t)) * base);
    probe.samples.push_back({t, ratio});
    probe.max_ratio = std::max(probe.max_ratio, ratio);
  }
  return probe;
}

Trajectory picard_solve(const Field& u0, const NlsParams& params, double T, const PicardConfig& cfg,
                        const RecordOptions& record) {
  params.validate();
  cfg.validate();
  if (!u0.all_finite()) throw Error("non-finite field");
  const Grid& grid = u0.grid();
  if (params.dim != grid.dim()) throw Error("NLS dimension does not match the grid");
  const int nsteps = step_count(T, cfg.dt);
  const double h = T / nsteps;
  const std::size_t size = grid.size();
  const auto k2 = squared_frequencies(grid);
  const auto half = phase_table(k2, 0.5 * h);
  const auto full = phase_table(k2, h);
  const bool dealiasing = cfg.dealias_fraction < 1.0;
  const auto keep = dealias_mask(grid, cfg.dealias_fraction);
  const cplx coupling = kI * static_cast<double>(params.lambda) * h;

  Trajectory traj(grid);
  Recorder recorder(u0, params, record, traj);
  recorder.record(0.0, u0);

  std::vector<cplx> u_hat(size), work(size), nl(size), nl_hat(size);
  forward_fft(grid, u0.values(), u_hat);

  // Projects physical values `in` onto the dealiased band; writes both the
  // spectrum and the projected physical values.
  const auto project = [&](std::span<const cplx> in, std::span<cplx> spec, std::span<cplx> phys) {
    forward_fft(grid, in, spec);
    if (dealiasing) {
      for (std::size_t i = 0; i < size; ++i)
        if (!keep[i]) spec[i] = 0.0;
      inverse_fft(grid, spec, phys);
    } else {
      std::copy(in.begin(), in.end(), phys.begin());
    }
  };

  std::vector<cplx> a_hat(size), a(size), b(size), b_next(size), mid(size), dn(size);
  // Simpson-only buffers.
  std::vector<cplx> n0_hat, base_mid, base_end, u_mid, u_end, nm_hat, n1_hat, mid_next, end_next, u_phys;
  if (cfg.quadrature == Quadrature::Simpson) {
    for (auto* v : {&n0_hat, &base_mid, &base_end, &u_mid, &u_end, &nm_hat, &n1_hat, &mid_next, &end_next, &u_phys})
      v->resize(size);
    u_phys = u0.values();
  }

  for (int step = 1; step <= nsteps; ++step) {
    const double t_end = step * h;
    if (params.linear_only) {
      for (std::size_t i = 0; i < size; ++i) u_hat[i] *= full[i];
    } else if (cfg.quadrature == Quadrature::Midpoint) {
      for (std::size_t i = 0; i < size; ++i) a_hat[i] = half[i] * u_hat[i];
      inverse_fft(grid, a_hat, a);
      b = a;
      ContractionTracker tracker;
      bool converged = false;
      double residual = HUGE_VAL;
      for (int it = 1; it <= cfg.max_iter; ++it) {
        for (std::size_t i = 0; i < size; ++i) mid[i] = 0.5 * (a[i] + b[i]);
        nonlinearity(mid, params.sigma, nl);
        project(nl, nl_hat, dn);
        for (std::size_t i = 0; i < size; ++i) b_next[i] = a[i] + coupling * dn[i];
        residual = relative_change(b_next, b);
        tracker.observe(residual);
        b.swap(b_next);
        traj.max_picard_iterations = std::max(traj.max_picard_iterations, it);
        if (residual < cfg.tol) {
          converged = true;
          break;
        }
      }
      if (!converged || !std::isfinite(residual)) throw PicardDiverged(residual, t_end);
      traj.max_contraction = std::max(traj.max_contraction, tracker.worst);
      // b was built from the last projected nonlinearity, so its spectrum is exact.
      for (std::size_t i = 0; i < size; ++i) u_hat[i] = half[i] * (a_hat[i] + coupling * nl_hat[i]);
    } else {
      nonlinearity(u_phys, params.sigma, nl);
      project(nl, n0_hat, dn);
      for (std::size_t i = 0; i < size; ++i) {
        base_mid[i] = half[i] * (u_hat[i] + coupling * (5.0 / 24.0) * n0_hat[i]);
        base_end[i] = full[i] * (u_hat[i] + coupling * (1.0 / 6.0) * n0_hat[i]);
        work[i] = half[i] * u_hat[i];
      }
      inverse_fft(grid, work, u_mid);
      for (std::size_t i = 0; i < size; ++i) work[i] = full[i] * u_hat[i];
      inverse_fft(grid, work, u_end);
      ContractionTracker tracker;
      bool converged = false;
      double residual = HUGE_VAL;
      for (int it = 1; it <= cfg.max_iter; ++it) {
        nonlinearity(u_mid, params.sigma, nl);
        project(nl, nm_hat, dn);
        nonlinearity(u_end, params.sigma, nl);
        project(nl, n1_hat, dn);
        for (std::size_t i = 0; i < size; ++i) {
          work[i] = base_mid[i] + coupling * ((1.0 / 3.0) * nm_hat[i] - (1.0 / 24.0) * std::conj(half[i]) * n1_hat[i]);
        }
        inverse_fft(grid, work, mid_next);
        for (std::size_t i = 0; i < size; ++i) {
          u_hat[i] = base_end[i] + coupling * ((2.0 / 3.0) * half[i] * nm_hat[i] + (1.0 / 6.0) * n1_hat[i]);
        }
        inverse_fft(grid, u_hat, end_next);
        residual = std::max(relative_change(end_next, u_end), relative_change(mid_next, u_mid));
        tracker.observe(residual);
        u_mid.swap(mid_next);
        u_end.swap(end_next);
        traj.max_picard_iterations = std::max(traj.max_picard_iterations, it);
        if (residual < cfg.tol) {
          converged = true;
          break;
        }
      }
      if (!converged || !std::isfinite(residual)) throw PicardDiverged(residual, t_end);
      traj.max_contraction = std::max(traj.max_contraction, tracker.worst);
      u_phys = u_end;
    }

    if (should_record(step, nsteps, record.snap_every)) {
      Field u(grid);
      inverse_fft(grid, u_hat, u.values());
      require_finite(u.values(), t_end);
      recorder.record(t_end, u);
    }
  }
  traj.steps = nsteps;
  inverse_fft(grid, u_hat, traj.final_state.values());
  return traj;
}

Trajectory split_step_solve(const Field& u0, const NlsParams& params, double T, double dt,
                            const RecordOptions& record) {
  params.validate();
  if (!u0.all_finite()) throw Error("non-finite field");
  const Grid& grid = u0.grid();
  if (params.dim != grid.dim()) throw Error("NLS dimension does not match the grid");
  const int nsteps = step_count(T, dt);
  const double h = T / nsteps;
  const auto half = phase_table(squared_frequencies(grid), 0.5 * h);
  const double rotation = params.linear_only ? 0.0 : params.lambda * h;

  Trajectory traj(grid);
  Recorder recorder(u0, params, record, traj);
  recorder.record(0.0, u0);

  std::vector<cplx> u = u0.values(), u_hat(grid.size());
  const auto linear_half = [&] {
    forward_fft(grid, u, u_hat);
    for (std::size_t i = 0; i < u_hat.size(); ++i) u_hat[i] *= half[i];
    inverse_fft(grid, u_hat, u);
  };

  for (int step = 1; step <= nsteps; ++step) {
    linear_half();
    if (rotation != 0.0) {
      for (auto& v : u) {
        const double r = std::abs(v);
        const double power = params.sigma == 2.0 ? r * r : (r == 0.0 ? 0.0 : std::pow(r, params.sigma));
        v *= std::polar(1.0, rotation * power);
      }
    }
    linear_half();
    if (should_record(step, nsteps, record.snap_every)) {
      require_finite(u, step * h);
      recorder.record(step * h, Field(grid, u));
    }
  }
  traj.steps = nsteps;
  traj.final_state = Field(grid, u);
  return traj;
}

std::vector<GainSample> gain_of_integrability_probe(const Trajectory& traj, const Field& u0) {
  if (traj.states.empty()) throw Error("trajectory holds no states");
  const Spectrum u0_hat = to_spectrum(u0);
  const auto k2 = squared_frequencies(u0.grid());
  std::vector<GainSample> out;
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    const Field& u = traj.states[n];
    require_same_grid(u.grid(), u0.grid(), "gain-of-integrability probe");
    Spectrum free(u0.grid(), u0_hat.coeffs());
    const auto phase = phase_table(k2, traj.times[n]);
    for (std::size_t i = 0; i < free.size(); ++i) free.coeffs()[i] *= phase[i];
    const Field linear = to_field(free);
    long double acc = 0.0L;
    for (std::size_t i = 0; i < u.size(); ++i) acc += std::norm(u[i] - linear[i]);
    out.push_back({traj.times[n], std::sqrt(static_cast<double>(acc) * u.grid().cell_volume())});
  }
  return out;
}

}  // namespace nlszp
