#include "nlszp/multiplier.hpp"

#include <cmath>

#include "nlszp/fft.hpp"

namespace nlszp {

namespace {

double mollifier(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

bool finite(cplx c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

}  // namespace

double norm_of(const Frequency& xi) { return std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]); }

std::vector<cplx> sample_multiplier(const Multiplier& m, const Grid& grid) {
  std::vector<cplx> table(grid.size());
  table[0] = m.zero_mode;
  for (std::size_t i = 1; i < table.size(); ++i) {
    const cplx v = m.symbol(grid.frequency(grid.wave_index(i)));
    if (!finite(v)) throw Error("singular multiplier");
    table[i] = v;
  }
  return table;
}

Spectrum apply_multiplier(const Multiplier& m, const Spectrum& s) {
  const auto table = sample_multiplier(m, s.grid());
  Spectrum out(s.grid(), s.coeffs());
  for (std::size_t i = 0; i < table.size(); ++i) out.coeffs()[i] *= table[i];
  return out;
}

Field apply_multiplier(const Multiplier& m, const Field& f) { return to_field(apply_multiplier(m, to_spectrum(f))); }

Spectrum dealias(const Spectrum& s, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw Error("dealias fraction must lie in (0, 1]");
  const Grid& g = s.grid();
  const double cut = fraction * (g.n() / 2);
  Spectrum out(g, s.coeffs());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const WaveIndex k = g.wave_index(i);
    for (int a = 0; a < g.dim(); ++a) {
      if (std::abs(k[a]) > cut) {
        out.coeffs()[i] = 0.0;
        break;
      }
    }
  }
  return out;
}

Multiplier identity_multiplier() {
  return {[](const Frequency&) { return cplx{1.0, 0.0}; }, 1.0};
}

Multiplier homogeneous_power(double s) {
  return {[s](const Frequency& xi) { return cplx{std::pow(norm_of(xi), s), 0.0}; }, 0.0};
}

Multiplier bessel_potential(double s) {
  return {[s](const Frequency& xi) {
            const double r = norm_of(xi);
            return cplx{std::pow(1.0 + r * r, 0.5 * s), 0.0};
          },
          1.0};
}

Multiplier schrodinger_phase(double t) {
  return {[t](const Frequency& xi) {
            const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
            return std::polar(1.0, -t * r2);
          },
          1.0};
}

Multiplier radial_multiplier(std::function<double(double)> g) {
  const double at_zero = g(0.0);
  return {[g = std::move(g)](const Frequency& xi) { return cplx{g(norm_of(xi)), 0.0}; }, at_zero};
}

double smooth_cutoff(double t) {
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  const double a = mollifier(2.0 - t);
  const double b = mollifier(t - 1.0);
  return a / (a + b);
}

double dyadic_bump(double t) { return smooth_cutoff(t) - smooth_cutoff(2.0 * t); }

double unit_ball_bump(double r) { return smooth_cutoff(2.0 * r); }

}  // namespace nlszp
