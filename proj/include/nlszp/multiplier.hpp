#pragma once

#include <functional>

#include "nlszp/grid.hpp"

namespace nlszp {

/// A Fourier multiplier: coefficient at xi is scaled by symbol(xi). The
/// symbol is never evaluated at xi = 0; zero_mode is used there instead.
struct Multiplier {
  std::function<cplx(const Frequency&)> symbol;
  cplx zero_mode{1.0, 0.0};
};

/// Applies m coefficient-wise. Throws Error("singular multiplier") if the
/// symbol is not finite at a nonzero lattice point.
Spectrum apply_multiplier(const Multiplier& m, const Spectrum& s);
Field apply_multiplier(const Multiplier& m, const Field& f);

/// Samples m on the lattice in FFT order (same checks as apply_multiplier).
std::vector<cplx> sample_multiplier(const Multiplier& m, const Grid& grid);

/// Zeroes every coefficient with some |k_i| > fraction * n/2.
Spectrum dealias(const Spectrum& s, double fraction = 2.0 / 3.0);

double norm_of(const Frequency& xi);

// Common symbols.
Multiplier identity_multiplier();
/// |xi|^s with value 0 at xi = 0 (homogeneous spaces are taken modulo constants).
Multiplier homogeneous_power(double s);
/// (1 + |xi|^2)^{s/2}.
Multiplier bessel_potential(double s);
/// e^{-i t |xi|^2}, the Fourier symbol of e^{it Laplacian}.
Multiplier schrodinger_phase(double t);
/// Real radial symbol g(|xi|) with g(0) used at the zero mode.
Multiplier radial_multiplier(std::function<double(double)> g);

// Smooth radial profiles built from the exp(-1/t) mollifier.

/// C-infinity cutoff equal to 1 on [0, 1] and 0 on [2, inf).
double smooth_cutoff(double t);
/// Littlewood-Paley profile smooth_cutoff(t) - smooth_cutoff(2t), supported in [1/2, 2].
double dyadic_bump(double t);
/// Radial bump equal to 1 on |xi| <= 1/2 and 0 on |xi| >= 1.
double unit_ball_bump(double r);

}  // namespace nlszp
