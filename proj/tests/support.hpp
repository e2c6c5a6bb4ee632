#pragma once

#include <cmath>
#include <random>

#include "nlszp/fft.hpp"
#include "nlszp/grid.hpp"

namespace testing {

using nlszp::cplx;
using nlszp::Field;
using nlszp::Grid;

inline Field random_field(const Grid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Field f(g);
  for (auto& v : f.values()) v = {n01(rng), n01(rng)};
  return f;
}

/// Random field whose spectrum lives on |k_i| <= kmax (smooth, band-limited).
inline Field band_limited_field(const Grid& g, int kmax, std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  nlszp::Spectrum s(g);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto k = g.wave_index(i);
    bool inside = true;
    for (int a = 0; a < g.dim(); ++a) inside = inside && std::abs(k[a]) <= kmax;
    if (inside) s.coeffs()[i] = {n01(rng), n01(rng)};
  }
  return nlszp::to_field(s);
}

/// Sum of |a - b|^2 over sum of |b|^2, square-rooted.
inline double rel_l2(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  long double num = 0.0L, den = 0.0L;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return den == 0.0L ? std::sqrt(static_cast<double>(num)) : std::sqrt(static_cast<double>(num / den));
}

inline double rel_l2(const Field& a, const Field& b) { return rel_l2(a.values(), b.values()); }

/// Plain quadrature L^2 norm, independent of the library's norm code.
inline double quad_l2(const Field& f) {
  long double acc = 0.0L;
  for (const auto& v : f.values()) acc += std::norm(v);
  return std::sqrt(static_cast<double>(acc) * f.grid().cell_volume());
}

}  // namespace testing
