#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlszp {

using cplx = std::complex<double>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integer wave vector on the lattice; unused axes are zero.
using WaveIndex = std::array<int, 3>;
/// Physical frequency vector xi = 2*pi*k/L; unused axes are zero.
using Frequency = std::array<double, 3>;

/// Periodic box [0, L)^dim sampled with n points per axis.
///
/// n must be even, at least 8, and 5-smooth (only prime factors 2, 3, 5) so
/// that FFT sizes stay fast; powers of two are the common case.
class Grid {
 public:
  Grid(int dim, int n, double box_length);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double box_length() const { return box_length_; }
  double spacing() const { return box_length_ / n_; }
  /// n^dim.
  std::size_t size() const { return size_; }
  /// spacing^dim, the quadrature weight of one sample.
  double cell_volume() const;
  /// L^dim.
  double volume() const;
  /// 2*pi/L, the smallest nonzero frequency along an axis.
  double fundamental() const;
  /// pi*n/L, the Nyquist frequency along an axis.
  double nyquist() const;

  /// Signed wavenumber in [-n/2, n/2) for an FFT-ordered axis index.
  int wavenumber(int axis_index) const { return axis_index < n_ / 2 ? axis_index : axis_index - n_; }
  /// FFT-ordered axis index of a signed wavenumber.
  int axis_index(int k) const { return k >= 0 ? k : k + n_; }

  WaveIndex wave_index(std::size_t flat) const;
  std::size_t flat_index(const WaveIndex& k) const;
  Frequency frequency(const WaveIndex& k) const;
  /// Physical coordinates of a sample (x_i = j_i * spacing).
  std::array<double, 3> position(std::size_t flat) const;

  bool operator==(const Grid& other) const = default;

 private:
  int dim_;
  int n_;
  double box_length_;
  std::size_t size_;
};

/// |xi|^2 for every lattice point in FFT order.
std::vector<double> squared_frequencies(const Grid& grid);

/// Complex samples on a grid, row-major over axes.
class Field {
 public:
  explicit Field(Grid grid);
  Field(Grid grid, std::vector<cplx> values);

  const Grid& grid() const { return grid_; }
  std::vector<cplx>& values() { return values_; }
  const std::vector<cplx>& values() const { return values_; }
  cplx& operator[](std::size_t i) { return values_[i]; }
  const cplx& operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  bool all_finite() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(cplx factor);

 private:
  Grid grid_;
  std::vector<cplx> values_;
};

Field operator+(Field lhs, const Field& rhs);
Field operator-(Field lhs, const Field& rhs);
Field operator*(cplx factor, Field f);

/// Discrete Fourier coefficients in FFT order; the forward transform carries
/// 1/n^dim so the coefficients interpolate the field.
class Spectrum {
 public:
  explicit Spectrum(Grid grid);
  Spectrum(Grid grid, std::vector<cplx> coeffs);

  const Grid& grid() const { return grid_; }
  std::vector<cplx>& coeffs() { return coeffs_; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  cplx& at(const WaveIndex& k) { return coeffs_[grid_.flat_index(k)]; }
  const cplx& at(const WaveIndex& k) const { return coeffs_[grid_.flat_index(k)]; }
  std::size_t size() const { return coeffs_.size(); }

 private:
  Grid grid_;
  std::vector<cplx> coeffs_;
};

void require_same_grid(const Grid& a, const Grid& b, const char* context);

}  // namespace nlszp
