#include "nlszp/grid.hpp"

#include <cmath>
#include <numbers>

namespace nlszp {

namespace {

bool is_five_smooth(int n) {
  for (int p : {2, 3, 5}) {
    while (n % p == 0) n /= p;
  }
  return n == 1;
}

}  // namespace

Grid::Grid(int dim, int n, double box_length) : dim_(dim), n_(n), box_length_(box_length) {
  if (dim < 1 || dim > 3) throw Error("grid dimension must be 1, 2 or 3");
  if (n < 8 || n % 2 != 0 || !is_five_smooth(n)) {
    throw Error("grid size n must be even, >= 8 and have only prime factors 2, 3, 5 (got " +
                std::to_string(n) + ")");
  }
  if (!(box_length > 0.0) || !std::isfinite(box_length)) throw Error("box length must be positive");
  size_ = 1;
  for (int a = 0; a < dim; ++a) size_ *= static_cast<std::size_t>(n);
}

double Grid::cell_volume() const { return std::pow(spacing(), dim_); }
double Grid::volume() const { return std::pow(box_length_, dim_); }
double Grid::fundamental() const { return 2.0 * std::numbers::pi / box_length_; }
double Grid::nyquist() const { return std::numbers::pi * n_ / box_length_; }

WaveIndex Grid::wave_index(std::size_t flat) const {
  WaveIndex k{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    k[a] = wavenumber(static_cast<int>(flat % n_));
    flat /= n_;
  }
  return k;
}

std::size_t Grid::flat_index(const WaveIndex& k) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim_; ++a) flat = flat * n_ + axis_index(k[a]);
  return flat;
}

Frequency Grid::frequency(const WaveIndex& k) const {
  const double f = fundamental();
  return {f * k[0], f * k[1], f * k[2]};
}

std::array<double, 3> Grid::position(std::size_t flat) const {
  std::array<double, 3> x{0.0, 0.0, 0.0};
  const double h = spacing();
  for (int a = dim_ - 1; a >= 0; --a) {
    x[a] = h * static_cast<double>(flat % n_);
    flat /= n_;
  }
  return x;
}

std::vector<double> squared_frequencies(const Grid& grid) {
  std::vector<double> axis(grid.n());
  for (int i = 0; i < grid.n(); ++i) {
    const double xi = grid.fundamental() * grid.wavenumber(i);
    axis[i] = xi * xi;
  }
  std::vector<double> out(grid.size());
  const std::size_t n = grid.n();
  switch (grid.dim()) {
    case 1:
      out = axis;
      break;
    case 2:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i * n + j] = axis[i] + axis[j];
      break;
    default:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t l = 0; l < n; ++l) out[(i * n + j) * n + l] = axis[i] + axis[j] + axis[l];
  }
  return out;
}

Field::Field(Grid grid) : grid_(grid), values_(grid.size()) {}

Field::Field(Grid grid, std::vector<cplx> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw Error("field size does not match grid");
}

bool Field::all_finite() const {
  for (const auto& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(grid_, other.grid_, "field addition");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(grid_, other.grid_, "field subtraction");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(cplx factor) {
  for (auto& v : values_) v *= factor;
  return *this;
}

Field operator+(Field lhs, const Field& rhs) { return lhs += rhs; }
Field operator-(Field lhs, const Field& rhs) { return lhs -= rhs; }
Field operator*(cplx factor, Field f) { return f *= factor; }

Spectrum::Spectrum(Grid grid) : grid_(grid), coeffs_(grid.size()) {}

Spectrum::Spectrum(Grid grid, std::vector<cplx> coeffs) : grid_(grid), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != grid_.size()) throw Error("spectrum size does not match grid");
}

void require_same_grid(const Grid& a, const Grid& b, const char* context) {
  if (!(a == b)) throw Error(std::string("grid mismatch in ") + context);
}

}  // namespace nlszp
