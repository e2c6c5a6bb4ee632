#pragma once

#include <span>

#include "nlszp/grid.hpp"

namespace nlszp {

/// Forward transform; coefficients carry the 1/n^dim factor.
/// Throws Error("non-finite field") on NaN/Inf samples.
Spectrum to_spectrum(const Field& f);

/// Inverse of to_spectrum.
Field to_field(const Spectrum& s);

/// Raw transforms used by the time steppers. `in` and `out` must not alias
/// and must both have grid.size() elements. forward_fft includes the
/// 1/n^dim normalization; inverse_fft does not need one.
void forward_fft(const Grid& grid, std::span<const cplx> in, std::span<cplx> out);
void inverse_fft(const Grid& grid, std::span<const cplx> in, std::span<cplx> out);

}  // namespace nlszp
