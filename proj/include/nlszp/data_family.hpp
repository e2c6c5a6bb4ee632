#pragma once

#include <string>
#include <variant>

#include "nlszp/grid.hpp"

namespace nlszp {

namespace family {

/// A exp(-|x - c|^2 / (2 width^2)) centered in the box.
struct Gaussian {
  double width = 1.0;
  double amplitude = 1.0;
};

/// A exp(i k.x 2 pi / L); k in integer lattice units.
struct PureMode {
  WaveIndex k{1, 0, 0};
  double amplitude = 1.0;
};

/// A (1 + r^2/w^2)^{-gamma/2} about the box center, where r is the chordal
/// periodic distance r_i = (L/pi) sin(pi (x_i - c_i)/L), so the profile is
/// smooth across the seam. Needs d/p < gamma <= d/2: in L^p and H^s-dot but
/// with an L^2 norm growing like L^{d/2 - gamma}.
struct PowerTail {
  double gamma = 1.2;
  double core_width = 1.0;
  double amplitude = 1.0;
  double p = 4.25;  ///< integrability exponent the profile must satisfy
};

/// A snapshot file.
struct Custom {
  std::string path;
};

}  // namespace family

using DataFamily = std::variant<family::Gaussian, family::PureMode, family::PowerTail, family::Custom>;

std::string name_of(const DataFamily& f);

/// Throws Error on invalid parameters for the given grid.
void validate(const DataFamily& f, const Grid& grid);

/// Deterministic sample on the grid. Custom snapshots must match the grid.
Field synthesize(const DataFamily& f, const Grid& grid);

}  // namespace nlszp
