#pragma once

#include <map>
#include <string>

#include "nlszp/grid.hpp"

namespace nlszp {

/// A field split into a low-frequency ("regular") and a high-frequency
/// ("rough") part with regular + rough == input.
struct DecompositionResult {
  Field regular;
  Field rough;
  double cutoff_radius = 0.0;
  /// Measured norms and ratios, keyed by name.
  std::map<std::string, double> report;
};

/// Frequency truncation parameters for the cubic globalization iteration.
struct TruncationParams {
  double p = 0.0;
  double epsilon = 0.0;
  double theta = 0.0;  ///< (p-4)/(2p-4)
  double beta = 0.0;   ///< (1+4 theta)/2
  double eta_slack = 0.05;
  double delta = 0.0;  ///< epsilon^{8 theta (1 + eta)}
  /// beta > 7 theta, decided exactly on the rational value of p.
  bool globalizable = false;
};

/// Requires 4 < p < 6, 0 < epsilon < 1 and eta_slack > 0.
TruncationParams make_truncation_params(double p, double epsilon, double eta_slack = 0.05);

/// regular = psi_hat * g with psi the unit-ball bump (1 on |xi| <= 1/2, 0 on
/// |xi| >= 1); rough = g - regular. The report holds the band norm of the
/// regular part over alpha in [s, s + n_band], the H^s norm of the rough
/// part, ||g||_{Z^s_p} and the two ratios against it.
DecompositionResult zhidkov_decompose(const Field& g, int n_band, double s, double p);

/// psi = chi_eps * u0 (low-pass at radius epsilon), phi = u0 - psi.
///
/// Smooth cutoff: chi(xi/eps) with chi the unit-ball bump, so the symbol is 1
/// on |xi| <= eps/2 and 0 on |xi| >= eps. Sharp cutoff: indicator of |xi| <= eps.
/// Throws Error("cutoff below resolution") when eps < 4 pi/L.
DecompositionResult frequency_split(const Field& u0, const TruncationParams& params, bool sharp = false);

/// Low-pass symbol used by frequency_split, for oracle tests.
double low_pass_symbol(double magnitude, double epsilon, bool sharp);

}  // namespace nlszp
