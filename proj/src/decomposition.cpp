#include "nlszp/decomposition.hpp"

#include <cmath>
#include <numbers>

#include "nlszp/evolution.hpp"
#include "nlszp/exponents.hpp"
#include "nlszp/fft.hpp"
#include "nlszp/multiplier.hpp"
#include "nlszp/norms.hpp"

namespace nlszp {

namespace {

// Splits u into (symbol * u, u - symbol * u).
std::pair<Field, Field> split_by(const Field& u, auto symbol) {
  Spectrum s = to_spectrum(u);
  const auto k2 = squared_frequencies(u.grid());
  for (std::size_t i = 0; i < s.size(); ++i) s.coeffs()[i] *= symbol(std::sqrt(k2[i]));
  Field low = to_field(s);
  Field high = u - low;
  return {std::move(low), std::move(high)};
}

}  // namespace

TruncationParams make_truncation_params(double p, double epsilon, double eta_slack) {
  if (!(p > 4.0 && p < 6.0)) throw Error("truncation setting requires 4 < p < 6 (got p = " + std::to_string(p) + ")");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("epsilon must lie in (0, 1)");
  if (!(eta_slack > 0.0) || !std::isfinite(eta_slack)) throw Error("eta slack must be positive");
  TruncationParams out;
  out.p = p;
  out.epsilon = epsilon;
  out.eta_slack = eta_slack;
  out.theta = (p - 4.0) / (2.0 * p - 4.0);
  out.beta = (1.0 + 4.0 * out.theta) / 2.0;
  out.delta = std::pow(epsilon, 8.0 * out.theta * (1.0 + eta_slack));
  out.globalizable = globalizable_exponents(ExtRational::from_double(p));
  return out;
}

DecompositionResult zhidkov_decompose(const Field& g, int n_band, double s, double p) {
  if (n_band < 1) throw Error("band width n must be at least 1");
  auto [regular, rough] = split_by(g, [](double r) { return unit_ball_bump(r); });
  DecompositionResult out{std::move(regular), std::move(rough), 1.0, {}};
  const double whole = zhidkov_norm(g, s, p);
  const double band = zhidkov_band_norm(out.regular, s, n_band, p);
  const double rough_hs = inhom_sobolev_norm(out.rough, s);
  out.report["zsp_norm_input"] = whole;
  out.report["regular_band_norm"] = band;
  out.report["rough_hs_norm"] = rough_hs;
  out.report["regular_band_ratio"] = whole > 0.0 ? band / whole : 0.0;
  out.report["rough_hs_ratio"] = whole > 0.0 ? rough_hs / whole : 0.0;
  return out;
}

double low_pass_symbol(double magnitude, double epsilon, bool sharp) {
  if (sharp) return magnitude <= epsilon ? 1.0 : 0.0;
  return unit_ball_bump(magnitude / epsilon);
}

DecompositionResult frequency_split(const Field& u0, const TruncationParams& params, bool sharp) {
  const double eps = params.epsilon;
  const double resolution = 4.0 * std::numbers::pi / u0.grid().box_length();
  if (!(eps >= resolution)) {
    throw Error("cutoff below resolution (epsilon = " + std::to_string(eps) + " < 4 pi/L = " +
                std::to_string(resolution) + ")");
  }
  auto [psi, phi] = split_by(u0, [eps, sharp](double r) { return low_pass_symbol(r, eps, sharp); });
  DecompositionResult out{std::move(psi), std::move(phi), eps, {}};

  const double z1p = zhidkov_norm(u0, 1.0, params.p);
  const NlsParams cubic{2.0, -1, u0.grid().dim()};
  out.report["zsp_norm_input"] = z1p;
  for (const auto& [name, alpha] : {std::pair{"psi_h1", 1.0}, {"psi_h32", 1.5}, {"psi_h52", 2.5}}) {
    const double value = hom_sobolev_norm(out.regular, alpha);
    out.report[name] = value;
    out.report[std::string(name) + "_ratio"] = z1p > 0.0 ? value / (std::pow(eps, alpha - 1.0) * z1p) : 0.0;
  }
  const double phi_l2 = lp_norm(out.rough, 2.0);
  const double phi_l4 = lp_norm(out.rough, 4.0);
  const double phi_energy = energy(out.rough, cubic);
  out.report["phi_l2"] = phi_l2;
  out.report["phi_l2_scaled"] = z1p > 0.0 ? phi_l2 * eps / z1p : 0.0;
  out.report["phi_l4"] = phi_l4;
  out.report["phi_l4_scaled"] = phi_l4 * std::pow(eps, params.theta);
  out.report["phi_energy"] = phi_energy;
  out.report["phi_energy_scaled"] = phi_energy * std::pow(eps, 4.0 * params.theta);
  return out;
}

}  // namespace nlszp
