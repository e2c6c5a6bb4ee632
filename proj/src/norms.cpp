#include "nlszp/norms.hpp"

#include <cmath>

#include "nlszp/evolution.hpp"
#include "nlszp/fft.hpp"
#include "nlszp/multiplier.hpp"

namespace nlszp {

namespace {

std::vector<double> frequency_magnitudes(const Grid& grid) {
  auto table = squared_frequencies(grid);
  for (auto& v : table) v = std::sqrt(v);
  return table;
}

double lp_of_values(const std::vector<cplx>& values, double cell_volume, double p) {
  if (!(p >= 1.0)) throw Error("not a norm");
  double peak = 0.0;
  for (const auto& v : values) peak = std::max(peak, std::abs(v));
  if (std::isinf(p)) return peak;
  if (peak == 0.0) return 0.0;
  long double acc = 0.0L;
  for (const auto& v : values) acc += std::pow(std::abs(v) / peak, p);
  return peak * std::pow(static_cast<double>(acc) * cell_volume, 1.0 / p);
}

// L^2 norm of F^{-1}(weight(|xi|) c) computed through Parseval.
template <typename Weight>
double weighted_l2(const Spectrum& spec, const std::vector<double>& magnitudes, Weight weight) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double w = weight(magnitudes[i], i == 0);
    acc += w * w * std::norm(spec.coeffs()[i]);
  }
  return std::sqrt(static_cast<double>(acc) * spec.grid().volume());
}

Field filtered(const Spectrum& spec, const std::vector<double>& magnitudes, auto symbol) {
  Spectrum out(spec.grid(), spec.coeffs());
  for (std::size_t i = 0; i < out.size(); ++i) out.coeffs()[i] *= symbol(magnitudes[i]);
  return to_field(out);
}

double block_symbol(double magnitude, int j) { return dyadic_bump(std::ldexp(magnitude, -j)); }

}  // namespace

double lp_norm(const Field& f, double p) { return lp_of_values(f.values(), f.grid().cell_volume(), p); }

double hom_sobolev_norm(const Field& f, double s) {
  const Spectrum spec = to_spectrum(f);
  const auto mags = frequency_magnitudes(f.grid());
  return weighted_l2(spec, mags, [s](double r, bool zero) { return zero ? 0.0 : std::pow(r, s); });
}

double hom_sobolev_lr_norm(const Field& f, double s, double r) {
  if (r == 2.0) return hom_sobolev_norm(f, s);
  return lp_norm(apply_multiplier(homogeneous_power(s), f), r);
}

double inhom_sobolev_norm(const Field& f, double s, double r) {
  if (r == 2.0) {
    const Spectrum spec = to_spectrum(f);
    const auto mags = frequency_magnitudes(f.grid());
    return weighted_l2(spec, mags, [s](double m, bool) { return std::pow(1.0 + m * m, 0.5 * s); });
  }
  return lp_norm(apply_multiplier(bessel_potential(s), f), r);
}

DyadicRange dyadic_range(const Grid& grid) {
  return {static_cast<int>(std::ceil(std::log2(grid.fundamental()))) - 1,
          static_cast<int>(std::ceil(std::log2(grid.nyquist()))) + 1};
}

Field littlewood_paley_block(const Field& f, int j) {
  const auto range = dyadic_range(f.grid());
  if (j < range.j_min || j > range.j_max) throw Error("empty block");
  return filtered(to_spectrum(f), frequency_magnitudes(f.grid()), [j](double m) { return block_symbol(m, j); });
}

Field low_frequency_projection(const Field& f) {
  return filtered(to_spectrum(f), frequency_magnitudes(f.grid()), [](double m) { return smooth_cutoff(m); });
}

double besov_norm(const Field& f, double s, double q, double p, bool homogeneous) {
  if (!(q >= 1.0)) throw Error("not a norm");
  if (!(p >= 1.0)) throw Error("not a norm");
  const Spectrum spec = to_spectrum(f);
  const auto mags = frequency_magnitudes(f.grid());
  const auto range = dyadic_range(f.grid());
  const double cell = f.grid().cell_volume();
  const int first = homogeneous ? range.j_min : std::max(1, range.j_min);

  long double acc = 0.0L;
  double sup = 0.0;
  for (int j = first; j <= range.j_max; ++j) {
    const Field block = filtered(spec, mags, [j](double m) { return block_symbol(m, j); });
    const double term = std::pow(2.0, j * s) * lp_of_values(block.values(), cell, p);
    if (std::isinf(q)) {
      sup = std::max(sup, term);
    } else {
      acc += std::pow(term, q);
    }
  }
  double dyadic = std::isinf(q) ? sup : std::pow(static_cast<double>(acc), 1.0 / q);
  if (homogeneous) return dyadic;
  const Field low = filtered(spec, mags, [](double m) { return smooth_cutoff(m); });
  return lp_of_values(low.values(), cell, p) + dyadic;
}

double zhidkov_norm(const Field& f, double s, double p) { return lp_norm(f, p) + hom_sobolev_norm(f, s); }

double zhidkov_band_norm(const Field& f, double s, double band, double p, int points) {
  if (points < 2) throw Error("band evaluation needs at least two points");
  if (!(band >= 0.0)) throw Error("band width must be non-negative");
  const Spectrum spec = to_spectrum(f);
  const auto mags = frequency_magnitudes(f.grid());
  double best = 0.0;
  for (int i = 0; i < points; ++i) {
    const double alpha = s + band * i / (points - 1);
    best = std::max(best, weighted_l2(spec, mags, [alpha](double r, bool zero) {
                      return zero ? 0.0 : std::pow(r, alpha);
                    }));
  }
  return lp_norm(f, p) + best;
}

void validate(const NormKind& kind) {
  const auto exponent = [](double v, const char* what) {
    if (!(v >= 1.0)) throw Error(std::string(what) + " must lie in [1, inf]");
  };
  const auto real = [](double v, const char* what) {
    if (!std::isfinite(v)) throw Error(std::string(what) + " must be finite");
  };
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, norm_kind::Lp>) {
          exponent(k.p, "p");
        } else if constexpr (std::is_same_v<K, norm_kind::HomSobolev>) {
          real(k.s, "s");
        } else if constexpr (std::is_same_v<K, norm_kind::HomSobolevLr> ||
                             std::is_same_v<K, norm_kind::InhomSobolev>) {
          real(k.s, "s");
          exponent(k.r, "r");
        } else if constexpr (std::is_same_v<K, norm_kind::HomBesov> || std::is_same_v<K, norm_kind::InhomBesov>) {
          real(k.s, "s");
          exponent(k.q, "q");
          exponent(k.p, "p");
        } else if constexpr (std::is_same_v<K, norm_kind::Zhidkov>) {
          real(k.s, "s");
          exponent(k.p, "p");
        } else if constexpr (std::is_same_v<K, norm_kind::ZhidkovBand>) {
          real(k.s, "s");
          exponent(k.p, "p");
          if (!(k.band >= 0.0)) throw Error("band width must be non-negative");
        } else if constexpr (std::is_same_v<K, norm_kind::Energy>) {
          if (!(k.sigma > 0.0)) throw Error("sigma must be positive");
          if (k.lambda != 1 && k.lambda != -1) throw Error("lambda must be +1 or -1");
        }
      },
      kind);
}

std::string name_of(const NormKind& kind) {
  static const char* names[] = {"lp",     "hs",          "hs_lr",         "inhom_sobolev", "besov_hom",
                                "besov_inhom", "zhidkov", "zhidkov_band", "energy",        "mass"};
  return names[kind.index()];
}

double evaluate(const Field& f, const NormKind& kind) {
  validate(kind);
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, norm_kind::Lp>) return lp_norm(f, k.p);
        if constexpr (std::is_same_v<K, norm_kind::HomSobolev>) return hom_sobolev_norm(f, k.s);
        if constexpr (std::is_same_v<K, norm_kind::HomSobolevLr>) return hom_sobolev_lr_norm(f, k.s, k.r);
        if constexpr (std::is_same_v<K, norm_kind::InhomSobolev>) return inhom_sobolev_norm(f, k.s, k.r);
        if constexpr (std::is_same_v<K, norm_kind::HomBesov>) return besov_norm(f, k.s, k.q, k.p, true);
        if constexpr (std::is_same_v<K, norm_kind::InhomBesov>) return besov_norm(f, k.s, k.q, k.p, false);
        if constexpr (std::is_same_v<K, norm_kind::Zhidkov>) return zhidkov_norm(f, k.s, k.p);
        if constexpr (std::is_same_v<K, norm_kind::ZhidkovBand>) return zhidkov_band_norm(f, k.s, k.band, k.p);
        if constexpr (std::is_same_v<K, norm_kind::Energy>) {
          return energy(f, NlsParams{k.sigma, k.lambda, f.grid().dim()});
        }
        if constexpr (std::is_same_v<K, norm_kind::Mass>) return mass(f);
      },
      kind);
}

}  // namespace nlszp
