#pragma once

#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "nlszp/grid.hpp"

namespace nlszp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Discrete L^p norm (sum |f|^p h^d)^{1/p}; p = kInf gives max |f|.
/// Throws Error("not a norm") for p < 1.
double lp_norm(const Field& f, double p);

/// ||F^{-1}(|xi|^s F f)||_{L^2}; the mean mode is excluded.
double hom_sobolev_norm(const Field& f, double s);

/// ||F^{-1}(|xi|^s F f)||_{L^r}.
double hom_sobolev_lr_norm(const Field& f, double s, double r);

/// ||F^{-1}((1+|xi|^2)^{s/2} F f)||_{L^r}; r = 2 gives the classical H^s norm.
double inhom_sobolev_norm(const Field& f, double s, double r = 2.0);

/// Dyadic indices whose blocks can meet the lattice:
/// j_min = ceil(log2(2 pi/L)) - 1, j_max = ceil(log2(pi n/L)) + 1.
struct DyadicRange {
  int j_min;
  int j_max;
};
DyadicRange dyadic_range(const Grid& grid);

/// Delta_j f with symbol dyadic_bump(2^{-j}|xi|). Throws Error("empty block")
/// outside dyadic_range.
Field littlewood_paley_block(const Field& f, int j);

/// Low-frequency projection S_0 with symbol smooth_cutoff(|xi|).
Field low_frequency_projection(const Field& f);

/// Homogeneous: (sum_j 2^{qjs} ||Delta_j f||_p^q)^{1/q} over the lattice range.
/// Inhomogeneous: ||S_0 f||_p + (sum_{j>=1} ...)^{1/q}. q = kInf uses the sup.
/// Block norms are reduced in increasing j, so results are bit-reproducible.
double besov_norm(const Field& f, double s, double q, double p, bool homogeneous);

/// ||f||_{L^p} + ||f||_{H^s-dot}.
double zhidkov_norm(const Field& f, double s, double p);

/// sup over alpha in [s, s + band] of zhidkov_norm(f, alpha, p), evaluated on a
/// uniform grid of `points` values of alpha.
double zhidkov_band_norm(const Field& f, double s, double band, double p, int points = 33);

namespace norm_kind {
struct Lp {
  double p;
};
struct HomSobolev {
  double s;
};
struct HomSobolevLr {
  double s, r;
};
struct InhomSobolev {
  double s, r;
};
struct HomBesov {
  double s, q, p;
};
struct InhomBesov {
  double s, q, p;
};
struct Zhidkov {
  double s, p;
};
struct ZhidkovBand {
  double s, band, p;
};
struct Energy {
  double sigma;
  int lambda;
};
struct Mass {};
}  // namespace norm_kind

using NormKind = std::variant<norm_kind::Lp, norm_kind::HomSobolev, norm_kind::HomSobolevLr, norm_kind::InhomSobolev,
                              norm_kind::HomBesov, norm_kind::InhomBesov, norm_kind::Zhidkov, norm_kind::ZhidkovBand,
                              norm_kind::Energy, norm_kind::Mass>;

/// Throws Error if a parameter is out of range (p, q in [1, inf], ...).
void validate(const NormKind& kind);
std::string name_of(const NormKind& kind);
double evaluate(const Field& f, const NormKind& kind);

}  // namespace nlszp
