#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "nlszp/data_family.hpp"
#include "nlszp/evolution.hpp"
#include "nlszp/multiplier.hpp"
#include "nlszp/norms.hpp"
#include "support.hpp"

using namespace nlszp;
using std::numbers::pi;

namespace {

Field gaussian(const Grid& g) { return synthesize(family::Gaussian{1.0, 1.0}, g); }

Field mode(const Grid& g, const WaveIndex& k, cplx amplitude) {
  Spectrum s(g);
  s.at(k) = amplitude;
  return to_field(s);
}

}  // namespace

TEST_CASE("Lebesgue norms") {
  const Grid g(1, 256, 32.0);
  CHECK(lp_norm(Field(g), 2.0) == 0.0);
  CHECK(lp_norm(Field(g), kInf) == 0.0);
  const Field c(g, std::vector<cplx>(g.size(), cplx(0.0, -3.0)));
  CHECK(lp_norm(c, 2.0) == doctest::Approx(3.0 * std::sqrt(32.0)).epsilon(1e-14));
  CHECK(lp_norm(c, 1.0) == doctest::Approx(3.0 * 32.0).epsilon(1e-14));
  CHECK(lp_norm(c, kInf) == doctest::Approx(3.0));
  CHECK_THROWS_WITH_AS(lp_norm(c, 0.5), "not a norm", Error);

  // int exp(-p x^2/2) dx = sqrt(2 pi / p)
  const Field f = gaussian(g);
  CHECK(std::abs(lp_norm(f, 2.0) - std::pow(pi, 0.25)) < 1e-6);
  for (double p : {1.0, 3.0, 4.25, 6.0}) {
    CHECK(std::abs(lp_norm(f, p) - std::pow(2 * pi / p, 0.5 / p)) < 1e-6);
  }
  CHECK(lp_norm(f, kInf) == doctest::Approx(1.0));
}

TEST_CASE("homogeneous Sobolev norms") {
  const Grid g(1, 64, 5.0);
  CHECK(hom_sobolev_norm(Field(g), 0.7) == 0.0);
  const cplx A(0.6, 0.8);
  const Field m = mode(g, {1, 0, 0}, A * 2.0);
  for (double s : {-1.0, 0.0, 0.5, 1.0, 2.5}) {
    const double expected = 2.0 * std::abs(A) * std::pow(2 * pi / 5.0, s) * std::sqrt(5.0);
    CHECK(hom_sobolev_norm(m, s) == doctest::Approx(expected).epsilon(1e-13));
  }

  // Continuum oracles on a large box: (1/2pi) int |xi|^{2s} 2pi e^{-xi^2} dxi.
  const Grid big(1, 2048, 256.0);
  const Field f = gaussian(big);
  CHECK(std::abs(hom_sobolev_norm(f, 0.5) - 1.0) < 1e-4);
  CHECK(std::abs(hom_sobolev_norm(f, 1.0) - std::sqrt(std::sqrt(pi) / 2.0)) < 1e-8);
  CHECK(std::abs(hom_sobolev_norm(f, 2.0) - std::sqrt(3.0 * std::sqrt(pi) / 4.0)) < 1e-8);

  // Ẇ^{s,2} through the physical-space path agrees with the Parseval path.
  std::mt19937_64 rng(1);
  const Field r = testing::random_field(Grid(2, 16, 3.0), rng);
  CHECK(hom_sobolev_lr_norm(r, 0.8, 2.0) == doctest::Approx(hom_sobolev_norm(r, 0.8)).epsilon(1e-13));
  CHECK(lp_norm(apply_multiplier(homogeneous_power(0.8), r), 2.0) ==
        doctest::Approx(hom_sobolev_norm(r, 0.8)).epsilon(1e-12));
  CHECK(inhom_sobolev_norm(r, 0.8, 2.0) ==
        doctest::Approx(lp_norm(apply_multiplier(bessel_potential(0.8), r), 2.0)).epsilon(1e-12));
}

TEST_CASE("H^0 equals L^2 on mean-free fields") {
  std::mt19937_64 rng(2);
  for (const Grid& g : {Grid(1, 128, 9.0), Grid(3, 16, 4.0)}) {
    Spectrum s = to_spectrum(testing::random_field(g, rng));
    s.at({0, 0, 0}) = 0.0;
    const Field f = to_field(s);
    CHECK(std::abs(hom_sobolev_norm(f, 0.0) - lp_norm(f, 2.0)) / lp_norm(f, 2.0) < 1e-12);
  }
}

TEST_CASE("norm axioms on random fields") {
  std::mt19937_64 rng(4);
  const Grid g(2, 16, 6.0);
  const std::vector<NormKind> kinds = {
      norm_kind::Lp{1.0},           norm_kind::Lp{4.25},          norm_kind::Lp{kInf},
      norm_kind::HomSobolev{1.0},   norm_kind::HomSobolevLr{0.5, 3.0}, norm_kind::InhomSobolev{1.5, 2.0},
      norm_kind::HomBesov{0.5, 2.0, 2.0}, norm_kind::InhomBesov{1.0, kInf, 4.0}, norm_kind::Zhidkov{0.9, 5.8},
      norm_kind::ZhidkovBand{1.0, 2.0, 4.0}};
  for (int trial = 0; trial < 5; ++trial) {
    const Field f = testing::random_field(g, rng);
    const Field h = testing::random_field(g, rng);
    const cplx a(-1.7, 0.4);
    for (const auto& k : kinds) {
      CAPTURE(name_of(k));
      const double nf = evaluate(f, k), nh = evaluate(h, k);
      CHECK(evaluate(f + h, k) <= (nf + nh) * (1.0 + 1e-10));
      CHECK(evaluate(a * f, k) == doctest::Approx(std::abs(a) * nf).epsilon(1e-10));
    }
  }
}

TEST_CASE("Littlewood-Paley blocks") {
  std::mt19937_64 rng(6);
  for (const Grid& g : {Grid(1, 128, 20.0), Grid(3, 16, 5.0)}) {
    const DyadicRange range = dyadic_range(g);
    CHECK(range.j_min == static_cast<int>(std::ceil(std::log2(2 * pi / g.box_length()))) - 1);
    CHECK(range.j_max == static_cast<int>(std::ceil(std::log2(pi * g.n() / g.box_length()))) + 1);
    CHECK_THROWS_WITH_AS(littlewood_paley_block(Field(g), range.j_max + 1), "empty block", Error);
    CHECK_THROWS_WITH_AS(littlewood_paley_block(Field(g), range.j_min - 1), "empty block", Error);

    Spectrum s = to_spectrum(testing::random_field(g, rng));
    s.at({0, 0, 0}) = 0.0;
    const Field f = to_field(s);
    std::vector<Field> blocks;
    Field sum(g);
    for (int j = range.j_min; j <= range.j_max; ++j) {
      blocks.push_back(littlewood_paley_block(f, j));
      sum += blocks.back();
    }
    CHECK(testing::rel_l2(sum, f) < 1e-10);
    for (std::size_t a = 0; a < blocks.size(); ++a) {
      for (std::size_t b = a + 2; b < blocks.size(); ++b) {
        cplx inner = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) inner += std::conj(blocks[a][i]) * blocks[b][i];
        const double scale = testing::quad_l2(f) * testing::quad_l2(f) / g.cell_volume();
        CHECK(std::abs(inner) / scale < 1e-12);
      }
    }
    // Inhomogeneous partition: S_0 f + sum_{j >= 1} Delta_j f = f (mean included).
    const Field full = testing::random_field(g, rng);
    Field inh = low_frequency_projection(full);
    for (int j = 1; j <= range.j_max; ++j) inh += littlewood_paley_block(full, j);
    CHECK(testing::rel_l2(inh, full) < 1e-10);
  }

  // Pure mode with |xi| = 2^j sits only in blocks j-1, j, j+1.
  const Grid g(1, 256, 2 * pi);  // xi = k
  const Field m = mode(g, {16, 0, 0}, 1.0);
  const auto range = dyadic_range(g);
  for (int j = range.j_min; j <= range.j_max; ++j) {
    const double n2 = lp_norm(littlewood_paley_block(m, j), 2.0);
    if (std::abs(j - 4) >= 2) CHECK(n2 < 1e-14 * lp_norm(m, 2.0));  // roundoff only
  }
  CHECK(lp_norm(littlewood_paley_block(m, 4), 2.0) == doctest::Approx(lp_norm(m, 2.0)).epsilon(1e-14));
}

TEST_CASE("Besov norms") {
  const Grid g(1, 256, 2 * pi);
  CHECK(besov_norm(Field(g), 1.0, 2.0, 2.0, true) == 0.0);
  CHECK(besov_norm(Field(g), 1.0, 2.0, 2.0, false) == 0.0);
  CHECK_THROWS_AS(besov_norm(Field(g), 1.0, 0.5, 2.0, true), Error);

  // Single block with value 1 at |xi| = 2^j0.
  const Field m = mode(g, {8, 0, 0}, cplx(0.0, 2.0));
  for (double s : {0.5, 1.0, 2.0}) {
    for (double p : {2.0, 4.0, kInf}) {
      const double expected = std::pow(2.0, 3 * s) * lp_norm(m, p);
      CHECK(besov_norm(m, s, 2.0, p, true) == doctest::Approx(expected).epsilon(1e-12));
      CHECK(besov_norm(m, s, kInf, p, true) == doctest::Approx(expected).epsilon(1e-12));
      CHECK(besov_norm(m, s, 2.0, p, false) == doctest::Approx(expected).epsilon(1e-12));
    }
  }

  // B^s_{2,2} ~ H^s: sum_j phi_j^2 lies in [1/2, 1] and 2^{js} / |xi|^s lies in
  // [2^{-|s|}, 2^{|s|}] on each block support.
  std::mt19937_64 rng(8);
  const Grid g3(3, 16, 8.0);
  double lo = 1e9, hi = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Field f = testing::band_limited_field(g3, 5, rng);
    for (double s : {0.5, 1.0}) {
      const double ratio = besov_norm(f, s, 2.0, 2.0, true) / hom_sobolev_norm(f, s);
      CHECK(ratio >= std::pow(2.0, -s) / std::sqrt(2.0) - 1e-12);
      CHECK(ratio <= std::pow(2.0, s) + 1e-12);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  }
  MESSAGE("measured B^s_{2,2}/H^s ratio range [" << lo << ", " << hi << "]");
  CHECK(hi / lo <= 4.0);
}

TEST_CASE("Zhidkov norms") {
  std::mt19937_64 rng(10);
  const Grid g(1, 128, 16.0);
  CHECK(zhidkov_norm(Field(g), 1.0, 4.0) == 0.0);
  const Field f = testing::band_limited_field(g, 30, rng);
  CHECK(zhidkov_norm(f, 1.0, 4.0) == doctest::Approx(lp_norm(f, 4.0) + hom_sobolev_norm(f, 1.0)));
  const double band = zhidkov_band_norm(f, 1.0, 2.0, 4.0);
  CHECK(band >= zhidkov_norm(f, 1.0, 4.0));
  CHECK(band >= zhidkov_norm(f, 3.0, 4.0) * (1.0 - 1e-14));
  CHECK(band == doctest::Approx(std::max(zhidkov_norm(f, 1.0, 4.0), zhidkov_norm(f, 3.0, 4.0))).epsilon(0.2));
  CHECK(zhidkov_band_norm(f, 1.0, 0.0, 4.0) == doctest::Approx(zhidkov_norm(f, 1.0, 4.0)));
  CHECK_THROWS_AS(zhidkov_band_norm(f, 1.0, -1.0, 4.0), Error);
  CHECK_THROWS_AS(zhidkov_band_norm(f, 1.0, 1.0, 4.0, 1), Error);

  // Embedding constant Z^s_p <= C ||.||_{H^s} measured on Gaussians of several widths.
  const Grid big(1, 1024, 128.0);
  std::vector<double> ratios;
  for (double w : {1.0, 1.5, 2.0, 3.0}) {
    const Field u = synthesize(family::Gaussian{w, 1.0}, big);
    ratios.push_back(zhidkov_norm(u, 0.25, 4.0) / (lp_norm(u, 2.0) + hom_sobolev_norm(u, 0.25)));
  }
  for (double r : ratios) CHECK(r < 2.0);
  MESSAGE("Z^{1/4}_4 / H^{1/4} ratios on Gaussians: " << ratios[0] << " " << ratios[1] << " " << ratios[2] << " "
                                                      << ratios[3]);
}

TEST_CASE("embedding constant is stable across random band-limited fields") {
  std::mt19937_64 rng(12);
  const Grid g(1, 256, 32.0);
  std::vector<double> r;
  for (int trial = 0; trial < 50; ++trial) {
    const Field f = testing::band_limited_field(g, 20, rng);
    r.push_back(zhidkov_norm(f, 0.25, 4.0) / inhom_sobolev_norm(f, 0.25));
  }
  const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
  const double mid = 0.5 * (*lo + *hi);
  CHECK((*hi - *lo) / mid <= 0.2);
}

TEST_CASE("norm kinds") {
  const Grid g(1, 64, 8.0);
  const Field f = gaussian(g);
  CHECK_THROWS_AS(validate(norm_kind::Lp{0.5}), Error);
  CHECK_THROWS_AS(validate(norm_kind::HomBesov{1.0, 0.2, 2.0}), Error);
  CHECK_THROWS_AS(validate(norm_kind::Energy{2.0, 0}), Error);
  CHECK_THROWS_AS(validate(norm_kind::ZhidkovBand{1.0, -1.0, 4.0}), Error);
  CHECK_THROWS_AS(evaluate(f, norm_kind::HomSobolev{NAN}), Error);
  CHECK(name_of(norm_kind::Mass{}) == "mass");
  CHECK(evaluate(f, norm_kind::Mass{}) == doctest::Approx(mass(f)));
  CHECK(evaluate(f, norm_kind::Energy{2.0, -1}) == doctest::Approx(energy(f, NlsParams{2.0, -1, 1})));
}
