#include "nlszp/data_family.hpp"

#include <cmath>
#include <numbers>

#include "nlszp/snapshot.hpp"

namespace nlszp {

namespace {

using std::numbers::pi;

void positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw Error(std::string(what) + " must be positive");
}

}  // namespace

std::string name_of(const DataFamily& f) {
  static const char* names[] = {"gaussian", "pure_mode", "power_tail", "custom"};
  return names[f.index()];
}

void validate(const DataFamily& f, const Grid& grid) {
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, family::Gaussian>) {
          positive(k.width, "gaussian width");
          if (!std::isfinite(k.amplitude)) throw Error("amplitude must be finite");
        } else if constexpr (std::is_same_v<K, family::PureMode>) {
          if (!std::isfinite(k.amplitude)) throw Error("amplitude must be finite");
          for (int a = 0; a < 3; ++a) {
            if (a >= grid.dim() && k.k[a] != 0) throw Error("mode index has more components than the grid");
            if (a < grid.dim() && std::abs(k.k[a]) >= grid.n() / 2) throw Error("mode index outside the lattice");
          }
        } else if constexpr (std::is_same_v<K, family::PowerTail>) {
          positive(k.core_width, "core width");
          positive(k.p, "p");
          if (!std::isfinite(k.amplitude)) throw Error("amplitude must be finite");
          const double d = grid.dim();
          if (!(k.gamma > d / k.p && k.gamma <= d / 2.0)) {
            throw Error("power tail needs d/p < gamma <= d/2 (gamma = " + std::to_string(k.gamma) + ")");
          }
        } else {
          if (k.path.empty()) throw Error("custom data needs a path");
        }
      },
      f);
}

Field synthesize(const DataFamily& f, const Grid& grid) {
  validate(f, grid);
  if (const auto* c = std::get_if<family::Custom>(&f)) {
    Field u = load_snapshot(c->path);
    if (!(u.grid() == grid)) throw Error("snapshot " + c->path + " is on a different grid");
    return u;
  }
  Field u(grid);
  const double L = grid.box_length();
  const double center = 0.5 * L;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto x = grid.position(i);
    std::visit(
        [&](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, family::Gaussian>) {
            double r2 = 0.0;
            for (int a = 0; a < grid.dim(); ++a) r2 += (x[a] - center) * (x[a] - center);
            u[i] = k.amplitude * std::exp(-r2 / (2.0 * k.width * k.width));
          } else if constexpr (std::is_same_v<K, family::PureMode>) {
            double phase = 0.0;
            for (int a = 0; a < grid.dim(); ++a) phase += 2.0 * pi * k.k[a] * x[a] / L;
            u[i] = k.amplitude * std::polar(1.0, phase);
          } else if constexpr (std::is_same_v<K, family::PowerTail>) {
            double r2 = 0.0;
            for (int a = 0; a < grid.dim(); ++a) {
              const double chord = (L / pi) * std::sin(pi * (x[a] - center) / L);
              r2 += chord * chord;
            }
            u[i] = k.amplitude * std::pow(1.0 + r2 / (k.core_width * k.core_width), -0.5 * k.gamma);
          }
        },
        f);
  }
  return u;
}

}  // namespace nlszp
