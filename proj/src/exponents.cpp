#include "nlszp/exponents.hpp"

#include "nlszp/grid.hpp"

namespace nlszp {

namespace {

const ExtRational kHalf(1, 2);

}  // namespace

bool check_admissible(const ExtRational& q, const ExtRational& r, int dim) {
  if (dim < 1) return false;
  if (q <= ExtRational(0) || r < ExtRational(2)) return false;
  if (dim >= 3) {
    if (r.is_infinite() || r > ExtRational(2 * dim, dim - 2)) return false;
  } else if (dim == 2 && r.is_infinite()) {
    return false;
  }
  const ExtRational lhs = ExtRational(2) * q.reciprocal();
  const ExtRational rhs = ExtRational(dim) * (kHalf - r.reciprocal());
  return lhs == rhs;
}

std::optional<ExtRational> admissible_time_exponent(const ExtRational& r, int dim) {
  if (r < ExtRational(2)) return std::nullopt;
  const ExtRational rate = ExtRational(dim) * (kHalf - r.reciprocal());
  if (rate == ExtRational(0)) return ExtRational::infinity();
  return ExtRational(2) / rate;
}

WindowCheck check_window(const ExtRational& s, const ExtRational& p, int dim) {
  WindowCheck out;
  const ExtRational d(dim);
  const ExtRational gap = d - ExtRational(2) * s;
  out.two_star = gap > ExtRational(0) ? ExtRational(2) * d / gap : ExtRational::infinity();
  out.truncation_setting = dim == 3 && p > ExtRational(4) && p < ExtRational(6);

  if (!(s > ExtRational(0))) {
    out.reason = "s must be positive";
  } else if (!(s < d * kHalf)) {
    out.reason = "s must be below d/2";
  } else if (!(s < ExtRational(1))) {
    out.reason = "s must be below 1";
  } else if (!(p > ExtRational(2))) {
    out.reason = "p must exceed 2";
  } else if (!(p < out.two_star)) {
    out.reason = "p must be below 2* = 2d/(d-2s) = " + out.two_star.to_string();
  }
  out.in_window = out.reason.empty();
  return out;
}

const char* to_string(Regime r) { return r == Regime::SmallP ? "SmallP" : "LargeP"; }

bool LwpExponents::conditions_ok() const {
  const auto ok = [](const std::optional<bool>& c) { return !c.has_value() || *c; };
  return conditions.pairs_admissible && ok(conditions.integrability) && ok(conditions.time_integrability) &&
         ok(conditions.two_p_exceeds_d_sigma) && ok(conditions.theta_in_unit_interval) &&
         ok(conditions.a_between_p_and_rho_star) && ok(conditions.dual_exponent_valid);
}

std::vector<NamedPair> LwpExponents::pairs() const {
  std::vector<NamedPair> out{{"(q1,r1)", q1, r1}};
  if (r2 && q2) out.push_back({"(q2,r2)", *q2, *r2});
  if (r3 && q3) out.push_back({"(q3,r3)", *q3, *r3});
  return out;
}

LwpExponents derive_lwp_exponents(const ExtRational& s, const ExtRational& p, const ExtRational& sigma, int dim,
                                  const ExtRational& slack) {
  if (dim < 1 || dim > 3) throw Error("dimension must be 1, 2 or 3");
  if (!(sigma > ExtRational(0))) throw Error("sigma must be positive");
  if (!(p > ExtRational(2)) || p.is_infinite()) throw Error("p must be finite and exceed 2");
  if (!(slack > ExtRational(0) && slack < ExtRational(1))) throw Error("slack must lie in (0, 1)");

  const ExtRational d(dim);
  const ExtRational one(1), two(2);
  LwpExponents out;
  out.conditions.in_window = check_window(s, p, dim).in_window;

  const auto time_exponent = [&](const ExtRational& r) -> ExtRational {
    auto q = admissible_time_exponent(r, dim);
    if (!q) throw Error("spatial exponent " + r.to_string() + " is below 2");
    return *q;
  };

  if (p <= two * sigma + two) {
    out.regime = Regime::SmallP;
    const bool first_branch = dim <= 2 || p >= two * d * (sigma + one) / (d + two);
    if (first_branch) {
      out.branch = "r = p";
      out.r1 = p;
      out.q1 = time_exponent(out.r1);
      const ExtRational rho_dual = p / (sigma + one);
      out.conditions.dual_exponent_valid = rho_dual > one;
      out.a = sigma * rho_dual * p / (p - rho_dual);
      if (*out.conditions.dual_exponent_valid) {
        out.rho = rho_dual / (rho_dual - one);
        out.r2 = out.rho;
        out.q2 = admissible_time_exponent(*out.r2, dim);
        if (!out.q2) out.r2.reset();
      }
    } else {
      out.branch = "r = rho = d(sigma+2)/(d+s sigma)";
      out.r1 = d * (sigma + two) / (d + s * sigma);
      out.q1 = time_exponent(out.r1);
      out.rho = out.r1;
      out.r2 = out.r1;
      out.q2 = out.q1;
      out.a = d * (sigma + two) / (d - two * s);
      const ExtRational room = d - s * out.r1;
      out.rho_star = room > ExtRational(0) ? d * out.r1 / room : ExtRational::infinity();
      out.conditions.a_between_p_and_rho_star = p < out.a && out.a < *out.rho_star;
    }
  } else {
    out.regime = Regime::LargeP;
    if (!(s > ExtRational(0))) throw Error("s must be positive");
    const ExtRational gap = d - two * s;
    if (gap > ExtRational(0) && sigma > two * s / gap) {
      throw Error("p > 2 sigma + 2 requires sigma <= p/2 - 1 <= 2s/(d-2s); sigma = " + sigma.to_string() +
                  " exceeds 2s/(d-2s) = " + (two * s / gap).to_string());
    }
    out.r1 = two * p / (p - two * sigma);
    out.q1 = time_exponent(out.r1);
    out.a = p;

    ExtRational endpoint = d / s;
    out.branch = "r2 = (d/s)-";
    if (dim >= 3 && endpoint > two * d / (d - two)) {
      endpoint = two * d / (d - two);
      out.branch = "r2 = (2d/(d-2))-";
    }
    const ExtRational r2 = endpoint - slack * (endpoint - two);
    out.r2 = r2;
    out.q2 = time_exponent(r2);
    const ExtRational room = d - s * r2;
    out.rho = room > ExtRational(0) ? d * r2 / room : ExtRational::infinity();

    const ExtRational inv_target = (p * (sigma + one)).reciprocal();
    const ExtRational inv_rho = out.rho->reciprocal();
    out.theta_interp = (inv_target - inv_rho) / (p.reciprocal() - inv_rho);

    out.conditions.integrability = p * (sigma + one) < *out.rho;
    out.conditions.time_integrability =
        one / sigma + s * p / (d * sigma) - d / ExtRational(4) > r2.reciprocal() * (p / sigma - d / two);
    out.conditions.two_p_exceeds_d_sigma = two * p > d * sigma;
    out.conditions.theta_in_unit_interval = *out.theta_interp > ExtRational(0) && *out.theta_interp < one;

    out.r3 = two * p / (p - sigma);
    out.q3 = time_exponent(*out.r3);
  }

  out.conditions.pairs_admissible = true;
  for (const auto& pair : out.pairs()) {
    if (!check_admissible(pair.q, pair.r, dim)) out.conditions.pairs_admissible = false;
  }
  return out;
}

bool globalizable_exponents(const ExtRational& p) {
  const ExtRational theta = (p - ExtRational(4)) / (ExtRational(2) * p - ExtRational(4));
  const ExtRational beta = (ExtRational(1) + ExtRational(4) * theta) / ExtRational(2);
  return beta > ExtRational(7) * theta;
}

}  // namespace nlszp
