#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlszp/rational.hpp"

namespace nlszp {

/// Strichartz pair (q, r) in dimension dim.
struct AdmissiblePair {
  ExtRational q;
  ExtRational r;
  int dim = 3;
};

/// Exact check of 2/q = dim(1/2 - 1/r) together with the range of r:
/// 2 <= r <= 2d/(d-2) for d >= 3, r <= inf for d = 1, 2, and r != inf for d = 2.
bool check_admissible(const ExtRational& q, const ExtRational& r, int dim);
inline bool check_admissible(const AdmissiblePair& pair) { return check_admissible(pair.q, pair.r, pair.dim); }

/// The time exponent q making (q, r) satisfy the scaling relation; nullopt when
/// r < 2 (the relation would need q < 0).
std::optional<ExtRational> admissible_time_exponent(const ExtRational& r, int dim);

/// Result of checking the parameter window 0 < s < min(d/2, 1), 2 < p < 2*.
struct WindowCheck {
  bool in_window = false;
  ExtRational two_star;  ///< 2d/(d-2s); infinite when d <= 2s
  std::string reason;    ///< empty when in_window
  /// Cubic globalization setting: d = 3 and 4 < p < 6 (independent of s).
  bool truncation_setting = false;
};

WindowCheck check_window(const ExtRational& s, const ExtRational& p, int dim);

enum class Regime { SmallP, LargeP };
const char* to_string(Regime r);

struct NamedPair {
  std::string name;
  ExtRational q;
  ExtRational r;
};

/// Exponent bookkeeping for the local theory.
///
/// SmallP (p <= 2 sigma + 2): (q1, r1) is the solution pair and (q2, r2) the
/// dual-estimate pair (gamma, rho); r3 is unused.
/// LargeP (p > 2 sigma + 2): r1 = 2p/(p - 2 sigma), r2 is the slack-reduced
/// endpoint feeding rho = d r2/(d - s r2), r3 = 2p/(p - sigma), and
/// theta_interp solves 1/(p(sigma+1)) = theta/p + (1-theta)/rho.
struct LwpExponents {
  Regime regime = Regime::SmallP;
  std::string branch;  ///< which sub-case picked the exponents
  ExtRational r1, q1;
  std::optional<ExtRational> r2, q2, r3, q3;
  ExtRational a;  ///< Lebesgue exponent carrying |u|^sigma
  std::optional<ExtRational> theta_interp;
  std::optional<ExtRational> rho;
  std::optional<ExtRational> rho_star;

  struct Conditions {
    bool in_window = false;
    bool pairs_admissible = false;
    /// LargeP: p(sigma+1) < rho.
    std::optional<bool> integrability;
    /// LargeP: 1/sigma + sp/(d sigma) - d/4 > (p/sigma - d/2)/r2.
    std::optional<bool> time_integrability;
    /// LargeP: 2p > d sigma.
    std::optional<bool> two_p_exceeds_d_sigma;
    /// LargeP: theta_interp in (0, 1).
    std::optional<bool> theta_in_unit_interval;
    /// SmallP second branch: p < a < rho*.
    std::optional<bool> a_between_p_and_rho_star;
    /// SmallP first branch: the dual exponent rho' = p/(sigma+1) is > 1.
    std::optional<bool> dual_exponent_valid;
  } conditions;

  bool conditions_ok() const;
  std::vector<NamedPair> pairs() const;
};

/// Fills the exponents for the regime selected by p versus 2 sigma + 2.
/// `slack` realizes the "slightly below" decorations on r2 as
/// r2 = X - slack (X - 2) for the endpoint X.
/// Throws when p > 2 sigma + 2 but sigma > 2s/(d - 2s).
LwpExponents derive_lwp_exponents(const ExtRational& s, const ExtRational& p, const ExtRational& sigma, int dim,
                                  const ExtRational& slack = ExtRational(1, 20));

/// Exact test of beta > 7 theta with theta = (p-4)/(2p-4), beta = (1+4 theta)/2.
bool globalizable_exponents(const ExtRational& p);

}  // namespace nlszp
