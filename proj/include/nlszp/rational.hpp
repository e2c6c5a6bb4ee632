#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <string>

namespace nlszp {

using BigRational = boost::multiprecision::cpp_rational;

/// Exact rational number extended by +infinity, for Lebesgue exponents.
/// Arithmetic involving infinity is only defined where the exponent calculus
/// needs it (reciprocal, comparison); anything else throws.
class ExtRational {
 public:
  ExtRational() = default;
  ExtRational(long long v) : value_(v) {}  // NOLINT: implicit on purpose
  ExtRational(BigRational v) : value_(std::move(v)) {}  // NOLINT
  ExtRational(long long num, long long den);

  static ExtRational infinity();
  /// Parses "inf", "8/3", "-2", "5.8", "1e-3" exactly.
  static ExtRational parse(const std::string& text);
  /// Exact value of a binary64 (every finite double is a dyadic rational).
  static ExtRational from_double(double v);

  bool is_infinite() const { return infinite_; }
  const BigRational& value() const;
  double to_double() const;
  std::string to_string() const;

  /// 1/x with 1/inf = 0 and 1/0 = inf.
  ExtRational reciprocal() const;

  friend bool operator==(const ExtRational& a, const ExtRational& b);
  friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b);

  friend ExtRational operator+(const ExtRational& a, const ExtRational& b);
  friend ExtRational operator-(const ExtRational& a, const ExtRational& b);
  friend ExtRational operator*(const ExtRational& a, const ExtRational& b);
  friend ExtRational operator/(const ExtRational& a, const ExtRational& b);
  ExtRational operator-() const;

 private:
  BigRational value_{0};
  bool infinite_ = false;
};

}  // namespace nlszp
