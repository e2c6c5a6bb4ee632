#include "nlszp/rational.hpp"

#include <cctype>
#include <cmath>

#include "nlszp/grid.hpp"

namespace nlszp {

namespace {

BigRational pow10(long exponent) {
  BigRational r = 1;
  for (long i = 0; i < std::labs(exponent); ++i) r *= 10;
  return exponent >= 0 ? r : BigRational(1) / r;
}

[[noreturn]] void bad(const std::string& text) { throw Error("cannot parse rational '" + text + "'"); }

BigRational parse_decimal(const std::string& text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
  boost::multiprecision::cpp_int digits = 0;
  long scale = 0;
  bool any = false, dot = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      any = true;
      if (dot) --scale;
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!any) bad(text);
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') bad(text);
    const std::string exp = text.substr(i + 1);
    if (exp.empty()) bad(text);
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(exp, &used);
    } catch (const std::exception&) {
      bad(text);
    }
    if (used != exp.size()) bad(text);
    scale += e;
  }
  BigRational r = BigRational(digits) * pow10(scale);
  return negative ? BigRational(-r) : r;
}

}  // namespace

ExtRational::ExtRational(long long num, long long den) {
  if (den == 0) throw Error("zero denominator");
  value_ = BigRational(num, den);
}

ExtRational ExtRational::infinity() {
  ExtRational r;
  r.infinite_ = true;
  return r;
}

ExtRational ExtRational::parse(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  if (text == "inf" || text == "+inf" || text == "infinity" || text == "oo") return infinity();
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    const BigRational num = parse_decimal(text.substr(0, slash));
    const BigRational den = parse_decimal(text.substr(slash + 1));
    if (den == 0) throw Error("zero denominator in '" + raw + "'");
    return ExtRational(num / den);
  }
  return ExtRational(parse_decimal(text));
}

ExtRational ExtRational::from_double(double v) {
  if (std::isinf(v) && v > 0) return infinity();
  if (!std::isfinite(v)) throw Error("cannot represent non-finite value as rational");
  int exponent = 0;
  double mantissa = std::frexp(v, &exponent);
  // 53 significant bits fit exactly in an int64.
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  BigRational r = BigRational(scaled);
  const int shift = exponent - 53;
  BigRational two_pow = 1;
  for (int i = 0; i < std::abs(shift); ++i) two_pow *= 2;
  return ExtRational(shift >= 0 ? BigRational(r * two_pow) : BigRational(r / two_pow));
}

const BigRational& ExtRational::value() const {
  if (infinite_) throw Error("infinite exponent has no finite value");
  return value_;
}

double ExtRational::to_double() const {
  if (infinite_) return HUGE_VAL;
  return static_cast<double>(value_);
}

std::string ExtRational::to_string() const {
  if (infinite_) return "inf";
  return value_.str();
}

ExtRational ExtRational::reciprocal() const {
  if (infinite_) return ExtRational(0);
  if (value_ == 0) return infinity();
  return ExtRational(BigRational(1 / value_));
}

bool operator==(const ExtRational& a, const ExtRational& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
  if (a.value_ < b.value_) return std::strong_ordering::less;
  if (a.value_ > b.value_) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

ExtRational operator+(const ExtRational& a, const ExtRational& b) {
  if (a.infinite_ || b.infinite_) return ExtRational::infinity();
  return ExtRational(BigRational(a.value_ + b.value_));
}

ExtRational operator-(const ExtRational& a, const ExtRational& b) {
  if (b.infinite_) throw Error("subtraction of an infinite exponent");
  if (a.infinite_) return ExtRational::infinity();
  return ExtRational(BigRational(a.value_ - b.value_));
}

ExtRational operator*(const ExtRational& a, const ExtRational& b) {
  if (a.infinite_ || b.infinite_) {
    const ExtRational& finite = a.infinite_ ? b : a;
    if (!finite.infinite_ && finite.value_ <= 0) throw Error("undefined product with infinity");
    return ExtRational::infinity();
  }
  return ExtRational(BigRational(a.value_ * b.value_));
}

ExtRational operator/(const ExtRational& a, const ExtRational& b) { return a * b.reciprocal(); }

ExtRational ExtRational::operator-() const {
  if (infinite_) throw Error("negative infinity is not an exponent");
  return ExtRational(BigRational(-value_));
}

}  // namespace nlszp
