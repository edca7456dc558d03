#include "wgpt/rational.hpp"

#include <cctype>

#include "wgpt/error.hpp"

namespace wgpt {

namespace {

using boost::multiprecision::cpp_int;

cpp_int pow10(unsigned k) {
  cpp_int r = 1;
  for (unsigned i = 0; i < k; ++i) r *= 10;
  return r;
}

Rational parse_decimal(std::string_view s) {
  if (s.empty()) fail(Errc::ParseError, "empty numeric literal");
  bool negative = false;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') {
    negative = s[i] == '-';
    ++i;
  }
  cpp_int digits = 0;
  int frac_digits = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      any_digit = true;
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) fail(Errc::ParseError, "malformed number '" + std::string(s) + "'");
  long exponent = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') fail(Errc::ParseError, "malformed number '" + std::string(s) + "'");
    ++i;
    const std::string rest(s.substr(i));
    if (rest.empty()) fail(Errc::ParseError, "malformed exponent in '" + std::string(s) + "'");
    std::size_t used = 0;
    try {
      exponent = std::stol(rest, &used);
    } catch (const std::exception&) {
      fail(Errc::ParseError, "malformed exponent in '" + std::string(s) + "'");
    }
    if (used != rest.size()) fail(Errc::ParseError, "malformed exponent in '" + std::string(s) + "'");
  }
  exponent -= frac_digits;
  Rational value(digits);
  if (exponent > 0) value *= Rational(pow10(static_cast<unsigned>(exponent)));
  if (exponent < 0) value /= Rational(pow10(static_cast<unsigned>(-exponent)));
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  const Rational num = parse_decimal(text.substr(0, slash));
  const Rational den = parse_decimal(text.substr(slash + 1));
  if (den == 0) fail(Errc::ParseError, "zero denominator in '" + std::string(text) + "'");
  return num / den;
}

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational pow2(int k) {
  cpp_int p = 1;
  p <<= (k < 0 ? -k : k);
  return k < 0 ? Rational(cpp_int(1), p) : Rational(p);
}

}  // namespace wgpt
