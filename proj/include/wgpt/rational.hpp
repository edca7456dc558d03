#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace wgpt {

/// Arbitrary precision rational used by the exact evaluation mode.
using Rational = boost::multiprecision::cpp_rational;

/// Parses a decimal literal ("0.125", "-3", "1e-3") or a fraction "p/q" exactly.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

double to_double(const Rational& q);

/// 2^k for any integer k.
Rational pow2(int k);

}  // namespace wgpt
