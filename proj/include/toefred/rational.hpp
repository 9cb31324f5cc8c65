#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

namespace toefred {

// Exact arbitrary-precision rational scalar for the formal-series side.
using Rational = boost::multiprecision::cpp_rational;

// Canonical form: "p" for integers, "p/q" otherwise (q > 0, gcd(p,q) = 1).
inline std::string rational_str(const Rational& r) { return r.str(); }

inline double rational_double(const Rational& r) { return r.convert_to<double>(); }

} // namespace toefred
