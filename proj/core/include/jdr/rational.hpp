#ifndef JDR_RATIONAL_HPP
#define JDR_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace jdr {

// Exact rational scalar. cpp_rational keeps values in lowest terms with a
// positive denominator, which is exactly the invariant we need.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(long long num, long long den = 1) {
    return Rational(Integer(num), Integer(den));
}

std::string rational_to_string(const Rational& q);
Rational rational_from_string(const std::string& text);

} // namespace jdr

#endif
