#ifndef NILDYN_RATIONAL_HPP
#define NILDYN_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace nildyn {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return den(r) == 1; }

// floor(p/q) with sign handled (cpp_int division truncates toward zero).
inline BigInt rfloor(const Rational& r) {
    BigInt q = num(r) / den(r);
    if (num(r) < 0 && q * den(r) != num(r)) --q;
    return q;
}

// Fractional part in [0,1).
inline Rational rfrac(const Rational& r) { return r - Rational(rfloor(r)); }

inline BigInt factorial(unsigned n) {
    BigInt f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

// Binomial coefficient extended to all integer n by the polynomial
// n(n-1)...(n-k+1)/k!.
inline BigInt binomial(const BigInt& n, unsigned k) {
    BigInt p = 1;
    for (unsigned i = 0; i < k; ++i) p *= n - i;
    return p / factorial(k);
}

inline std::string to_string(const Rational& r) {
    if (is_integer(r)) return num(r).str();
    return num(r).str() + "/" + den(r).str();
}

// Parses "p" or "p/q".
inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt p(s.substr(0, slash)), q(s.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("rational with zero denominator: " + s);
    return Rational(p, q);
}

} // namespace nildyn

#endif
