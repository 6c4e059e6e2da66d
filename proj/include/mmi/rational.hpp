#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmi {

// Exact rational mass type. Every probability weight and every alpha
// parameter is carried as a rational so that boundary comparisons
// (alpha equal to an atom mass) are decided exactly.
using Mass = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Mass& m) { return m.convert_to<double>(); }

// Doubles are dyadic rationals; this conversion is lossless.
inline Mass mass_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("mass_from_double: non-finite input");
    if (x == 0.0) return Mass(0);
    int exp = 0;
    double frac = std::frexp(x, &exp);  // x = frac * 2^exp, |frac| in [0.5, 1)
    auto mant = static_cast<std::int64_t>(std::ldexp(frac, 53));
    exp -= 53;
    Mass r(mant);
    if (exp > 0) {
        r *= Mass(BigInt(1) << exp);
    } else if (exp < 0) {
        r /= Mass(BigInt(1) << -exp);
    }
    return r;
}

namespace detail {
// Strips leading zeros so BigInt's string constructor cannot mistake the
// digits for an octal literal ("0125" would otherwise parse as 85).
inline std::string strip_leading_zeros(std::string d) {
    std::string sign;
    if (!d.empty() && (d[0] == '+' || d[0] == '-')) {
        sign = d.substr(0, 1);
        d = d.substr(1);
    }
    auto nz = d.find_first_not_of('0');
    if (nz == std::string::npos) return "0";
    return sign + d.substr(nz);
}
}  // namespace detail

// Parses "3/10", "0.35", "1e-3", or plain integers as an exact rational.
inline Mass mass_from_string(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigInt num(detail::strip_leading_zeros(s.substr(0, slash)));
        BigInt den(detail::strip_leading_zeros(s.substr(slash + 1)));
        if (den == 0) throw std::invalid_argument("mass_from_string: zero denominator");
        return Mass(num, den);
    }
    std::string t = s;
    int exp10 = 0;
    auto epos = t.find_first_of("eE");
    if (epos != std::string::npos) {
        exp10 = std::stoi(t.substr(epos + 1));
        t = t.substr(0, epos);
    }
    bool neg = false;
    if (!t.empty() && (t[0] == '+' || t[0] == '-')) {
        neg = t[0] == '-';
        t = t.substr(1);
    }
    auto dot = t.find('.');
    std::string digits = t;
    int frac_digits = 0;
    if (dot != std::string::npos) {
        frac_digits = static_cast<int>(t.size() - dot - 1);
        digits = t.substr(0, dot) + t.substr(dot + 1);
    }
    if (digits.empty()) throw std::invalid_argument("mass_from_string: empty number");
    BigInt num(detail::strip_leading_zeros(digits));
    if (neg) num = -num;
    Mass r(num);
    int shift = exp10 - frac_digits;
    BigInt p10 = 1;
    for (int i = 0; i < std::abs(shift); ++i) p10 *= 10;
    if (shift > 0) r *= Mass(p10);
    else if (shift < 0) r /= Mass(p10);
    return r;
}

// Canonical serialization, e.g. "3/10" or "1". Parse/format round-trips.
inline std::string mass_to_string(const Mass& m) {
    std::string s = numerator(m).str();
    if (denominator(m) != 1) s += "/" + denominator(m).str();
    return s;
}

inline Mass mass_sum(const std::vector<Mass>& v) {
    Mass s(0);
    for (const auto& x : v) s += x;
    return s;
}

}  // namespace mmi
