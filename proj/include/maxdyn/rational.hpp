#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <cstdint>
#include <string>

namespace maxdyn {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational arithmetic for probabilities, expansions and hitting times.
using Rat = boost::rational<BigInt>;

inline Rat make_rat(std::int64_t num, std::int64_t den = 1) {
    return Rat(BigInt(num), BigInt(den));
}

inline double rat_to_double(const Rat& r) {
    return boost::multiprecision::cpp_rational(r.numerator(), r.denominator())
        .convert_to<double>();
}

inline std::string rat_to_string(const Rat& r) {
    std::string s = r.numerator().str();
    if (r.denominator() != 1) {
        s += "/" + r.denominator().str();
    }
    return s;
}

}  // namespace maxdyn
