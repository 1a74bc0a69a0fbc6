#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace probneed {

// Exact rational arithmetic; all probabilities in the tool are rationals and
// are serialized as lowest-terms "num/den" strings.
using Rat = boost::multiprecision::cpp_rational;

inline Rat rat_pow2_inv(std::uint32_t k) {
    boost::multiprecision::cpp_int den = 1;
    den <<= k;
    return Rat(1, den);
}

inline std::string rat_str(const Rat& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

inline Rat rat_parse(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos)
            return Rat(boost::multiprecision::cpp_int(s));
        boost::multiprecision::cpp_int num(s.substr(0, slash));
        boost::multiprecision::cpp_int den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rat(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational: " + s);
    }
}

} // namespace probneed
