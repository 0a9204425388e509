#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/rational.hpp>

namespace seqpred {

// Exact rational arithmetic for error rates and predictability values.
// int64 components are ample: every quantity is a ratio of counts bounded
// by the sequence length.
using Rat = boost::rational<std::int64_t>;

inline double to_double(const Rat& r) {
    return boost::rational_cast<double>(r);
}

inline std::string rat_string(const Rat& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Parses "n/d", an integer, or a plain decimal such as "0.25" (converted
// exactly). Anything else is an invalid argument.
inline Rat parse_rational(const std::string& text) {
    if (text.empty())
        throw std::invalid_argument("empty rational literal");
    auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            std::int64_t num = std::stoll(text.substr(0, slash));
            std::int64_t den = std::stoll(text.substr(slash + 1));
            if (den == 0)
                throw std::invalid_argument("zero denominator: " + text);
            return Rat(num, den);
        }
        auto dot = text.find('.');
        if (dot == std::string::npos)
            return Rat(std::stoll(text));
        std::int64_t whole = std::stoll(text.substr(0, dot));
        std::string frac = text.substr(dot + 1);
        if (frac.empty() || frac.size() > 15)
            throw std::invalid_argument("bad decimal literal: " + text);
        std::int64_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        std::int64_t num = std::stoll(frac);
        bool neg = text[0] == '-';
        Rat mag = Rat(whole < 0 ? -whole : whole) + Rat(num, den);
        return neg ? -mag : mag;
    } catch (const std::out_of_range&) {
        throw std::invalid_argument("rational literal out of range: " + text);
    }
}

} // namespace seqpred
