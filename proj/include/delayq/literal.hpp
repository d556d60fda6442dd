#pragma once

// Text form of a distribution: `family:key=value,...`
//
//   exponential:theta=1
//   normal:alpha=1,sigma=1
//   lognormal:alpha=-0.34657,sigma=0.83255
//   weibull:alpha=2,beta=0.785398
//   gamma:alpha=2,beta=1
//   phasetype:alpha=0.3,0.7;s=-1.8367,0,0,-0.8367     (S row-major)
//
// A token without '=' extends the value list of the preceding key, so list
// values may be separated by ',' and keys by ',' or ';'. Numbers are parsed
// with std::from_chars (correctly rounded).

#include "delayq/distributions.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace delayq {

/// Throws ParseError on malformed text, DomainError on invalid parameters.
Distribution parse_distribution(std::string_view text);

/// Inverse of parse_distribution using shortest round-trip numbers.
std::string format_distribution(const Distribution& d);

/// Comma-separated list of doubles. Throws ParseError.
std::vector<double> parse_number_list(std::string_view text);

/// Single double, whole string consumed. Throws ParseError.
double parse_number(std::string_view text);

} // namespace delayq
