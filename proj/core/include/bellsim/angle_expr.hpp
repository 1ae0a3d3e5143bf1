#pragma once

#include <stdexcept>
#include <string_view>

namespace bellsim {

class AngleParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/**
 * Evaluates a small arithmetic expression in radians, e.g. "pi/8", "3pi/4",
 * "2*asin(0.2)", "-pi/15", "0.25".
 *
 * Grammar: + - * / with the usual precedence, unary minus, parentheses, the
 * constant pi, and the functions sin cos tan asin acos atan sqrt deg. A number
 * directly followed by pi or a function multiplies it ("3pi" == "3*pi").
 * deg(x) converts degrees to radians.
 *
 * Throws AngleParseError on malformed input or a non-finite result.
 */
double parse_angle(std::string_view text);

}  // namespace bellsim
