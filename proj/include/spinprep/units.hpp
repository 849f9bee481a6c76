#pragma once

#include <string>

namespace spinprep {

// Formats a double with 17 significant digits, enough for lossless text
// round-trips.
std::string format_number(double v);

// Strict double parse of a whole token; throws std::invalid_argument on
// trailing garbage.
double parse_number(const std::string& text);

// "19ns", "1.9e-8s", or a plain number already in seconds.
double parse_time_seconds(const std::string& text);

// "4.2mT", "0.0042T", or a plain number already in tesla.
double parse_field_tesla(const std::string& text);

}  // namespace spinprep
