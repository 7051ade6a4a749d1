#pragma once

#include <cstdint>
#include <string>

namespace ecdflab {

// Shortest decimal form that parses back to the same double. Locale-free.
std::string format_double(double value);

std::string format_int(std::int64_t value);

}  // namespace ecdflab
