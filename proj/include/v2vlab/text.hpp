#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace v2vlab {

// Shortest decimal that round-trips to the same double.
std::string format_shortest(double value);

// Fixed notation after half-up rounding, e.g. format_fixed(0.06044, 4) == "0.0604".
std::string format_fixed(double value, int decimals);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::vector<std::string> split(std::string_view text, char sep);

}  // namespace v2vlab
