#pragma once

#include <string>
#include <string_view>

namespace imgtn {

/// Shortest decimal text that parses back to the identical double.
std::string format_double(double value);
double parse_double(std::string_view text);

} // namespace imgtn
