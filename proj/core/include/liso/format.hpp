#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace liso {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

/// Parses the whole of `text` (no surrounding whitespace) as a double.
std::optional<double> parse_double(std::string_view text);

}  // namespace liso
