#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace likev {

/// A coordinate or outcome value: an integer, a real, or a label.
///
/// Values inside one dimension (or one outcome space) share a kind. The
/// textual form produced by to_string() is what the command line and the
/// model file format match against.
using Value = std::variant<std::int64_t, double, std::string>;

std::string to_string(const Value& v);

/// Shortest decimal text that parses back to exactly `x`.
std::string format_double(double x);

}  // namespace likev
