// Small string helpers shared by the parsers and renderers.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace knowcert::text {

std::string_view trim(std::string_view s);

// Splits on `delim`, keeping empty fields. "a\t\tb" -> {"a", "", "b"}.
std::vector<std::string_view> split(std::string_view s, char delim);

// Splits on `delim`, trims every piece and drops the empty ones.
std::vector<std::string> split_list(std::string_view s, char delim);

std::string to_upper(std::string_view s);
std::string to_lower(std::string_view s);

std::optional<long long> parse_int(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace knowcert::text
