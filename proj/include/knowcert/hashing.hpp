#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

namespace knowcert {

// Lower-case hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

// Digest over the fields joined with the unit separator (0x1F), so that
// ("ab", "c") and ("a", "bc") hash differently.
std::string sha256_fields(std::initializer_list<std::string_view> fields);

}  // namespace knowcert
