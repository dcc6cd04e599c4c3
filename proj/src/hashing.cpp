#include "knowcert/hashing.hpp"

#include <openssl/evp.h>

#include <array>
#include <stdexcept>

namespace knowcert {

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(),
                 nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0x0f];
  }
  return out;
}

std::string sha256_fields(std::initializer_list<std::string_view> fields) {
  std::string joined;
  bool first = true;
  for (auto f : fields) {
    if (!first) joined += '\x1f';
    joined += f;
    first = false;
  }
  return sha256_hex(joined);
}

}  // namespace knowcert
