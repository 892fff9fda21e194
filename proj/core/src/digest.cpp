#include "bpcc/digest.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <array>
#include <cstring>

namespace bpcc {

namespace {

std::string to_hex(const unsigned char* data, size_t n) {
  static const char* digits = "0123456789abcdef";
  std::string out(n * 2, '0');
  for (size_t i = 0; i < n; ++i) {
    out[2 * i] = digits[data[i] >> 4];
    out[2 * i + 1] = digits[data[i] & 0xf];
  }
  return out;
}

std::array<unsigned char, 32> sha256_raw(std::string_view data) {
  std::array<unsigned char, 32> md{};
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr);
  return md;
}

} // namespace

std::string sha256_hex(std::string_view data) {
  auto md = sha256_raw(data);
  return to_hex(md.data(), md.size());
}

std::string keyed_sign(std::string_view key, std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
       reinterpret_cast<const unsigned char*>(data.data()), data.size(), md, &len);
  return to_hex(md, len);
}

bool keyed_verify(std::string_view key, std::string_view data, std::string_view signature) {
  return keyed_sign(key, data) == signature;
}

std::string keystream_transform(std::string_view key, std::string_view nonce, std::string_view data) {
  std::string out(data.size(), '\0');
  std::array<unsigned char, 32> block{};
  size_t pos = 0;
  uint64_t counter = 0;
  while (pos < data.size()) {
    std::string seed;
    seed.append(key);
    seed.push_back('|');
    seed.append(nonce);
    seed.push_back('|');
    seed.append(std::to_string(counter++));
    block = sha256_raw(seed);
    size_t n = std::min(block.size(), data.size() - pos);
    for (size_t i = 0; i < n; ++i)
      out[pos + i] = static_cast<char>(data[pos + i] ^ static_cast<char>(block[i]));
    pos += n;
  }
  return out;
}

} // namespace bpcc
