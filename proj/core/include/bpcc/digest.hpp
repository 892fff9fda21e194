#pragma once

#include <string>
#include <string_view>

namespace bpcc {

// Hex-encoded SHA-256. Used for content addressing, ledger digests and
// result attestation.
std::string sha256_hex(std::string_view data);

// Keyed signature over arbitrary data (HMAC-SHA256, hex encoded). Stands in
// for asymmetric signatures in the simulation: verification requires the key.
std::string keyed_sign(std::string_view key, std::string_view data);
bool keyed_verify(std::string_view key, std::string_view data, std::string_view signature);

// Deterministic keystream transform for workspace value hiding. Applying the
// transform twice with the same key/nonce restores the input.
std::string keystream_transform(std::string_view key, std::string_view nonce, std::string_view data);

} // namespace bpcc
