#ifndef KEYSIM_PRIVACY_HPP
#define KEYSIM_PRIVACY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace keysim {

// SHA-1 is kept only behind an explicit legacy switch; it is illustrative,
// not recommended.
enum class HashAlgorithm { sha256, sha1_legacy };

struct AmplifiedKey {
    std::vector<std::uint8_t> digest;
    std::size_t source_bits = 0;
    HashAlgorithm algorithm = HashAlgorithm::sha256;
};

// Packs the key bits big-endian (first bit = MSB of the first byte) behind an
// 8-byte big-endian bit-length header, hashes, and expands or truncates to
// out_bytes via counter-mode rehashing.  Pure function: identical inputs give
// identical digests.
AmplifiedKey amplify(const std::vector<std::uint8_t>& key_bits, std::size_t out_bytes,
                     HashAlgorithm algorithm = HashAlgorithm::sha256);

// Constant-time digest comparison.
bool keys_agree(const AmplifiedKey& a, const AmplifiedKey& b);

std::string to_hex(const std::vector<std::uint8_t>& bytes);

HashAlgorithm parse_hash_algorithm(const std::string& name); // throws config_error

} // namespace keysim

#endif
