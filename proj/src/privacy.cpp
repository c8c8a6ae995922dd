#include "keysim/privacy.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>

#include "keysim/errors.hpp"

namespace keysim {

namespace {

const EVP_MD* digest_for(HashAlgorithm algorithm) {
    switch (algorithm) {
    case HashAlgorithm::sha256: return EVP_sha256();
    case HashAlgorithm::sha1_legacy: return EVP_sha1();
    }
    return nullptr;
}

} // namespace

AmplifiedKey amplify(const std::vector<std::uint8_t>& key_bits, std::size_t out_bytes,
                     HashAlgorithm algorithm) {
    if (key_bits.empty())
        throw input_error("amplify: key bits must be non-empty");
    if (out_bytes == 0)
        throw config_error("amplify: output length must be positive");
    const EVP_MD* md = digest_for(algorithm);
    if (!md)
        throw config_error("amplify: unsupported hash algorithm");

    // 8-byte big-endian bit count, then the bits packed MSB-first.  The
    // length header keeps keys that differ only in trailing zero bits from
    // colliding after padding.
    const std::uint64_t nbits = key_bits.size();
    std::vector<std::uint8_t> message(8 + (key_bits.size() + 7) / 8, 0);
    for (int i = 0; i < 8; ++i)
        message[i] = static_cast<std::uint8_t>(nbits >> (56 - 8 * i));
    for (std::size_t i = 0; i < key_bits.size(); ++i)
        if (key_bits[i] & 1u)
            message[8 + i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));

    AmplifiedKey key;
    key.source_bits = key_bits.size();
    key.algorithm = algorithm;
    key.digest.reserve(out_bytes);

    // Counter-mode expansion: digest_i = H(message || counter_be32).
    std::vector<std::uint8_t> block(message);
    block.resize(message.size() + 4);
    std::uint32_t counter = 0;
    unsigned char out[EVP_MAX_MD_SIZE];
    while (key.digest.size() < out_bytes) {
        for (int i = 0; i < 4; ++i)
            block[message.size() + i] = static_cast<std::uint8_t>(counter >> (24 - 8 * i));
        unsigned int out_len = 0;
        if (EVP_Digest(block.data(), block.size(), out, &out_len, md, nullptr) != 1)
            throw config_error("amplify: digest computation failed");
        const std::size_t take = std::min<std::size_t>(out_len, out_bytes - key.digest.size());
        key.digest.insert(key.digest.end(), out, out + take);
        ++counter;
    }
    return key;
}

bool keys_agree(const AmplifiedKey& a, const AmplifiedKey& b) {
    if (a.digest.size() != b.digest.size())
        return false;
    return CRYPTO_memcmp(a.digest.data(), b.digest.data(), a.digest.size()) == 0;
}

std::string to_hex(const std::vector<std::uint8_t>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string hex;
    hex.reserve(2 * bytes.size());
    for (std::uint8_t b : bytes) {
        hex.push_back(digits[b >> 4]);
        hex.push_back(digits[b & 0xf]);
    }
    return hex;
}

HashAlgorithm parse_hash_algorithm(const std::string& name) {
    if (name == "sha256")
        return HashAlgorithm::sha256;
    if (name == "sha1")
        return HashAlgorithm::sha1_legacy;
    throw config_error("unsupported hash algorithm '" + name + "' (use sha256, or sha1 for legacy runs)");
}

} // namespace keysim
