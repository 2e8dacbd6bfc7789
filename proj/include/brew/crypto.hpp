#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace brew::crypto {

/// Raised when the system randomness source fails. Callers must not fall
/// back to a weaker generator.
class RandomnessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string to_hex(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> from_hex(std::string_view hex);

/// Lowercase hex MD5 digest.
std::string md5_hex(std::string_view data);
/// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

std::string base64_encode(std::string_view data);
/// Throws std::invalid_argument on malformed input.
std::string base64_decode(std::string_view data);

std::vector<std::uint8_t> random_bytes(std::size_t n);
/// Hex encoding of n random bytes.
std::string random_token(std::size_t n_bytes = 16);

enum class HashMode { Vulnerable, Fixed };

inline constexpr int kPbkdf2Iterations = 60000;
inline constexpr std::size_t kSaltBytes = 16;
inline constexpr std::string_view kPbkdf2Prefix = "pbkdf2-sha256$";

/// Vulnerable: unsalted MD5 hex. Fixed: "pbkdf2-sha256$<iter>$<salt hex>$<dk hex>"
/// with a fresh 128-bit salt.
std::string hash_password(std::string_view password, HashMode mode);
/// Fixed-mode hash with a caller-chosen salt (deterministic seeding).
std::string hash_password_salted(std::string_view password, std::span<const std::uint8_t> salt);
/// Accepts either stored format.
bool verify_password(std::string_view password, std::string_view stored);

bool is_md5_hex(std::string_view s);

}  // namespace brew::crypto
