#include "brew/crypto.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

#include <algorithm>
#include <array>
#include <charconv>

namespace brew::crypto {

std::string to_hex(std::span<const std::uint8_t> bytes)
{
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(kHex[b >> 4]);
        out.push_back(kHex[b & 0xF]);
    }
    return out;
}

std::vector<std::uint8_t> from_hex(std::string_view hex)
{
    if (hex.size() % 2 != 0) throw std::invalid_argument("odd-length hex string");
    std::vector<std::uint8_t> out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        unsigned v = 0;
        auto [p, ec] = std::from_chars(hex.data() + 2 * i, hex.data() + 2 * i + 2, v, 16);
        if (ec != std::errc{} || p != hex.data() + 2 * i + 2) throw std::invalid_argument("bad hex digit");
        out[i] = static_cast<std::uint8_t>(v);
    }
    return out;
}

namespace {

std::string digest_hex(const EVP_MD* md, std::string_view data)
{
    std::array<unsigned char, EVP_MAX_MD_SIZE> buf{};
    unsigned len = 0;
    if (EVP_Digest(data.data(), data.size(), buf.data(), &len, md, nullptr) != 1) {
        throw std::runtime_error("digest computation failed");
    }
    return to_hex({buf.data(), len});
}

}  // namespace

std::string md5_hex(std::string_view data) { return digest_hex(EVP_md5(), data); }
std::string sha256_hex(std::string_view data) { return digest_hex(EVP_sha256(), data); }

std::string base64_encode(std::string_view data)
{
    std::string out(4 * ((data.size() + 2) / 3), '\0');
    int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                            reinterpret_cast<const unsigned char*>(data.data()), static_cast<int>(data.size()));
    out.resize(static_cast<std::size_t>(n));
    return out;
}

std::string base64_decode(std::string_view data)
{
    if (data.size() % 4 != 0) throw std::invalid_argument("base64 length not a multiple of 4");
    if (data.empty()) return {};
    std::string out(3 * data.size() / 4, '\0');
    int n = EVP_DecodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                            reinterpret_cast<const unsigned char*>(data.data()), static_cast<int>(data.size()));
    if (n < 0) throw std::invalid_argument("malformed base64");
    // EVP_DecodeBlock keeps the bytes produced by '=' padding.
    std::size_t pad = 0;
    if (data.ends_with("==")) pad = 2;
    else if (data.ends_with("=")) pad = 1;
    out.resize(static_cast<std::size_t>(n) - pad);
    return out;
}

std::vector<std::uint8_t> random_bytes(std::size_t n)
{
    std::vector<std::uint8_t> out(n);
    if (n > 0 && RAND_bytes(out.data(), static_cast<int>(n)) != 1) {
        throw RandomnessError("cryptographic randomness source unavailable");
    }
    return out;
}

std::string random_token(std::size_t n_bytes) { return to_hex(random_bytes(n_bytes)); }

namespace {

std::vector<std::uint8_t> pbkdf2(std::string_view password, std::span<const std::uint8_t> salt, int iterations)
{
    std::vector<std::uint8_t> dk(32);
    if (PKCS5_PBKDF2_HMAC(password.data(), static_cast<int>(password.size()), salt.data(),
                          static_cast<int>(salt.size()), iterations, EVP_sha256(), static_cast<int>(dk.size()),
                          dk.data()) != 1) {
        throw std::runtime_error("PBKDF2 failed");
    }
    return dk;
}

}  // namespace

std::string hash_password_salted(std::string_view password, std::span<const std::uint8_t> salt)
{
    auto dk = pbkdf2(password, salt, kPbkdf2Iterations);
    return std::string(kPbkdf2Prefix) + std::to_string(kPbkdf2Iterations) + "$" + to_hex(salt) + "$" + to_hex(dk);
}

std::string hash_password(std::string_view password, HashMode mode)
{
    if (mode == HashMode::Vulnerable) return md5_hex(password);
    auto salt = random_bytes(kSaltBytes);
    return hash_password_salted(password, salt);
}

bool is_md5_hex(std::string_view s)
{
    return s.size() == 32 && std::all_of(s.begin(), s.end(), [](char c) {
               return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
           });
}

bool verify_password(std::string_view password, std::string_view stored)
{
    if (is_md5_hex(stored)) return md5_hex(password) == stored;
    if (!stored.starts_with(kPbkdf2Prefix)) return false;
    auto rest = stored.substr(kPbkdf2Prefix.size());
    auto d1 = rest.find('$');
    if (d1 == std::string_view::npos) return false;
    auto d2 = rest.find('$', d1 + 1);
    if (d2 == std::string_view::npos) return false;
    int iterations = 0;
    auto it_str = rest.substr(0, d1);
    auto [p, ec] = std::from_chars(it_str.data(), it_str.data() + it_str.size(), iterations);
    if (ec != std::errc{} || p != it_str.data() + it_str.size() || iterations <= 0) return false;
    try {
        auto salt = from_hex(rest.substr(d1 + 1, d2 - d1 - 1));
        auto expected = from_hex(rest.substr(d2 + 1));
        auto dk = pbkdf2(password, salt, iterations);
        return dk.size() == expected.size() && CRYPTO_memcmp(dk.data(), expected.data(), dk.size()) == 0;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

}  // namespace brew::crypto
