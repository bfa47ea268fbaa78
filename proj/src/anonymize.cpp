#include "dwellscope/anonymize.hpp"

#include <array>
#include <cctype>

#include <openssl/evp.h>

#include "dwellscope/error.hpp"

namespace dwellscope {

namespace {

bool is_hex(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}

} // namespace

std::string normalize_mac(std::string_view mac) {
    // AA:BB:CC:DD:EE:FF / aa-bb-cc-dd-ee-ff -> AA:BB:CC:DD:EE:FF
    if (mac.size() != 17)
        throw Error(ErrorCode::invalid_mac, "expected 17 chars, got '" + std::string(mac) + "'");
    std::string out(17, ':');
    for (int octet = 0; octet < 6; ++octet) {
        const int base = octet * 3;
        if (!is_hex(mac[base]) || !is_hex(mac[base + 1]))
            throw Error(ErrorCode::invalid_mac, "bad octet in '" + std::string(mac) + "'");
        if (octet < 5 && mac[base + 2] != ':' && mac[base + 2] != '-')
            throw Error(ErrorCode::invalid_mac, "bad separator in '" + std::string(mac) + "'");
        out[base] = static_cast<char>(std::toupper(static_cast<unsigned char>(mac[base])));
        out[base + 1] = static_cast<char>(std::toupper(static_cast<unsigned char>(mac[base + 1])));
    }
    return out;
}

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
        throw Error(ErrorCode::config_error, "SHA-256 digest failed");
    static const char hex[] = "0123456789abcdef";
    std::string out(len * 2, '0');
    for (unsigned int i = 0; i < len; ++i) {
        out[2 * i] = hex[digest[i] >> 4];
        out[2 * i + 1] = hex[digest[i] & 0xf];
    }
    return out;
}

DeviceId anonymize_device(std::string_view mac, std::string_view salt) {
    if (salt.empty())
        throw Error(ErrorCode::config_error, "anonymization salt must be non-empty");
    std::string payload(salt);
    payload += normalize_mac(mac);
    return DeviceId{sha256_hex(payload)};
}

} // namespace dwellscope
