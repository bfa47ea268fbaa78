#pragma once

#include <string>
#include <string_view>

#include "dwellscope/types.hpp"

namespace dwellscope {

/// Canonical MAC form: six uppercase hex octets joined by ':'. Accepts ':'
/// or '-' separators and either case on input. Throws invalid_mac.
std::string normalize_mac(std::string_view mac);

/// SHA-256 digest of `data`, lowercase hex (64 chars).
std::string sha256_hex(std::string_view data);

/// DeviceId = SHA-256(salt || normalized MAC). Deterministic; distinct salts
/// give unlinkable ids for the same device. Throws invalid_mac / config_error.
DeviceId anonymize_device(std::string_view mac, std::string_view salt);

} // namespace dwellscope
