#pragma once

#include <string>
#include <string_view>

namespace feedpipe {

/// Hex digest (64 chars) of the SHA-256 of the input.
std::string sha256_hex(std::string_view data);

/// First 16 hex chars of the SHA-256 digest; used for stable ids and filenames.
std::string sha256_hex16(std::string_view data);

}  // namespace feedpipe
