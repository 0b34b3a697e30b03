#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace aptlabel {

enum class HashAlgo { md5, sha1, sha256, sha512 };

const char* algo_name(HashAlgo a);

// Hex digest length -> algorithm; lengths 32/40/64/128 only.
std::optional<HashAlgo> algo_from_length(size_t hex_len);

// True if every character is [0-9a-fA-F].
bool is_hex(std::string_view s);

// True for a lowercase hex string of a recognized digest length.
bool is_wellformed_digest(std::string_view s);

// SHA-256 of raw bytes as 64 lowercase hex characters.
std::string sha256_hex(std::string_view bytes);

} // namespace aptlabel
