#include "aptlabel/digest.hpp"

#include <openssl/evp.h>

#include <array>
#include <stdexcept>

namespace aptlabel {

const char* algo_name(HashAlgo a) {
    switch (a) {
    case HashAlgo::md5:    return "md5";
    case HashAlgo::sha1:   return "sha1";
    case HashAlgo::sha256: return "sha256";
    case HashAlgo::sha512: return "sha512";
    }
    return "?";
}

std::optional<HashAlgo> algo_from_length(size_t hex_len) {
    switch (hex_len) {
    case 32:  return HashAlgo::md5;
    case 40:  return HashAlgo::sha1;
    case 64:  return HashAlgo::sha256;
    case 128: return HashAlgo::sha512;
    default:  return std::nullopt;
    }
}

bool is_hex(std::string_view s) {
    for (char c : s) {
        const bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') ||
                        (c >= 'A' && c <= 'F');
        if (!ok)
            return false;
    }
    return true;
}

bool is_wellformed_digest(std::string_view s) {
    if (!algo_from_length(s.size()))
        return false;
    for (char c : s) {
        const bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
        if (!ok)
            return false;
    }
    return true;
}

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int md_len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &md_len,
                   EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(md_len * 2);
    for (unsigned int i = 0; i < md_len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0x0F]);
    }
    return out;
}

} // namespace aptlabel
