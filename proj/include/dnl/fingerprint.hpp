#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>

#include "dnl/common.hpp"
#include "dnl/label.hpp"

namespace dnl {

/// Lowercase hex SHA-256 of `bytes`.
inline std::string sha256_hex(std::string_view bytes) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
        throw Error("HASH_FAILURE", "SHA-256 computation failed");
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(kHex[md[i] >> 4]);
        out.push_back(kHex[md[i] & 0xf]);
    }
    return out;
}

/// Byte string hashed by compute_fingerprint: per name, "<byte length>:<name>\n".
inline std::string fingerprint_encoding(std::span<const std::string> column_names) {
    std::string enc;
    for (const auto& name : column_names) {
        enc += std::to_string(name.size());
        enc.push_back(':');
        enc += name;
        enc.push_back('\n');
    }
    return enc;
}

inline StructuralFingerprint compute_fingerprint(std::vector<std::string> column_names) {
    if (column_names.empty())
        throw Error("EMPTY_COLUMN_LIST", "cannot fingerprint an empty column list");
    StructuralFingerprint fp;
    fp.digest = sha256_hex(fingerprint_encoding(column_names));
    fp.column_names = std::move(column_names);
    return fp;
}

}  // namespace dnl
