#include "cochange/common/hash.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>

#include "cochange/common/error.hpp"

namespace cochange {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

struct DigestContext {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx{EVP_MD_CTX_new(), &EVP_MD_CTX_free};

    DigestContext() {
        if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
            throw Error("SHA-256 initialisation failed");
        }
    }

    void update(const void* data, std::size_t size) { EVP_DigestUpdate(ctx.get(), data, size); }

    std::string finish() {
        std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
        unsigned int length = 0;
        EVP_DigestFinal_ex(ctx.get(), digest.data(), &length);
        std::string out;
        out.reserve(length * 2);
        for (unsigned i = 0; i < length; ++i) {
            out.push_back(kHexDigits[digest[i] >> 4]);
            out.push_back(kHexDigits[digest[i] & 0xF]);
        }
        return out;
    }
};

}  // namespace

std::string to_hex(std::uint64_t value) {
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kHexDigits[value & 0xF];
        value >>= 4;
    }
    return out;
}

std::string sha256_hex(std::string_view data) {
    DigestContext digest;
    digest.update(data.data(), data.size());
    return digest.finish();
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    DigestContext digest;
    std::array<char, 1 << 16> buffer{};
    while (in) {
        in.read(buffer.data(), buffer.size());
        digest.update(buffer.data(), static_cast<std::size_t>(in.gcount()));
    }
    return digest.finish();
}

}  // namespace cochange
