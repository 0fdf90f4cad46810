#include "rffmd/manifest.hpp"

#include <fstream>

#include <fmt/core.h>
#include <openssl/evp.h>

#include "rffmd/errors.hpp"

namespace rffmd {

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());

    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw Error("sha256: digest initialization failed");
    }
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, digest, &len);
    EVP_MD_CTX_free(ctx);

    std::string hex;
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

std::filesystem::path write_manifest(const std::filesystem::path& out_dir, const std::string& name,
                                     const std::string& config_echo,
                                     const std::vector<std::filesystem::path>& artifacts) {
    std::filesystem::create_directories(out_dir);
    const auto path = out_dir / ("manifest_" + name + ".txt");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << "# config\n" << config_echo;
    out << "# artifacts\n";
    for (const auto& a : artifacts)
        out << "artifact " << a.filename().string() << " sha256=" << sha256_file(a) << '\n';
    return path;
}

} // namespace rffmd
