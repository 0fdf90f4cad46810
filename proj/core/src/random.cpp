#include "rffmd/random.hpp"

namespace rffmd {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t parent, std::string_view label,
                          std::initializer_list<std::uint64_t> indices) {
    // FNV-1a over the label, then fold in the indices.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::uint64_t s = mix64(parent ^ mix64(h));
    for (std::uint64_t i : indices) s = mix64(s ^ mix64(i + 0x632be59bd9b4e019ULL));
    return s;
}

} // namespace rffmd
