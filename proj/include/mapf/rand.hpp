#ifndef MAPF_RAND_HPP
#define MAPF_RAND_HPP

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace mapf {

// splitmix64; used to derive independent seeds from a master seed.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Splittable seed derivation: mix_seed(mix_seed(master, a), b) gives a stream
// that depends on the whole component path, not on evaluation order.
inline uint64_t mix_seed(uint64_t seed, uint64_t component) {
    return splitmix64(seed ^ splitmix64(component + 0x9e3779b97f4a7c15ULL));
}

// FNV-1a, for folding string tags (e.g. algorithm names) into seeds.
inline uint64_t hash_str(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Uniform draw from [0, n). Fixed-point multiply keeps results identical
// across standard libraries, unlike std::uniform_int_distribution.
inline uint64_t rng_below(std::mt19937_64& rng, uint64_t n) {
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

template <typename T>
void shuffle_vec(std::vector<T>& v, std::mt19937_64& rng) {
    for (size_t i = v.size(); i > 1; --i) {
        size_t j = rng_below(rng, i);
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace mapf

#endif
