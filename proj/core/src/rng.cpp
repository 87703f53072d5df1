#include "permdiag/rng.hpp"

#include <stdexcept>

#include "permdiag/normal.hpp"

namespace permdiag {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

// FNV-1a over the role label; keeps role-derived streams apart.
inline std::uint64_t hash_label(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace

SeededStream::SeededStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    std::uint64_t x = seed ^ (0x6A09E667F3BCC909ULL * (stream_id + 1));
    s_[0] = splitmix64(x);
    s_[1] = splitmix64(x);
    s_[2] = splitmix64(x);
    s_[3] = splitmix64(x);
}

std::uint64_t SeededStream::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double SeededStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SeededStream::uniform_open() {
    // (k + 0.5) / 2^53 with k in [0, 2^53) never touches 0 or 1.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double SeededStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

std::uint64_t SeededStream::uniform_index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
    // rejection sampling on the top of the range removes modulo bias
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v;
    do {
        v = next_u64();
    } while (v >= limit);
    return v % n;
}

double SeededStream::normal() { return norm_ppf(uniform_open()); }

double SeededStream::normal(double mean, double sd) {
    return mean + sd * normal();
}

std::vector<std::size_t> SeededStream::permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    shuffle(p);
    return p;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t replicate,
                          std::string_view role) {
    std::uint64_t x = master_seed;
    std::uint64_t a = splitmix64(x);
    x ^= replicate * 0x9E3779B97F4A7C15ULL + 0x243F6A8885A308D3ULL;
    std::uint64_t b = splitmix64(x);
    x ^= hash_label(role);
    std::uint64_t c = splitmix64(x);
    return a ^ rotl(b, 21) ^ rotl(c, 42);
}

SeededStream derive_stream(std::uint64_t master_seed, std::uint64_t replicate,
                           std::string_view role) {
    return SeededStream(derive_seed(master_seed, replicate, role));
}

}  // namespace permdiag
