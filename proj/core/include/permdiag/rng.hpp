#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace permdiag {

/// Deterministic stream of pseudo-random draws (xoshiro256++ core).
///
/// A stream is identified by a (seed, stream id) pair; identical pairs
/// reproduce identical draws on every platform because all transforms
/// from raw bits to doubles are explicit.
class SeededStream {
public:
    explicit SeededStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64();

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform();

    /// Uniform on the open interval (0, 1); safe input for quantile transforms.
    double uniform_open();

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi);

    /// Integer uniform on {0, ..., n-1} (n > 0), unbiased.
    std::uint64_t uniform_index(std::uint64_t n);

    /// Standard normal draw via the inverse-CDF transform of uniform_open().
    double normal();
    double normal(double mean, double sd);

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t k = static_cast<std::size_t>(uniform_index(i));
            std::swap(v[i - 1], v[k]);
        }
    }

    /// Random permutation of {0, ..., n-1}.
    std::vector<std::size_t> permutation(std::size_t n);

private:
    std::uint64_t seed_ = 0;
    std::uint64_t stream_id_ = 0;
    std::uint64_t s_[4] = {};
};

/// Collision-resistant stream derivation: distinct (replicate, role) pairs
/// map to distinct streams under one master seed.
SeededStream derive_stream(std::uint64_t master_seed, std::uint64_t replicate,
                           std::string_view role);

/// 64-bit mix of a master seed with labels, used by derive_stream and by
/// callers that only need a derived seed value.
std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t replicate,
                          std::string_view role);

}  // namespace permdiag
