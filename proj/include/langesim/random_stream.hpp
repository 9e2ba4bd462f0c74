#pragma once

#include <cstdint>

#include <boost/random/normal_distribution.hpp>

#include "langesim/types.hpp"

namespace langesim {

// SplitMix64 output function: a bijective avalanche mixer on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Engine seed for stream `stream_id` of `master_seed`:
//   splitmix64(splitmix64(master_seed) ^ splitmix64(stream_id ^ 0xD1B54A32D192ED03))
// The engine is xoshiro256++ whose four state words are
// splitmix64(seed + i * 0x9E3779B97F4A7C15), i = 0..3. Normals come from
// Boost's ziggurat normal_distribution (tabulated constants, libm only in the
// tail), uniforms from the top 53 bits of one engine word.
constexpr std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t stream_id) {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(stream_id ^ 0xD1B54A32D192ED03ULL));
}

// xoshiro256++ (Blackman & Vigna), a UniformRandomBitGenerator.
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256pp(std::uint64_t seed) {
        for (int i = 0; i < 4; ++i)
            s_[i] = splitmix64(seed + static_cast<std::uint64_t>(i) * 0x9E3779B97F4A7C15ULL);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() {
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

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

class RandomStream {
public:
    RandomStream(std::uint64_t master_seed, std::uint64_t stream_id)
        : master_seed_(master_seed), stream_id_(stream_id), engine_(stream_seed(master_seed, stream_id)) {}

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal() {
        ++normals_drawn_;
        return normal_(engine_);
    }

    template <class Derived>
    void fill_normal(Eigen::MatrixBase<Derived>& out) {
        for (Eigen::Index k = 0; k < out.size(); ++k) out(k) = normal();
    }

    std::uint64_t normals_drawn() const { return normals_drawn_; }

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    Xoshiro256pp engine_;
    boost::random::normal_distribution<double> normal_;
    std::uint64_t normals_drawn_ = 0;
};

inline RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    return RandomStream(master_seed, stream_id);
}

// Seed for an independent sub-experiment (e.g. one sweep point).
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    return stream_seed(master_seed ^ 0x6A09E667F3BCC909ULL, index);
}

}  // namespace langesim
